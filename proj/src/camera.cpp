#include "blurtrack/camera.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "blurtrack/optim.hpp"

namespace blurtrack {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }
Vec3 normalized(const Vec3& a) {
    double n = norm3(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}

Vec3 apply(const Mat3& m, const Vec3& v) {
    return {dot3(m[0], v), dot3(m[1], v), dot3(m[2], v)};
}

}  // namespace

Mat3 rodrigues(const Vec3& rvec) {
    double angle = norm3(rvec);
    Mat3 r{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    if (angle < 1e-12) return r;

    Vec3 k = {rvec[0] / angle, rvec[1] / angle, rvec[2] / angle};
    double c = std::cos(angle);
    double s = std::sin(angle);
    double v = 1.0 - c;
    r[0] = {c + k[0] * k[0] * v, k[0] * k[1] * v - k[2] * s, k[0] * k[2] * v + k[1] * s};
    r[1] = {k[1] * k[0] * v + k[2] * s, c + k[1] * k[1] * v, k[1] * k[2] * v - k[0] * s};
    r[2] = {k[2] * k[0] * v - k[1] * s, k[2] * k[1] * v + k[0] * s, c + k[2] * k[2] * v};
    return r;
}

Vec3 rotation_to_axis_angle(const Mat3& R) {
    double trace = R[0][0] + R[1][1] + R[2][2];
    double c = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
    double angle = std::acos(c);
    if (angle < 1e-12) return {0.0, 0.0, 0.0};

    if (angle > kPi - 1e-6) {
        // Near-pi rotation: extract the axis from R + I.
        Vec3 axis;
        double xx = (R[0][0] + 1.0) / 2.0;
        double yy = (R[1][1] + 1.0) / 2.0;
        double zz = (R[2][2] + 1.0) / 2.0;
        if (xx >= yy && xx >= zz) {
            double x = std::sqrt(std::max(xx, 0.0));
            axis = {x, R[0][1] / (2.0 * x), R[0][2] / (2.0 * x)};
        } else if (yy >= zz) {
            double y = std::sqrt(std::max(yy, 0.0));
            axis = {R[0][1] / (2.0 * y), y, R[1][2] / (2.0 * y)};
        } else {
            double z = std::sqrt(std::max(zz, 0.0));
            axis = {R[0][2] / (2.0 * z), R[1][2] / (2.0 * z), z};
        }
        axis = normalized(axis);
        return {axis[0] * angle, axis[1] * angle, axis[2] * angle};
    }

    double s = 2.0 * std::sin(angle);
    return {(R[2][1] - R[1][2]) / s * angle, (R[0][2] - R[2][0]) / s * angle,
            (R[1][0] - R[0][1]) / s * angle};
}

Vec2 project(const CameraModel& cam, const Vec3& world) {
    Mat3 R = rodrigues(cam.rvec);
    Vec3 pc = apply(R, world);
    pc = {pc[0] + cam.tvec[0], pc[1] + cam.tvec[1], pc[2] + cam.tvec[2]};
    if (pc[2] <= 0.0) throw std::runtime_error("behind-camera");
    return {cam.f * pc[0] / pc[2] + cam.principal.x, cam.f * pc[1] / pc[2] + cam.principal.y};
}

Ray unproject_ray(const CameraModel& cam, const Vec2& pixel) {
    Mat3 R = rodrigues(cam.rvec);
    // Transpose = inverse for a rotation.
    Mat3 Rt;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) Rt[i][j] = R[j][i];
    }
    Vec3 dir_cam = {(pixel.x - cam.principal.x) / cam.f, (pixel.y - cam.principal.y) / cam.f, 1.0};
    Ray ray;
    Vec3 neg_t = {-cam.tvec[0], -cam.tvec[1], -cam.tvec[2]};
    ray.origin = apply(Rt, neg_t);
    ray.dir = normalized(apply(Rt, dir_cam));
    return ray;
}

std::vector<Vec3> table_keypoints() {
    const double hw = kTableWidth / 2.0;
    const double hl = kTableLength / 2.0;
    return {
        {-hw, -hl, 0.0},  // corners
        {hw, -hl, 0.0},
        {hw, hl, 0.0},
        {-hw, hl, 0.0},
        {0.0, -hl, 0.0},  // midline-backline intersection
        {hw, 0.0, 0.0},   // net meets the side edge
    };
}

namespace {

// Rows are the camera axes: z looks from `eye` toward `target`, y points
// toward the ground so the image y-axis runs downward.
Mat3 look_at(const Vec3& eye, const Vec3& target) {
    Vec3 z = normalized(sub(target, eye));
    Vec3 up{0.0, 0.0, 1.0};
    if (std::fabs(dot3(z, up)) > 0.999) up = {0.0, 1.0, 0.0};
    Vec3 x = normalized(cross(z, up));
    Vec3 y = cross(z, x);
    return {x, y, z};
}

double reprojection_cost(const std::vector<double>& p, const std::vector<Keypoint2D3D>& keypoints,
                         Vec2 principal) {
    if (p[0] <= 1.0) return 1e30;  // focal length must stay positive
    CameraModel cam;
    cam.f = p[0];
    cam.rvec = {p[1], p[2], p[3]};
    cam.tvec = {p[4], p[5], p[6]};
    cam.principal = principal;

    Mat3 R = rodrigues(cam.rvec);
    double cost = 0.0;
    for (const Keypoint2D3D& kp : keypoints) {
        Vec3 pc = apply(R, kp.world);
        pc = {pc[0] + cam.tvec[0], pc[1] + cam.tvec[1], pc[2] + cam.tvec[2]};
        if (pc[2] <= 0.05) return 1e30;  // keypoint behind or grazing the camera
        double x = cam.f * pc[0] / pc[2] + principal.x;
        double y = cam.f * pc[1] / pc[2] + principal.y;
        double dx = x - kp.image.x;
        double dy = y - kp.image.y;
        cost += dx * dx + dy * dy;
    }
    return cost;
}

bool image_points_collinear(const std::vector<Keypoint2D3D>& keypoints) {
    const Vec2& a = keypoints[0].image;
    for (size_t i = 1; i + 1 < keypoints.size(); ++i) {
        Vec2 u = keypoints[i].image - a;
        for (size_t j = i + 1; j < keypoints.size(); ++j) {
            Vec2 v = keypoints[j].image - a;
            if (std::fabs(u.x * v.y - u.y * v.x) > 1e-6) return false;
        }
    }
    return true;
}

}  // namespace

CameraModel camera_from_lookat(const Vec3& eye, const Vec3& target, double f, Vec2 principal) {
    Mat3 R = look_at(eye, target);
    CameraModel cam;
    cam.f = f;
    cam.principal = principal;
    cam.rvec = rotation_to_axis_angle(R);
    Vec3 rot_eye = apply(R, eye);
    cam.tvec = {-rot_eye[0], -rot_eye[1], -rot_eye[2]};
    return cam;
}

CalibrationResult calibrate_pnp(const std::vector<Keypoint2D3D>& keypoints, Vec2 principal,
                                const std::optional<CameraModel>& init) {
    if (keypoints.size() < 6) throw std::invalid_argument("underdetermined: need >= 6 keypoints");
    if (image_points_collinear(keypoints)) {
        throw std::invalid_argument("degenerate: image keypoints are collinear");
    }

    auto cost = [&](const std::vector<double>& p) {
        return reprojection_cost(p, keypoints, principal);
    };

    std::vector<std::vector<double>> starts;
    if (init) {
        starts.push_back({init->f, init->rvec[0], init->rvec[1], init->rvec[2], init->tvec[0],
                          init->tvec[1], init->tvec[2]});
    } else {
        // Canonical broadcast viewpoints: behind each baseline and on each
        // side, elevated, aimed at the table center.
        double f0 = 2.4 * std::max(principal.x, principal.y);
        Vec3 center{0.0, 0.0, 0.0};
        for (const Vec3& eye : {Vec3{0.0, -6.0, 2.5}, Vec3{0.0, 6.0, 2.5}, Vec3{6.0, 0.0, 2.5},
                                Vec3{-6.0, 0.0, 2.5}}) {
            CameraModel pose = camera_from_lookat(eye, center, f0, principal);
            starts.push_back({pose.f, pose.rvec[0], pose.rvec[1], pose.rvec[2], pose.tvec[0],
                              pose.tvec[1], pose.tvec[2]});
        }
    }

    NelderMeadOptions nm;
    nm.max_iterations = 4000;
    nm.simplex_tolerance = 1e-10;
    nm.fvalue_tolerance = 1e-14;

    std::vector<double> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto& start : starts) {
        nm.initial_step = {0.05 * start[0], 0.15, 0.15, 0.15, 0.4, 0.4, 0.4};
        std::vector<double> x = start;
        double fx = std::numeric_limits<double>::infinity();
        // Repeated restarts recover from collapsed simplexes in 7 dimensions.
        for (int round = 0; round < 6; ++round) {
            NelderMeadResult r = nelder_mead(cost, x, nm);
            x = r.x;
            if (fx - r.fx < 1e-14 * (1.0 + std::fabs(fx)) && round > 0) {
                fx = std::min(fx, r.fx);
                break;
            }
            fx = r.fx;
            nm.initial_step = {0.002 * std::max(x[0], 1.0), 0.01, 0.01, 0.01, 0.03, 0.03, 0.03};
        }
        if (fx < best_cost) {
            best_cost = fx;
            best = x;
        }
    }
    if (best.empty() || !std::isfinite(best_cost) || best_cost >= 1e30) {
        throw std::runtime_error("calibration diverged: no pose with all keypoints in view");
    }

    CalibrationResult result;
    result.camera.f = best[0];
    result.camera.rvec = {best[1], best[2], best[3]};
    result.camera.tvec = {best[4], best[5], best[6]};
    result.camera.principal = principal;

    // Canonicalize the axis-angle vector to |r| < pi.
    double angle = norm3(result.camera.rvec);
    if (angle >= kPi) {
        double wrapped = std::fmod(angle, 2.0 * kPi);
        if (wrapped > kPi) wrapped -= 2.0 * kPi;  // flip direction
        double ratio = wrapped / angle;
        result.camera.rvec = {result.camera.rvec[0] * ratio, result.camera.rvec[1] * ratio,
                              result.camera.rvec[2] * ratio};
    }

    result.rms = std::sqrt(best_cost / double(keypoints.size()));
    return result;
}

}  // namespace blurtrack
