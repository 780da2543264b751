#pragma once

#include <array>
#include <optional>
#include <vector>

#include "blurtrack/geometry.hpp"

// Pinhole camera anchored to the table frame: intrinsics reduced to a
// single focal length with the principal point fixed at the image center,
// extrinsics as axis-angle rotation plus translation. Calibration fits
// all seven parameters to 2D-3D keypoint correspondences by minimizing
// reprojection error.

namespace blurtrack {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct CameraModel {
    double f = 1000.0;           // focal length, pixels
    Vec3 rvec{0.0, 0.0, 0.0};    // axis-angle, |rvec| < pi
    Vec3 tvec{0.0, 0.0, 0.0};    // meters
    Vec2 principal;              // image center, pixels
};

struct Keypoint2D3D {
    Vec3 world;  // meters, table frame: Y along the table length, Z its normal
    Vec2 image;  // pixels
};

Mat3 rodrigues(const Vec3& rvec);
Vec3 rotation_to_axis_angle(const Mat3& R);

// Throws "behind-camera" for points with non-positive depth.
Vec2 project(const CameraModel& cam, const Vec3& world);

// Ray through a pixel: camera origin and unit direction in world coordinates.
struct Ray {
    Vec3 origin;
    Vec3 dir;
};
Ray unproject_ray(const CameraModel& cam, const Vec2& pixel);

struct CalibrationResult {
    CameraModel camera;
    double rms = 0.0;  // root-mean-square reprojection error, pixels
};

// Nelder-Mead over (f, r, T), multi-start over four canonical poses around
// the table when no initial camera is supplied. Needs >= 6 correspondences
// that are not collinear in the image.
CalibrationResult calibrate_pnp(const std::vector<Keypoint2D3D>& keypoints, Vec2 principal,
                                const std::optional<CameraModel>& init = std::nullopt);

// Camera at `eye` aimed at `target`, image y axis pointing toward the
// ground (y-down image convention).
CameraModel camera_from_lookat(const Vec3& eye, const Vec3& target, double f, Vec2 principal);

// The six annotated table keypoints in the table frame: four corners, the
// midline-backline intersection, the net-side edge intersection. Standard
// competition table, 2.74 m x 1.525 m, surface at Z = 0.
std::vector<Vec3> table_keypoints();

constexpr double kTableLength = 2.74;   // meters, along Y
constexpr double kTableWidth = 1.525;   // meters, along X

}  // namespace blurtrack
