#include "blurtrack/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace blurtrack {

namespace {

// Least-squares solve of an n x 3 system via Householder QR.
std::array<double, 3> qr_solve3(const std::vector<std::array<double, 3>>& a_in,
                                const std::vector<double>& b_in) {
    auto a = a_in;
    auto b = b_in;
    const size_t n = a.size();

    for (size_t col = 0; col < 3; ++col) {
        double norm = 0.0;
        for (size_t i = col; i < n; ++i) norm += a[i][col] * a[i][col];
        norm = std::sqrt(norm);
        if (norm == 0.0) throw std::runtime_error("underdetermined");

        double alpha = a[col][col] > 0.0 ? -norm : norm;
        std::vector<double> v(n, 0.0);
        v[col] = a[col][col] - alpha;
        for (size_t i = col + 1; i < n; ++i) v[i] = a[i][col];
        double vnorm2 = 0.0;
        for (size_t i = col; i < n; ++i) vnorm2 += v[i] * v[i];
        if (vnorm2 == 0.0) continue;

        for (size_t j = col; j < 3; ++j) {
            double dot = 0.0;
            for (size_t i = col; i < n; ++i) dot += v[i] * a[i][j];
            double f = 2.0 * dot / vnorm2;
            for (size_t i = col; i < n; ++i) a[i][j] -= f * v[i];
        }
        double dot = 0.0;
        for (size_t i = col; i < n; ++i) dot += v[i] * b[i];
        double f = 2.0 * dot / vnorm2;
        for (size_t i = col; i < n; ++i) b[i] -= f * v[i];
    }

    std::array<double, 3> x{};
    for (int i = 2; i >= 0; --i) {
        double s = b[i];
        for (int j = i + 1; j < 3; ++j) s -= a[i][j] * x[j];
        if (a[i][i] == 0.0) throw std::runtime_error("underdetermined");
        x[i] = s / a[i][i];
    }
    return x;
}

struct TimeFrame {
    double origin = 0.0;  // first observation time
    double scale = 1.0;   // time span, for conditioning
};

TimeFrame make_time_frame(const std::vector<Observation>& obs) {
    TimeFrame tf;
    tf.origin = obs.front().t;
    double span = 0.0;
    for (const Observation& o : obs) span = std::max(span, std::fabs(o.t - tf.origin));
    tf.scale = span > 0.0 ? span : 1.0;
    return tf;
}

// Coefficients of P(tau) with tau = (t - origin)/scale, converted to
// coefficients in absolute t.
std::array<double, 3> to_absolute(const std::array<double, 3>& scaled, const TimeFrame& tf) {
    double a = scaled[0] / (tf.scale * tf.scale);
    double b = scaled[1] / tf.scale - 2.0 * a * tf.origin;
    double c = scaled[0] * tf.origin * tf.origin / (tf.scale * tf.scale) -
               scaled[1] * tf.origin / tf.scale + scaled[2];
    return {a, b, c};
}

void check_observations(const std::vector<Observation>& obs) {
    if (obs.size() < 3) throw std::invalid_argument("underdetermined: need >= 3 observations");
    for (size_t i = 1; i < obs.size(); ++i) {
        if (!(obs[i].t > obs[i - 1].t)) {
            throw std::invalid_argument("underdetermined: times must be strictly increasing");
        }
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

bool has_blur(const Observation& o) { return o.blur && o.blur->half_length > 0.0; }

}  // namespace

QuadTrajectory2D fit_position(const std::vector<Observation>& obs) {
    check_observations(obs);
    TimeFrame tf = make_time_frame(obs);

    std::vector<std::array<double, 3>> design;
    std::vector<double> bx, by;
    design.reserve(obs.size());
    for (const Observation& o : obs) {
        double tau = (o.t - tf.origin) / tf.scale;
        design.push_back({tau * tau, tau, 1.0});
        bx.push_back(o.pos.x);
        by.push_back(o.pos.y);
    }

    auto cx = to_absolute(qr_solve3(design, bx), tf);
    auto cy = to_absolute(qr_solve3(design, by), tf);

    QuadTrajectory2D traj;
    traj.ax = cx[0];
    traj.bx = cx[1];
    traj.cx = cx[2];
    traj.ay = cy[0];
    traj.by = cy[1];
    traj.cy = cy[2];
    return traj;
}

Vec2 blur_velocity(double half_length, double theta, double t_exp) {
    if (t_exp <= 0.0) throw std::invalid_argument("blur_velocity: t_exp must be > 0");
    return {half_length * std::cos(theta) / t_exp, half_length * std::sin(theta) / t_exp};
}

std::vector<Observation> resolve_blur_signs(const std::vector<Observation>& obs) {
    std::vector<Observation> out = obs;
    for (size_t k = 0; k < out.size(); ++k) {
        if (!has_blur(out[k])) continue;
        Vec2 disp;
        if (k + 1 < out.size()) {
            disp = out[k + 1].pos - out[k].pos;
        } else if (k > 0) {
            disp = out[k].pos - out[k - 1].pos;
        } else {
            continue;  // single observation, no temporal context
        }
        Vec2 dir{std::cos(out[k].blur->theta), std::sin(out[k].blur->theta)};
        if (dir.dot(disp) < 0.0) out[k].blur->theta += kPi;
    }
    return out;
}

BlurFitResult fit_position_blur(const std::vector<Observation>& obs_in,
                                const BlurFitOptions& options) {
    check_observations(obs_in);

    BlurFitResult result;
    bool any_blur = std::any_of(obs_in.begin(), obs_in.end(), has_blur);
    if (!any_blur) {
        result.trajectory = fit_position(obs_in);
        result.fell_back_to_position = true;
        return result;
    }

    std::vector<Observation> obs = resolve_blur_signs(obs_in);
    TimeFrame tf = make_time_frame(obs);
    const double n_obs = double(obs.size());
    const double weight = options.blur_weight;

    // Exposure-time initialization: the streak spans the per-exposure
    // displacement, so 2*l / speed is a first estimate.
    std::vector<double> t_exp_guesses;
    for (size_t k = 0; k < obs.size(); ++k) {
        if (!has_blur(obs[k])) continue;
        size_t a = k + 1 < obs.size() ? k : k - 1;
        size_t b = a + 1;
        double speed = distance(obs[b].pos, obs[a].pos) / (obs[b].t - obs[a].t);
        if (speed > 0.0) t_exp_guesses.push_back(2.0 * obs[k].blur->half_length / speed);
    }
    double t_exp0 = t_exp_guesses.empty() ? 0.01 : median(t_exp_guesses);
    if (t_exp0 < options.t_exp_min || t_exp0 > options.t_exp_max) result.t_exp_clamped = true;
    t_exp0 = std::clamp(t_exp0, options.t_exp_min, options.t_exp_max);

    QuadTrajectory2D init = fit_position(obs);
    // Scaled-time coefficients of the initial fit.
    auto scale_coeffs = [&](double a, double b, double c) {
        double s = tf.scale, o = tf.origin;
        return std::array<double, 3>{a * s * s, (2.0 * a * o + b) * s, (a * o + b) * o + c};
    };
    auto ix = scale_coeffs(init.ax, init.bx, init.cx);
    auto iy = scale_coeffs(init.ay, init.by, init.cy);

    // Per-observation cost in one axis: squared position residual plus the
    // weighted squared mismatch between the trajectory derivative and the
    // blur-implied velocity.
    auto axis_cost = [&](const double* coef, double t_exp, bool x_axis) {
        if (t_exp <= 1e-7 || t_exp > 1.0) return 1e30;  // keep the simplex in range
        double cost = 0.0;
        for (const Observation& o : obs) {
            double tau = (o.t - tf.origin) / tf.scale;
            double pos = (coef[0] * tau + coef[1]) * tau + coef[2];
            double vel = (2.0 * coef[0] * tau + coef[1]) / tf.scale;
            double meas = x_axis ? o.pos.x : o.pos.y;
            double r = pos - meas;
            cost += r * r;
            if (has_blur(o)) {
                double along = x_axis ? std::cos(o.blur->theta) : std::sin(o.blur->theta);
                double dv = vel - o.blur->half_length * along / t_exp;
                cost += weight * dv * dv;
            }
        }
        return cost / n_obs;
    };

    auto run = [&](const std::function<double(const std::vector<double>&)>& f,
                   std::vector<double> x0, std::vector<double> steps) {
        NelderMeadOptions nm = options.optimizer;
        nm.initial_step = std::move(steps);
        NelderMeadResult best = nelder_mead(f, std::move(x0), nm);
        for (int r = 0; r < options.restarts; ++r) {
            NelderMeadResult again = nelder_mead(f, best.x, nm);
            if (again.fx < best.fx) best = std::move(again);
        }
        return best;
    };

    auto coef_step = [](double v) { return std::max(0.05 * std::fabs(v), 0.25); };

    std::array<double, 3> sx{}, sy{};
    double t_exp_x = t_exp0, t_exp_y = t_exp0;
    if (options.joint_axes) {
        auto cost = [&](const std::vector<double>& p) {
            return axis_cost(&p[0], p[6], true) + axis_cost(&p[3], p[6], false);
        };
        std::vector<double> x0{ix[0], ix[1], ix[2], iy[0], iy[1], iy[2], t_exp0};
        std::vector<double> steps;
        for (int i = 0; i < 6; ++i) steps.push_back(coef_step(x0[i]));
        steps.push_back(0.25 * t_exp0);
        NelderMeadResult best = run(cost, x0, steps);
        sx = {best.x[0], best.x[1], best.x[2]};
        sy = {best.x[3], best.x[4], best.x[5]};
        t_exp_x = t_exp_y = best.x[6];
        result.cost = best.fx;
    } else {
        for (bool x_axis : {true, false}) {
            auto& icoef = x_axis ? ix : iy;
            auto cost = [&](const std::vector<double>& p) {
                return axis_cost(&p[0], p[3], x_axis);
            };
            std::vector<double> x0{icoef[0], icoef[1], icoef[2], t_exp0};
            std::vector<double> steps{coef_step(x0[0]), coef_step(x0[1]), coef_step(x0[2]),
                                      0.25 * t_exp0};
            NelderMeadResult best = run(cost, x0, steps);
            (x_axis ? sx : sy) = {best.x[0], best.x[1], best.x[2]};
            (x_axis ? t_exp_x : t_exp_y) = best.x[3];
            result.cost += best.fx;
        }
    }

    auto cx = to_absolute(sx, tf);
    auto cy = to_absolute(sy, tf);
    result.trajectory.ax = cx[0];
    result.trajectory.bx = cx[1];
    result.trajectory.cx = cx[2];
    result.trajectory.ay = cy[0];
    result.trajectory.by = cy[1];
    result.trajectory.cy = cy[2];
    // For the split variant the two exposure estimates are averaged for reporting.
    result.trajectory.t_exp = options.joint_axes ? t_exp_x : 0.5 * (t_exp_x + t_exp_y);
    return result;
}

double mae(const QuadTrajectory2D& traj, const std::vector<TimedPoint>& ground_truth) {
    if (ground_truth.empty()) throw std::invalid_argument("mae: empty ground truth");
    double sum = 0.0;
    for (const TimedPoint& p : ground_truth) {
        sum += distance(traj.position(p.t), p.pos);
    }
    return sum / double(ground_truth.size());
}

}  // namespace blurtrack
