#pragma once

#include <optional>
#include <vector>

#include "blurtrack/geometry.hpp"
#include "blurtrack/optim.hpp"

// Quadratic image-plane trajectory fitting. Position-only fits use linear
// least squares; position+blur fits minimize per-axis costs that tie the
// trajectory derivative to the observed blur through the exposure time,
// with a 0.2 weight on the derivative terms, using Nelder-Mead over the
// six coefficients plus a shared exposure time.

namespace blurtrack {

struct QuadTrajectory2D {
    // P_x(t) = ax*t^2 + bx*t + cx, P_y likewise; t in seconds.
    double ax = 0.0, bx = 0.0, cx = 0.0;
    double ay = 0.0, by = 0.0, cy = 0.0;
    std::optional<double> t_exp;  // seconds; present only for blur fits

    Vec2 position(double t) const {
        return {(ax * t + bx) * t + cx, (ay * t + by) * t + cy};
    }
    Vec2 velocity(double t) const { return {2.0 * ax * t + bx, 2.0 * ay * t + by}; }
};

struct BlurObservation {
    double half_length = 0.0;  // pixels
    double theta = 0.0;        // radians, may be sign-ambiguous
};

struct Observation {
    double t = 0.0;  // seconds, strictly increasing within a sequence
    Vec2 pos;
    std::optional<BlurObservation> blur;
};

struct BlurFitOptions {
    double blur_weight = 0.2;
    double t_exp_min = 1e-4;  // plausible shutter range, seconds
    double t_exp_max = 0.05;
    bool joint_axes = true;  // false: independent t_exp per axis (diagnostic)
    NelderMeadOptions optimizer;
    int restarts = 2;  // extra Nelder-Mead rounds from the previous optimum
};

struct BlurFitResult {
    QuadTrajectory2D trajectory;
    bool fell_back_to_position = false;  // all blur lengths were zero
    bool t_exp_clamped = false;          // initialization hit a clamp bound
    double cost = 0.0;
};

// Least-squares quadratic per axis; exact interpolation with 3 points.
// Throws "underdetermined" with fewer than 3 distinct times.
QuadTrajectory2D fit_position(const std::vector<Observation>& obs);

// Image velocity implied by a blur observation: (l cos(theta), l sin(theta)) / t_exp.
Vec2 blur_velocity(double half_length, double theta, double t_exp);

BlurFitResult fit_position_blur(const std::vector<Observation>& obs,
                                const BlurFitOptions& options = {});

inline Vec2 predict(const QuadTrajectory2D& traj, double t) { return traj.position(t); }

struct TimedPoint {
    double t = 0.0;
    Vec2 pos;
};

// Mean Euclidean distance between predictions and ground truth points.
double mae(const QuadTrajectory2D& traj, const std::vector<TimedPoint>& ground_truth);

// Resolve the mod-180 sign ambiguity of blur angles so each blur direction
// has a positive dot product with the local displacement between
// neighboring observations. Returns a corrected copy.
std::vector<Observation> resolve_blur_signs(const std::vector<Observation>& obs);

}  // namespace blurtrack
