#pragma once

#include <cmath>
#include <optional>
#include <vector>

// Shared geometric types and label conventions.
//
// Image coordinate system: x to the right, y pointing down. Angles are
// measured in radians from the x-axis (so positive theta rotates toward
// the bottom of the image). Sub-pixel positions are continuous floats;
// rasterization happens only when heatmaps or frames are generated.

namespace blurtrack {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// A ball observation: streak midpoint, blur angle, blur half-length.
// When half_length == 0 the angle carries no information; consumers must
// not branch on it.
struct BlurLabel {
    Vec2 center;
    double theta = 0.0;        // radians, x-axis reference, y down
    double half_length = 0.0;  // pixels, >= 0
    bool visible = true;
};

// The two extremities of a blur streak. `front` is the +theta endpoint;
// recovering the true leading edge needs temporal context, so this is a
// convention, not a motion estimate.
struct BlurSegment {
    Vec2 front;
    Vec2 back;
};

struct FrameAnnotation {
    int frame_index = 0;
    std::optional<BlurLabel> label;
};

inline BlurSegment blur_endpoints(const BlurLabel& label) {
    Vec2 offset{label.half_length * std::cos(label.theta),
                label.half_length * std::sin(label.theta)};
    return {label.center + offset, label.center - offset};
}

inline Vec2 to_front_label(const BlurLabel& label) {
    return blur_endpoints(label).front;
}

inline BlurLabel from_front_label(const Vec2& front, double theta, double half_length) {
    BlurLabel label;
    label.center = front - Vec2{half_length * std::cos(theta), half_length * std::sin(theta)};
    label.theta = theta;
    label.half_length = half_length;
    return label;
}

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Fold an angle into (-pi/2, pi/2]. Single-frame blur direction is
// ambiguous mod 180 degrees, so orientation comparisons use this range.
inline double fold_half_circle(double theta) {
    double t = std::fmod(theta, kPi);
    if (t > kPi / 2.0) t -= kPi;
    if (t <= -kPi / 2.0) t += kPi;
    return t;
}

// Angular distance treating theta and theta+pi as identical, in radians,
// result in [0, pi/2].
inline double angle_diff_mod180(double a, double b) {
    double d = std::fabs(std::fmod(a - b, kPi));
    if (d > kPi / 2.0) d = kPi - d;
    return d;
}

}  // namespace blurtrack
