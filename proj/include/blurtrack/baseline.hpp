#pragma once

#include <optional>
#include <vector>

#include "blurtrack/extract.hpp"
#include "blurtrack/geometry.hpp"

// Classical frame-difference blur estimator: crop a region of interest
// around the detected ball, difference against an earlier frame
// (conventionally n-2), threshold, and take the connected component
// nearest the ROI center as the blur streak. Static-camera assumption.

namespace blurtrack {

struct GrayFrame {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // [0, 1]

    GrayFrame() = default;
    GrayFrame(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<size_t>(w) * h, fill) {}

    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
};

struct RoiCrop {
    GrayFrame crop;
    int offset_x = 0;  // top-left of the crop in frame coordinates
    int offset_y = 0;
};

struct BaselineParams {
    int roi_half_size = 40;    // covers the longest observed streaks with margin
    double diff_threshold = 0.1;
};

// Crop of [cx-h, cx+h) x [cy-h, cy+h), clamped to the frame. Throws
// "roi-out-of-bounds" if the rounded center lies outside the frame.
RoiCrop roi_extract(const GrayFrame& frame, const Vec2& center, int half_size);

// |a - b| > thresh, elementwise. Throws on dimension mismatch.
Mask frame_diff_mask(const GrayFrame& a, const GrayFrame& b, double thresh);

// Component whose unweighted centroid is nearest to roi_center; ties
// within 1e-9 go to the larger component. Empty mask yields nothing.
std::optional<std::vector<Pixel>> nearest_component(const Mask& mask, const Vec2& roi_center);

// Full pipeline on frames n and n-2. Returns nothing when the difference
// contains no component (no blur found).
std::optional<BlurLabel> baseline_blur(const GrayFrame& frame_n, const GrayFrame& frame_ref,
                                       const Vec2& detected_center,
                                       const BaselineParams& params = {});

// Standard luminance weights, for callers holding RGB planes.
inline double rgb_to_gray(double r, double g, double b) {
    return 0.299 * r + 0.587 * g + 0.114 * b;
}

}  // namespace blurtrack
