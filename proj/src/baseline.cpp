#include "blurtrack/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace blurtrack {

RoiCrop roi_extract(const GrayFrame& frame, const Vec2& center, int half_size) {
    if (half_size < 1) throw std::invalid_argument("roi half_size must be >= 1");
    int cx = int(std::lround(center.x));
    int cy = int(std::lround(center.y));
    if (cx < 0 || cx >= frame.width || cy < 0 || cy >= frame.height) {
        throw std::runtime_error("roi-out-of-bounds");
    }

    int x0 = std::max(0, cx - half_size);
    int y0 = std::max(0, cy - half_size);
    int x1 = std::min(frame.width, cx + half_size);
    int y1 = std::min(frame.height, cy + half_size);

    RoiCrop roi;
    roi.offset_x = x0;
    roi.offset_y = y0;
    roi.crop = GrayFrame(x1 - x0, y1 - y0);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            roi.crop.at(x - x0, y - y0) = frame.at(x, y);
        }
    }
    return roi;
}

Mask frame_diff_mask(const GrayFrame& a, const GrayFrame& b, double thresh) {
    if (a.width != b.width || a.height != b.height) {
        throw std::invalid_argument("frame_diff_mask: dimension mismatch");
    }
    Mask mask(a.width, a.height);
    for (size_t i = 0; i < a.values.size(); ++i) {
        if (std::fabs(a.values[i] - b.values[i]) > thresh) mask.values[i] = 1;
    }
    return mask;
}

std::optional<std::vector<Pixel>> nearest_component(const Mask& mask, const Vec2& roi_center) {
    auto components = connected_components(mask);
    if (components.empty()) return std::nullopt;

    const std::vector<Pixel>* best = nullptr;
    double best_dist = 0.0;
    for (const auto& component : components) {
        double sx = 0.0, sy = 0.0;
        for (const Pixel& p : component) {
            sx += p.x;
            sy += p.y;
        }
        Vec2 centroid{sx / double(component.size()), sy / double(component.size())};
        double d = distance(centroid, roi_center);
        if (!best || d < best_dist - 1e-9 ||
            (std::fabs(d - best_dist) <= 1e-9 && component.size() > best->size())) {
            best = &component;
            best_dist = d;
        }
    }
    return *best;
}

std::optional<BlurLabel> baseline_blur(const GrayFrame& frame_n, const GrayFrame& frame_ref,
                                       const Vec2& detected_center, const BaselineParams& params) {
    RoiCrop roi_n = roi_extract(frame_n, detected_center, params.roi_half_size);
    RoiCrop roi_ref = roi_extract(frame_ref, detected_center, params.roi_half_size);
    Mask diff = frame_diff_mask(roi_n.crop, roi_ref.crop, params.diff_threshold);

    Vec2 local_center{detected_center.x - roi_n.offset_x, detected_center.y - roi_n.offset_y};
    auto component = nearest_component(diff, local_center);
    if (!component) return std::nullopt;

    // Blob geometry on the binary mask: unweighted centroid, PCA axis,
    // projection-range length (same extraction as the heatmap path, with
    // uniform weights).
    double sx = 0.0, sy = 0.0;
    for (const Pixel& p : *component) {
        sx += p.x;
        sy += p.y;
    }
    Vec2 centroid{sx / double(component->size()), sy / double(component->size())};

    PrincipalAxis pa = principal_axis(*component);
    BlurLabel label;
    label.center = {centroid.x + roi_n.offset_x, centroid.y + roi_n.offset_y};
    label.visible = true;
    if (pa.degenerate) {
        int min_x = component->front().x, max_x = min_x;
        for (const Pixel& p : *component) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
        }
        label.theta = 0.0;
        label.half_length = (max_x - min_x) / 2.0;
        return label;
    }

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Pixel& p : *component) {
        double proj = pa.axis.dot({double(p.x), double(p.y)});
        lo = std::min(lo, proj);
        hi = std::max(hi, proj);
    }
    label.theta = fold_half_circle(std::atan2(pa.axis.y, pa.axis.x));
    label.half_length = (hi - lo) / 2.0;
    return label;
}

}  // namespace blurtrack
