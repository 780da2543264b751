#pragma once

#include <vector>

#include "blurtrack/geometry.hpp"

// Ground-truth heatmap generation. Four variants: binary/real-valued disk
// maps around a point label, and their blur-extended counterparts that
// cover the whole streak segment. Pixels are sampled at integer lattice
// coordinates; the real-valued maps calibrate their scale constant from
// the distances actually realized on the raster so that the smallest
// non-zero value equals min_value exactly.

namespace blurtrack {

struct Heatmap {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // row-major, each in [0, 1]

    Heatmap() = default;
    Heatmap(int w, int h) : width(w), height(h), values(static_cast<size_t>(w) * h, 0.0) {}

    double at(int x, int y) const { return values[static_cast<size_t>(y) * width + x]; }
    double& at(int x, int y) { return values[static_cast<size_t>(y) * width + x]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

struct HeatmapParams {
    double disk_radius = 2.5;  // d
    double min_value = 0.7;    // c_min, smallest non-zero value of real maps
};

struct RasterSize {
    int width = 0;
    int height = 0;
};

// Distance from point p to the segment [a, b], via clamped projection.
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

Heatmap binary_disk_map(const Vec2& center, const HeatmapParams& params, RasterSize size);
Heatmap binary_blur_map(const BlurSegment& segment, const HeatmapParams& params, RasterSize size);
Heatmap real_disk_map(const Vec2& center, const HeatmapParams& params, RasterSize size);
Heatmap real_blur_map(const BlurSegment& segment, const HeatmapParams& params, RasterSize size);

}  // namespace blurtrack
