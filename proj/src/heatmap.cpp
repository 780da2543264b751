#include "blurtrack/heatmap.hpp"

#include <algorithm>
#include <cmath>

namespace blurtrack {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    Vec2 ab = b - a;
    double len2 = ab.dot(ab);
    if (len2 == 0.0) return distance(p, a);
    double t = (p - a).dot(ab) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + ab * t);
}

Heatmap binary_disk_map(const Vec2& center, const HeatmapParams& params, RasterSize size) {
    Heatmap map(size.width, size.height);
    const double r2 = params.disk_radius * params.disk_radius;
#pragma omp parallel for schedule(static)
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double dx = x - center.x;
            double dy = y - center.y;
            if (dx * dx + dy * dy <= r2) map.at(x, y) = 1.0;
        }
    }
    return map;
}

Heatmap binary_blur_map(const BlurSegment& segment, const HeatmapParams& params, RasterSize size) {
    Heatmap map(size.width, size.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double d = point_segment_distance({double(x), double(y)}, segment.front, segment.back);
            if (d <= params.disk_radius) map.at(x, y) = 1.0;
        }
    }
    return map;
}

namespace {

// Shared core of the real-valued maps. The segment degenerates to a point
// for the disk variant. Two passes: collect the realized in-region
// distances, then write min(C * exp(-dist^2 / d^2), 1) with C chosen so
// the smallest non-zero value lands exactly on min_value.
Heatmap real_map(const BlurSegment& segment, const HeatmapParams& params, RasterSize size) {
    Heatmap map(size.width, size.height);
    const double d = params.disk_radius;
    std::vector<double> dist(map.values.size(), -1.0);

    double max_dist = -1.0;
#pragma omp parallel for schedule(static) reduction(max : max_dist)
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double r = point_segment_distance({double(x), double(y)}, segment.front, segment.back);
            if (r <= d) {
                dist[static_cast<size_t>(y) * size.width + x] = r;
                max_dist = std::max(max_dist, r);
            }
        }
    }
    if (max_dist < 0.0) return map;  // nothing within range of the raster

    const double scale = params.min_value * std::exp(max_dist * max_dist / (d * d));
#pragma omp parallel for schedule(static)
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double r = dist[static_cast<size_t>(y) * size.width + x];
            if (r < 0.0) continue;
            map.at(x, y) = std::min(scale * std::exp(-r * r / (d * d)), 1.0);
        }
    }
    return map;
}

}  // namespace

Heatmap real_disk_map(const Vec2& center, const HeatmapParams& params, RasterSize size) {
    return real_map({center, center}, params, size);
}

Heatmap real_blur_map(const BlurSegment& segment, const HeatmapParams& params, RasterSize size) {
    return real_map(segment, params, size);
}

}  // namespace blurtrack
