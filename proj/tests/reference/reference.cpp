#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blurtrack::reference {

double segment_distance_ternary(const Vec2& p, const Vec2& a, const Vec2& b) {
    auto dist2_at = [&](double t) {
        Vec2 q = a + (b - a) * t;
        return (p - q).dot(p - q);
    };
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        double m1 = lo + (hi - lo) / 3.0;
        double m2 = hi - (hi - lo) / 3.0;
        if (dist2_at(m1) < dist2_at(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    double best = std::min({dist2_at(0.0), dist2_at(1.0), dist2_at(0.5 * (lo + hi))});
    return std::sqrt(best);
}

Heatmap binary_disk_map(const Vec2& center, const HeatmapParams& params, RasterSize size) {
    Heatmap map(size.width, size.height);
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            if (std::hypot(x - center.x, y - center.y) <= params.disk_radius) {
                map.at(x, y) = 1.0;
            }
        }
    }
    return map;
}

Heatmap binary_blur_map(const BlurSegment& segment, const HeatmapParams& params, RasterSize size) {
    Heatmap map(size.width, size.height);
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double d = segment_distance_ternary({double(x), double(y)}, segment.front, segment.back);
            if (d <= params.disk_radius) map.at(x, y) = 1.0;
        }
    }
    return map;
}

Heatmap real_disk_map(const Vec2& center, const HeatmapParams& params, RasterSize size) {
    Heatmap map(size.width, size.height);
    const double d = params.disk_radius;

    double max_dist = -1.0;
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double r = std::hypot(x - center.x, y - center.y);
            if (r <= d) max_dist = std::max(max_dist, r);
        }
    }
    if (max_dist < 0.0) return map;
    double scale = params.min_value * std::exp(max_dist * max_dist / (d * d));

    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double r = std::hypot(x - center.x, y - center.y);
            if (r <= d) map.at(x, y) = std::min(scale * std::exp(-r * r / (d * d)), 1.0);
        }
    }
    return map;
}

Heatmap real_blur_map(const BlurSegment& segment, const HeatmapParams& params, RasterSize size) {
    Heatmap map(size.width, size.height);
    const double d = params.disk_radius;

    std::vector<double> dist(map.values.size());
    double max_dist = -1.0;
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double r = segment_distance_ternary({double(x), double(y)}, segment.front, segment.back);
            dist[size_t(y) * size.width + x] = r;
            if (r <= d) max_dist = std::max(max_dist, r);
        }
    }
    if (max_dist < 0.0) return map;
    double scale = params.min_value * std::exp(max_dist * max_dist / (d * d));

    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double r = dist[size_t(y) * size.width + x];
            if (r <= d) map.at(x, y) = std::min(scale * std::exp(-r * r / (d * d)), 1.0);
        }
    }
    return map;
}

Heatmap real_blur_map_sampled(const BlurSegment& segment, const HeatmapParams& params,
                              RasterSize size, int samples) {
    Heatmap map(size.width, size.height);
    const double d = params.disk_radius;

    std::vector<Vec2> points;
    points.reserve(size_t(samples));
    for (int i = 0; i < samples; ++i) {
        double t = samples == 1 ? 0.5 : double(i) / double(samples - 1);
        points.push_back(segment.back + (segment.front - segment.back) * t);
    }

    std::vector<double> dist(map.values.size());
    double max_dist = -1.0;
    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec2& q : points) {
                best = std::min(best, std::hypot(x - q.x, y - q.y));
            }
            dist[size_t(y) * size.width + x] = best;
            if (best <= d) max_dist = std::max(max_dist, best);
        }
    }
    if (max_dist < 0.0) return map;
    double scale = params.min_value * std::exp(max_dist * max_dist / (d * d));

    for (int y = 0; y < size.height; ++y) {
        for (int x = 0; x < size.width; ++x) {
            double r = dist[size_t(y) * size.width + x];
            if (r <= d) map.at(x, y) = std::min(scale * std::exp(-r * r / (d * d)), 1.0);
        }
    }
    return map;
}

std::array<double, 3> fit_quadratic_normal_equations(const std::vector<double>& t,
                                                     const std::vector<double>& v) {
    if (t.size() != v.size() || t.size() < 3) {
        throw std::invalid_argument("fit_quadratic_normal_equations: need >= 3 paired samples");
    }
    long double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    long double b0 = 0, b1 = 0, b2 = 0;
    for (size_t i = 0; i < t.size(); ++i) {
        long double x = t[i];
        long double y = v[i];
        long double x2 = x * x;
        s0 += 1;
        s1 += x;
        s2 += x2;
        s3 += x2 * x;
        s4 += x2 * x2;
        b0 += y;
        b1 += x * y;
        b2 += x2 * y;
    }
    // Normal equations for [a, b, c] with rows ordered by descending power.
    long double m[3][3] = {{s4, s3, s2}, {s3, s2, s1}, {s2, s1, s0}};
    long double rhs[3] = {b2, b1, b0};

    auto det3 = [](long double a[3][3]) {
        return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
               a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
               a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    };
    long double det = det3(m);
    if (det == 0.0L) throw std::runtime_error("fit_quadratic_normal_equations: singular system");

    std::array<double, 3> out{};
    for (int col = 0; col < 3; ++col) {
        long double mc[3][3];
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) mc[i][j] = j == col ? rhs[i] : m[i][j];
        }
        out[size_t(col)] = double(det3(mc) / det);
    }
    return out;
}

}  // namespace blurtrack::reference
