#include "blurtrack/extract.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace blurtrack {

Mask threshold_mask(const Heatmap& hm, double delta) {
    Mask mask(hm.width, hm.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < hm.height; ++y) {
        for (int x = 0; x < hm.width; ++x) {
            if (hm.at(x, y) > delta) mask.at(x, y) = 1;
        }
    }
    return mask;
}

std::vector<std::vector<Pixel>> connected_components(const Mask& mask) {
    std::vector<std::vector<Pixel>> components;
    std::vector<uint8_t> seen(mask.values.size(), 0);
    std::vector<Pixel> stack;

    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            size_t idx = static_cast<size_t>(y) * mask.width + x;
            if (!mask.values[idx] || seen[idx]) continue;

            std::vector<Pixel> component;
            stack.clear();
            stack.push_back({x, y});
            seen[idx] = 1;
            while (!stack.empty()) {
                Pixel p = stack.back();
                stack.pop_back();
                component.push_back(p);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        int nx = p.x + dx;
                        int ny = p.y + dy;
                        if (nx < 0 || nx >= mask.width || ny < 0 || ny >= mask.height) continue;
                        size_t nidx = static_cast<size_t>(ny) * mask.width + nx;
                        if (!mask.values[nidx] || seen[nidx]) continue;
                        seen[nidx] = 1;
                        stack.push_back({nx, ny});
                    }
                }
            }
            components.push_back(std::move(component));
        }
    }
    return components;
}

PrincipalAxis principal_axis(const std::vector<Pixel>& pixels) {
    PrincipalAxis result;
    const size_t n = pixels.size();
    if (n < 2) {
        result.degenerate = true;
        return result;
    }

    double mx = 0.0, my = 0.0;
    for (const Pixel& p : pixels) {
        mx += p.x;
        my += p.y;
    }
    mx /= double(n);
    my /= double(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const Pixel& p : pixels) {
        double dx = p.x - mx;
        double dy = p.y - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    sxx /= double(n);
    sxy /= double(n);
    syy /= double(n);

    // Eigen decomposition of the symmetric 2x2 covariance.
    double gap = std::sqrt((sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy);
    if (gap < 1e-9) {
        result.degenerate = true;
        return result;
    }
    double lambda = 0.5 * (sxx + syy + gap);

    // Pick the numerically larger eigenvector expression.
    Vec2 v1{sxy, lambda - sxx};
    Vec2 v2{lambda - syy, sxy};
    Vec2 v = v1.norm() > v2.norm() ? v1 : v2;
    double norm = v.norm();
    if (norm == 0.0) {
        result.degenerate = true;
        return result;
    }
    result.axis = v * (1.0 / norm);
    return result;
}

BlobStats blob_stats(const Heatmap& hm, const std::vector<Pixel>& pixels) {
    BlobStats stats;
    stats.pixels = pixels;

    double mass = 0.0;
    double wx = 0.0, wy = 0.0;
    for (const Pixel& p : pixels) {
        double v = hm.at(p.x, p.y);
        mass += v;
        wx += v * p.x;
        wy += v * p.y;
    }
    stats.mass = mass;
    stats.confidence = pixels.empty() ? 0.0 : mass / double(pixels.size());
    if (mass > 0.0) {
        stats.weighted_centroid = {wx / mass, wy / mass};
    } else if (!pixels.empty()) {
        // Zero-valued blob: fall back to the unweighted centroid.
        double sx = 0.0, sy = 0.0;
        for (const Pixel& p : pixels) {
            sx += p.x;
            sy += p.y;
        }
        stats.weighted_centroid = {sx / double(pixels.size()), sy / double(pixels.size())};
    }

    PrincipalAxis pa = principal_axis(pixels);
    stats.degenerate = pa.degenerate;
    if (pa.degenerate) {
        // Orientation undefined; report the x-extent as the length.
        stats.axis = {1.0, 0.0};
        stats.theta = 0.0;
        if (!pixels.empty()) {
            auto [mn, mx] = std::minmax_element(
                pixels.begin(), pixels.end(),
                [](const Pixel& a, const Pixel& b) { return a.x < b.x; });
            stats.half_length = (mx->x - mn->x) / 2.0;
        }
        return stats;
    }

    stats.axis = pa.axis;
    stats.theta = fold_half_circle(std::atan2(pa.axis.y, pa.axis.x));

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Pixel& p : pixels) {
        double proj = pa.axis.dot({double(p.x), double(p.y)});
        lo = std::min(lo, proj);
        hi = std::max(hi, proj);
    }
    stats.half_length = (hi - lo) / 2.0;
    return stats;
}

std::vector<Detection> detect(const Heatmap& hm, double delta, int min_area) {
    std::vector<Detection> detections;
    Mask mask = threshold_mask(hm, delta);
    for (const auto& component : connected_components(mask)) {
        if (int(component.size()) < min_area) continue;
        BlobStats stats = blob_stats(hm, component);
        Detection det;
        det.label.center = stats.weighted_centroid;
        det.label.theta = stats.theta;
        det.label.half_length = stats.half_length;
        det.label.visible = true;
        det.confidence = stats.confidence;
        detections.push_back(det);
    }
    std::sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.label.center.x < b.label.center.x;
    });
    return detections;
}

std::optional<Detection> track_select(const std::vector<Detection>& candidates,
                                      const std::vector<TrackPoint>& history,
                                      int frame_index, double gate_radius) {
    if (candidates.empty()) return std::nullopt;

    if (history.size() < 2) {
        // detect() sorts by confidence already, but don't rely on caller order.
        const Detection* best = &candidates.front();
        for (const Detection& c : candidates) {
            if (c.confidence > best->confidence) best = &c;
        }
        return *best;
    }

    const TrackPoint& prev = history[history.size() - 2];
    const TrackPoint& last = history[history.size() - 1];
    int span = last.frame_index - prev.frame_index;
    if (span <= 0) span = 1;
    Vec2 velocity = (last.pos - prev.pos) * (1.0 / span);
    Vec2 expected = last.pos + velocity * double(frame_index - last.frame_index);

    const Detection* best = nullptr;
    double best_dist = gate_radius;
    for (const Detection& c : candidates) {
        double d = distance(c.label.center, expected);
        if (d <= best_dist) {
            best_dist = d;
            best = &c;
        }
    }
    if (!best) return std::nullopt;
    return *best;
}

std::optional<Detection> TrackSelector::select(int frame_index,
                                               const std::vector<Detection>& candidates) {
    std::vector<TrackPoint> history(history_.begin(), history_.end());
    auto chosen = track_select(candidates, history, frame_index, gate_radius_);
    if (chosen) {
        history_.push_back({frame_index, chosen->label.center});
        while (history_.size() > 2) history_.pop_front();
    }
    return chosen;
}

}  // namespace blurtrack
