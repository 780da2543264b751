#include "blurtrack/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blurtrack {

double Rng::gaussian(double mean, double stddev) {
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

Vec3 simulate_flight(const BallState3D& state, double t) {
    return {state.p0[0] + state.v0[0] * t + 0.5 * state.a[0] * t * t,
            state.p0[1] + state.v0[1] * t + 0.5 * state.a[1] * t * t,
            state.p0[2] + state.v0[2] * t + 0.5 * state.a[2] * t * t};
}

BlurLabel ground_truth_blur(const BallState3D& state, const CameraModel& cam, double t,
                            double t_exp) {
    if (t_exp <= 0.0) throw std::invalid_argument("ground_truth_blur: t_exp must be > 0");
    Vec2 p1 = project(cam, simulate_flight(state, t + t_exp / 2.0));
    Vec2 p2 = project(cam, simulate_flight(state, t - t_exp / 2.0));

    BlurLabel label;
    label.center = (p1 + p2) * 0.5;
    label.half_length = distance(p1, p2) / 2.0;
    label.theta = label.half_length > 0.0 ? std::atan2(p1.y - p2.y, p1.x - p2.x) : 0.0;
    label.visible = true;
    return label;
}

Heatmap render_heatmap(const BlurLabel& label, const HeatmapParams& params, RasterSize size,
                       const RenderOptions& options) {
    Heatmap map = real_blur_map(blur_endpoints(label), params, size);

    for (const DistractorBlob& blob : options.distractors) {
        HeatmapParams blob_params = params;
        blob_params.disk_radius = blob.radius;
        Heatmap d = real_disk_map(blob.center, blob_params, size);
        for (size_t i = 0; i < map.values.size(); ++i) {
            map.values[i] = std::max(map.values[i], blob.amplitude * d.values[i]);
        }
    }

    if (options.noise > 0.0) {
        Rng rng(options.noise_seed);
        for (double& v : map.values) {
            v = std::min(v + rng.uniform(0.0, options.noise), 1.0);
        }
    }
    return map;
}

namespace {

// Anti-aliased disc coverage: 1 inside, 0 outside, linear ramp across the
// one-pixel boundary band.
double disc_coverage(double dist, double radius) {
    return std::clamp(radius + 0.5 - dist, 0.0, 1.0);
}

void stamp_streak(GrayFrame& frame, const BlurLabel& label, const GrayRenderOptions& options) {
    BlurSegment seg = blur_endpoints(label);
    const int n = std::max(1, options.exposure_stamps);
    const double delta = (options.ball_intensity - options.background) / double(n);
    const double pad = options.ball_radius + 1.5;

    for (int i = 0; i < n; ++i) {
        double t = n == 1 ? 0.5 : double(i) / double(n - 1);
        Vec2 c = seg.back + (seg.front - seg.back) * t;
        int x0 = std::max(0, int(std::floor(c.x - pad)));
        int x1 = std::min(frame.width - 1, int(std::ceil(c.x + pad)));
        int y0 = std::max(0, int(std::floor(c.y - pad)));
        int y1 = std::min(frame.height - 1, int(std::ceil(c.y + pad)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                double d = std::hypot(x - c.x, y - c.y);
                frame.at(x, y) += delta * disc_coverage(d, options.ball_radius);
            }
        }
    }
    for (double& v : frame.values) v = std::clamp(v, 0.0, 1.0);
}

}  // namespace

GrayFramePair render_gray_frames(const BlurLabel& label, const std::optional<BlurLabel>& ref_label,
                                 RasterSize size, const GrayRenderOptions& options) {
    if (options.ball_radius < 1.0) {
        throw std::invalid_argument("render_gray_frames: ball radius must be >= 1 px");
    }
    GrayFramePair pair;
    pair.frame_n = GrayFrame(size.width, size.height, options.background);
    pair.frame_ref = GrayFrame(size.width, size.height, options.background);

    stamp_streak(pair.frame_n, label, options);
    if (ref_label) stamp_streak(pair.frame_ref, *ref_label, options);

    if (options.noise > 0.0) {
        Rng rng(options.noise_seed);
        for (double& v : pair.frame_n.values) {
            v = std::clamp(v + rng.uniform(-options.noise, options.noise), 0.0, 1.0);
        }
        for (double& v : pair.frame_ref.values) {
            v = std::clamp(v + rng.uniform(-options.noise, options.noise), 0.0, 1.0);
        }
    }
    return pair;
}

CameraModel canonical_camera(RasterSize size) {
    // Behind a baseline, elevated, aimed at the table center.
    return camera_from_lookat({0.0, -5.2, 2.2}, {0.0, 0.0, 0.3}, 1.1 * size.width,
                              {size.width / 2.0, size.height / 2.0});
}

namespace {

BallState3D random_flight(Rng& rng) {
    BallState3D state;
    state.p0 = {rng.uniform(-0.6, 0.6), rng.uniform(-1.3, 1.3), rng.uniform(0.2, 0.5)};
    state.v0 = {rng.uniform(-1.5, 1.5), rng.uniform(-4.0, 4.0), rng.uniform(0.5, 3.0)};
    // Gravity plus mild constant drag/Magnus remainder.
    state.a = {rng.uniform(-1.0, 1.0), rng.uniform(-2.0, 2.0), -9.81 + rng.uniform(-0.5, 0.5)};
    return state;
}

}  // namespace

std::vector<SynthFrameTruth> generate_scene(uint64_t seed, const SceneParams& params) {
    Rng rng(seed);
    CameraModel cam = canonical_camera(params.size);
    const double dt = 1.0 / params.fps;

    std::vector<SynthFrameTruth> frames;
    frames.reserve(params.frames);

    BallState3D state = random_flight(rng);
    double segment_t = 0.0;  // time since segment start
    const double segment_span = 0.35;

    for (int i = 0; i < params.frames; ++i) {
        SynthFrameTruth truth;
        truth.frame_index = i;
        truth.t = i * dt;

        // New flight segment when the current one runs out or drops too low.
        if (segment_t > segment_span || simulate_flight(state, segment_t)[2] < 0.05) {
            state.p0 = simulate_flight(state, segment_t);
            state.p0[2] = std::max(state.p0[2], 0.1);
            BallState3D fresh = random_flight(rng);
            state.v0 = fresh.v0;
            state.a = fresh.a;
            segment_t = 0.0;
        }

        bool empty = rng.next_double() < params.empty_fraction;
        RenderOptions render;
        render.noise = params.noise;
        render.noise_seed = rng.fork(uint64_t(i) * 2 + 1).next_u64();

        double attenuation = 1.0;
        if (params.peak_attenuation > 0.0) {
            attenuation = 1.0 - rng.uniform(0.0, params.peak_attenuation);
        }

        for (int b = 0; b < params.distractors_per_frame; ++b) {
            DistractorBlob blob;
            blob.center = {rng.uniform(0.0, params.size.width - 1.0),
                           rng.uniform(0.0, params.size.height - 1.0)};
            blob.radius = rng.uniform(1.5, 3.5);
            blob.amplitude = rng.uniform(0.55, 0.9);
            render.distractors.push_back(blob);
        }

        if (!empty) {
            BlurLabel label = ground_truth_blur(state, cam, segment_t, params.t_exp);
            bool in_view = label.center.x >= 0 && label.center.x < params.size.width &&
                           label.center.y >= 0 && label.center.y < params.size.height;
            if (in_view) {
                truth.label = label;
                truth.heatmap = render_heatmap(label, params.heatmap, params.size, render);
                if (attenuation < 1.0) {
                    for (double& v : truth.heatmap.values) v *= attenuation;
                }
            }
        }
        if (!truth.label) {
            BlurLabel none;
            none.visible = false;
            RenderOptions empty_render = render;
            Heatmap hm(params.size.width, params.size.height);
            for (const DistractorBlob& blob : empty_render.distractors) {
                HeatmapParams blob_params = params.heatmap;
                blob_params.disk_radius = blob.radius;
                Heatmap d = real_disk_map(blob.center, blob_params, params.size);
                for (size_t j = 0; j < hm.values.size(); ++j) {
                    hm.values[j] = std::max(hm.values[j], blob.amplitude * d.values[j]);
                }
            }
            if (empty_render.noise > 0.0) {
                Rng nrng(empty_render.noise_seed);
                for (double& v : hm.values) v = std::min(v + nrng.uniform(0.0, empty_render.noise), 1.0);
            }
            truth.heatmap = std::move(hm);
        }

        frames.push_back(std::move(truth));
        segment_t += dt;
    }
    return frames;
}

SyntheticSequence generate_sequence(uint64_t seed, const SequenceParams& params) {
    Rng rng(seed);
    const double dt = 1.0 / params.fps;
    const int total = params.observe_frames + params.horizon_frames;
    CameraModel cam = canonical_camera({512, 288});

    for (int attempt = 0; attempt < 200; ++attempt) {
        BallState3D state = random_flight(rng);

        // Depth must stay within the ratio bound so the projected track is
        // close to quadratic, and every projection must exist.
        double min_depth = std::numeric_limits<double>::infinity();
        double max_depth = 0.0;
        bool ok = true;
        Mat3 R = rodrigues(cam.rvec);
        for (int i = 0; i < total && ok; ++i) {
            Vec3 p = simulate_flight(state, i * dt + params.t_exp);
            double depth = R[2][0] * p[0] + R[2][1] * p[1] + R[2][2] * p[2] + cam.tvec[2];
            if (depth <= 0.3) ok = false;
            min_depth = std::min(min_depth, depth);
            max_depth = std::max(max_depth, depth);
            if (simulate_flight(state, i * dt)[2] < 0.0) ok = false;
        }
        if (!ok || max_depth / min_depth > params.max_depth_ratio) continue;

        SyntheticSequence seq;
        seq.state = state;
        for (int i = 0; i < params.observe_frames; ++i) {
            double t = i * dt;
            BlurLabel blur = ground_truth_blur(state, cam, t, params.t_exp);
            Observation obs;
            obs.t = t;
            obs.pos = {blur.center.x + rng.gaussian(0.0, params.position_noise),
                       blur.center.y + rng.gaussian(0.0, params.position_noise)};
            obs.blur = BlurObservation{blur.half_length, blur.theta};
            seq.observations.push_back(obs);
        }
        for (int i = params.observe_frames; i < total; ++i) {
            double t = i * dt;
            Vec2 p = project(cam, simulate_flight(state, t));
            seq.ground_truth.push_back({t, p});
        }
        return seq;
    }
    throw std::runtime_error("generate_sequence: no acceptable flight found");
}

}  // namespace blurtrack
