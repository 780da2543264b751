#pragma once

#include <optional>
#include <vector>

#include "blurtrack/baseline.hpp"
#include "blurtrack/camera.hpp"
#include "blurtrack/geometry.hpp"
#include "blurtrack/heatmap.hpp"
#include "blurtrack/rng.hpp"
#include "blurtrack/trajectory.hpp"

// Synthetic rally simulator and streak renderer. Generates labeled
// heatmaps, grayscale frame pairs and observation sequences with known
// ground truth, serving as the independent oracle for the extraction,
// baseline, trajectory and evaluation modules.

namespace blurtrack {

// Constant-acceleration flight segment.
struct BallState3D {
    Vec3 p0{0.0, 0.0, 0.0};
    Vec3 v0{0.0, 0.0, 0.0};
    Vec3 a{0.0, 0.0, -9.81};
};

Vec3 simulate_flight(const BallState3D& state, double t);

// Blur label of the exposure window [t - t_exp/2, t + t_exp/2], chord
// approximation: endpoints projected at the window edges, the label
// midpoint/angle/half-length taken from the chord.
BlurLabel ground_truth_blur(const BallState3D& state, const CameraModel& cam, double t,
                            double t_exp);

struct DistractorBlob {
    Vec2 center;
    double radius = 2.5;
    double amplitude = 0.8;
};

struct RenderOptions {
    double noise = 0.0;  // additive uniform noise amplitude, clipped to [0,1]
    std::vector<DistractorBlob> distractors;
    uint64_t noise_seed = 0;
};

// real_blur_map of the label, plus optional noise and distractor blobs.
Heatmap render_heatmap(const BlurLabel& label, const HeatmapParams& params, RasterSize size,
                       const RenderOptions& options = {});

struct GrayRenderOptions {
    double background = 0.25;
    double ball_intensity = 0.95;
    double ball_radius = 3.0;
    int exposure_stamps = 64;
    double noise = 0.0;
    uint64_t noise_seed = 0;
};

struct GrayFramePair {
    GrayFrame frame_n;
    GrayFrame frame_ref;
};

// Exposure-averaged streak: stamps anti-aliased discs along the blur
// segment, each contributing 1/N of the intensity delta. The reference
// frame holds the ball at ref_label (two frame intervals earlier),
// or plain background when absent.
GrayFramePair render_gray_frames(const BlurLabel& label, const std::optional<BlurLabel>& ref_label,
                                 RasterSize size, const GrayRenderOptions& options = {});

struct SynthFrameTruth {
    int frame_index = 0;
    double t = 0.0;
    std::optional<BlurLabel> label;  // absent when the ball is out of view
    Heatmap heatmap;
};

struct SceneParams {
    RasterSize size{512, 288};
    HeatmapParams heatmap;
    double fps = 120.0;
    double t_exp = 0.004;  // seconds
    int frames = 60;
    double empty_fraction = 0.0;   // frames rendered without a ball
    double noise = 0.0;            // heatmap noise amplitude
    int distractors_per_frame = 0;
    double peak_attenuation = 0.0;  // random per-frame peak scaling in [1-x, 1]
};

// A full synthetic clip: piecewise flight segments projected through a
// canonical camera, one heatmap per frame. Deterministic given the seed.
std::vector<SynthFrameTruth> generate_scene(uint64_t seed, const SceneParams& params);

// Canonical synthetic viewpoint used by generate_scene.
CameraModel canonical_camera(RasterSize size);

struct SequenceParams {
    int observe_frames = 3;
    int horizon_frames = 15;
    double position_noise = 0.0;  // Gaussian sigma, pixels
    double fps = 120.0;
    double t_exp = 0.004;
    double max_depth_ratio = 1.2;  // keeps the projected track near-quadratic
};

struct SyntheticSequence {
    std::vector<Observation> observations;  // noisy positions, exact blur
    std::vector<TimedPoint> ground_truth;   // remaining flight, exact
    BallState3D state;
};

// One random flight observed for observe_frames and evaluated over the
// following horizon_frames; blur comes from the true chord of each
// exposure window.
SyntheticSequence generate_sequence(uint64_t seed, const SequenceParams& params);

}  // namespace blurtrack
