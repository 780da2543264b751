#include <cmath>

#include "blurtrack/extract.hpp"
#include "blurtrack/synth.hpp"
#include "doctest.h"
#include "reference.hpp"

using namespace blurtrack;

TEST_SUITE_BEGIN("synth");

TEST_CASE("constant-acceleration flight") {
    BallState3D state;
    state.p0 = {1.0, 2.0, 3.0};
    Vec3 at0 = simulate_flight(state, 0.0);
    CHECK(at0[0] == doctest::Approx(1.0));
    CHECK(at0[1] == doctest::Approx(2.0));
    CHECK(at0[2] == doctest::Approx(3.0));

    Vec3 at1 = simulate_flight(state, 1.0);
    CHECK(at1[2] == doctest::Approx(3.0 - 4.905));
}

TEST_CASE("projected flight is near quadratic at bounded depth variation") {
    SequenceParams params;
    params.horizon_frames = 20;
    double worst = 0.0;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        SyntheticSequence seq = generate_sequence(3000 + seed, params);
        // Fit the full projected track, observations plus horizon, and
        // measure the residual.
        std::vector<Observation> all;
        for (const Observation& o : seq.observations) all.push_back(o);
        for (const TimedPoint& p : seq.ground_truth) all.push_back({p.t, p.pos, std::nullopt});
        // Use exact positions for the fit: rebuild observation positions.
        CameraModel cam = canonical_camera({512, 288});
        for (size_t i = 0; i < seq.observations.size(); ++i) {
            all[i].pos = project(cam, simulate_flight(seq.state, all[i].t));
        }
        QuadTrajectory2D traj = fit_position(all);
        for (const Observation& o : all) {
            worst = std::max(worst, distance(traj.position(o.t), o.pos));
        }
    }
    CHECK(worst <= 0.2);
}

TEST_CASE("static ball has zero blur") {
    BallState3D still;
    still.p0 = {0.0, 0.0, 0.3};
    still.v0 = {0.0, 0.0, 0.0};
    still.a = {0.0, 0.0, 0.0};
    CameraModel cam = canonical_camera({512, 288});
    BlurLabel label = ground_truth_blur(still, cam, 0.1, 0.01);
    CHECK(label.half_length == doctest::Approx(0.0));
}

TEST_CASE("pure horizontal image motion gives the expected half length") {
    // Ball sliding parallel to the image plane of an axis-aligned camera.
    CameraModel cam;
    cam.f = 1000.0;
    cam.tvec = {0.0, 0.0, 2.0};
    cam.principal = {256.0, 144.0};

    BallState3D state;
    state.p0 = {0.0, 0.0, 0.0};
    state.v0 = {2.0, 0.0, 0.0};  // 2 m/s at 2 m depth and f=1000 -> 1000 px/s
    state.a = {0.0, 0.0, 0.0};

    BlurLabel label = ground_truth_blur(state, cam, 0.05, 0.01);
    CHECK(label.half_length == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(std::fabs(label.theta) <= 1e-9);
}

TEST_CASE("chord stays within the curvature bound of the true arc") {
    CameraModel cam = canonical_camera({512, 288});
    Rng rng(61);
    for (int trial = 0; trial < 50; ++trial) {
        BallState3D state;
        state.p0 = {rng.uniform(-0.5, 0.5), rng.uniform(-1.0, 1.0), rng.uniform(0.3, 0.8)};
        state.v0 = {rng.uniform(-2.0, 2.0), rng.uniform(-3.0, 3.0), rng.uniform(-1.0, 2.0)};
        state.a = {0.0, 0.0, -9.81};
        const double t = 0.1;
        const double t_exp = 0.004;

        // Image acceleration via central differences.
        Vec2 p_minus = project(cam, simulate_flight(state, t - t_exp / 2.0));
        Vec2 p_mid = project(cam, simulate_flight(state, t));
        Vec2 p_plus = project(cam, simulate_flight(state, t + t_exp / 2.0));
        Vec2 accel = (p_plus - p_mid * 2.0 + p_minus) * (4.0 / (t_exp * t_exp));
        double bound = accel.norm() * t_exp * t_exp / 8.0;
        if (bound > 0.1) continue;

        // Maximum deviation of the projected arc from the chord.
        double worst = 0.0;
        for (int i = 0; i <= 32; ++i) {
            double s = t - t_exp / 2.0 + t_exp * i / 32.0;
            Vec2 arc = project(cam, simulate_flight(state, s));
            double d = point_segment_distance(arc, p_minus, p_plus);
            worst = std::max(worst, d);
        }
        REQUIRE(worst <= 0.1);
    }
}

TEST_CASE("noise-free render is identical to the plain blur map") {
    HeatmapParams params;
    BlurLabel label{{20.0, 14.0}, 0.4, 5.0, true};
    Heatmap rendered = render_heatmap(label, params, {48, 32});
    Heatmap direct = real_blur_map(blur_endpoints(label), params, {48, 32});
    REQUIRE(rendered.values.size() == direct.values.size());
    for (size_t i = 0; i < rendered.values.size(); ++i) {
        REQUIRE(rendered.values[i] == direct.values[i]);
    }
}

TEST_CASE("noisy renders keep extraction accurate on most trials") {
    HeatmapParams params;
    Rng rng(62);
    int good = 0;
    const int trials = 500;
    for (int i = 0; i < trials; ++i) {
        BlurLabel label;
        label.center = {rng.uniform(20.0, 100.0), rng.uniform(20.0, 60.0)};
        label.theta = rng.uniform(-kPi, kPi);
        label.half_length = rng.uniform(0.0, 10.0);
        RenderOptions render;
        render.noise = 0.2;
        render.noise_seed = rng.next_u64();
        Heatmap map = render_heatmap(label, params, {128, 80}, render);
        auto detections = detect(map, 0.5, 2);
        if (detections.size() == 1 && distance(detections[0].label.center, label.center) <= 1.0) {
            good++;
        }
    }
    CHECK(double(good) / trials >= 0.95);
}

TEST_CASE("distractor blob yields a second candidate") {
    HeatmapParams params;
    BlurLabel label{{24.0, 24.0}, 0.0, 4.0, true};
    RenderOptions render;
    render.distractors.push_back({{100.0, 40.0}, 2.5, 0.8});
    Heatmap map = render_heatmap(label, params, {128, 64}, render);
    auto detections = detect(map, 0.5, 2);
    CHECK(detections.size() == 2);
}

TEST_CASE("single disc for zero blur, streak mass independent of length") {
    GrayRenderOptions options;
    BlurLabel still{{32.0, 32.0}, 0.0, 0.0, true};
    auto single = render_gray_frames(still, std::nullopt, {64, 64}, options);
    double still_mass = 0.0;
    for (double v : single.frame_n.values) still_mass += v - options.background;

    for (double l : {4.0, 9.0, 14.0}) {
        BlurLabel moving{{32.0, 32.0}, deg_to_rad(15.0), l, true};
        auto pair = render_gray_frames(moving, std::nullopt, {64, 64}, options);
        double mass = 0.0;
        for (double v : pair.frame_n.values) mass += v - options.background;
        CHECK(mass == doctest::Approx(still_mass).epsilon(0.02));
    }
}

TEST_CASE("scene generation is deterministic") {
    SceneParams params;
    params.size = {96, 64};
    params.frames = 12;
    params.noise = 0.15;
    params.distractors_per_frame = 1;
    auto a = generate_scene(77, params);
    auto b = generate_scene(77, params);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].heatmap.values == b[i].heatmap.values);
        REQUIRE(a[i].label.has_value() == b[i].label.has_value());
        if (a[i].label) {
            REQUIRE(a[i].label->center.x == b[i].label->center.x);
            REQUIRE(a[i].label->theta == b[i].label->theta);
        }
    }
}

TEST_SUITE_END();
