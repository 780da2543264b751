#include <cmath>

#include "blurtrack/eval.hpp"
#include "blurtrack/synth.hpp"
#include "doctest.h"

using namespace blurtrack;

namespace {

Detection make_pred(double x, double y, double confidence = 0.9, double l = 0.0,
                    double theta = 0.0) {
    Detection d;
    d.label.center = {x, y};
    d.label.half_length = l;
    d.label.theta = theta;
    d.confidence = confidence;
    return d;
}

BlurLabel make_gt(double x, double y, double l = 0.0, double theta = 0.0) {
    BlurLabel g;
    g.center = {x, y};
    g.half_length = l;
    g.theta = theta;
    return g;
}

}  // namespace

TEST_SUITE_BEGIN("eval");

TEST_CASE("classification at the tau boundary") {
    auto tp = classify_frame(make_pred(3.9, 0.0), make_gt(0.0, 0.0), 4.0);
    CHECK(tp.outcome == Outcome::TP);
    auto boundary = classify_frame(make_pred(4.0, 0.0), make_gt(0.0, 0.0), 4.0);
    CHECK(boundary.outcome == Outcome::TP);  // inclusive
    auto fp = classify_frame(make_pred(4.1, 0.0), make_gt(0.0, 0.0), 4.0);
    CHECK(fp.outcome == Outcome::FP);

    CHECK(classify_frame(std::nullopt, std::nullopt, 4.0).outcome == Outcome::TN);
    CHECK(classify_frame(std::nullopt, make_gt(0.0, 0.0), 4.0).outcome == Outcome::FN);
    CHECK(classify_frame(make_pred(0.0, 0.0), std::nullopt, 4.0).outcome == Outcome::FP);
}

TEST_CASE("aggregate on a hand-enumerated ten-frame set") {
    // 4 TP, 2 FP, 1 FN, 3 TN.
    std::vector<FrameOutcome> outcomes;
    for (int i = 0; i < 4; ++i) outcomes.push_back({Outcome::TP, 1.0});
    for (int i = 0; i < 2; ++i) outcomes.push_back({Outcome::FP, std::nullopt});
    outcomes.push_back({Outcome::FN, std::nullopt});
    for (int i = 0; i < 3; ++i) outcomes.push_back({Outcome::TN, std::nullopt});

    MetricsReport report = aggregate(outcomes);
    CHECK(report.counts.total() == 10);
    CHECK(report.precision == doctest::Approx(4.0 / 6.0));
    CHECK(report.recall == doctest::Approx(4.0 / 5.0));
    CHECK(report.f1 == doctest::Approx(2.0 * (4.0 / 6.0) * (4.0 / 5.0) /
                                       ((4.0 / 6.0) + (4.0 / 5.0))));
    CHECK(report.accuracy == doctest::Approx(7.0 / 10.0));
    CHECK_FALSE(report.division_guard_hit);
}

TEST_CASE("all true positives give unit rates") {
    std::vector<FrameOutcome> outcomes(5, {Outcome::TP, 0.5});
    MetricsReport report = aggregate(outcomes);
    CHECK(report.precision == doctest::Approx(1.0));
    CHECK(report.recall == doctest::Approx(1.0));
    CHECK(report.f1 == doctest::Approx(1.0));
    CHECK(report.accuracy == doctest::Approx(1.0));
}

TEST_CASE("division guards flag empty denominators") {
    std::vector<FrameOutcome> outcomes(3, {Outcome::TN, std::nullopt});
    MetricsReport report = aggregate(outcomes);
    CHECK(report.precision == 0.0);
    CHECK(report.recall == 0.0);
    CHECK(report.division_guard_hit);
    CHECK(report.accuracy == doctest::Approx(1.0));
}

TEST_CASE("count conservation") {
    std::vector<FrameOutcome> outcomes;
    outcomes.push_back({Outcome::TP, 1.0});
    outcomes.push_back({Outcome::FP, std::nullopt});
    outcomes.push_back({Outcome::FN, std::nullopt});
    outcomes.push_back({Outcome::TN, std::nullopt});
    outcomes.push_back({Outcome::TP, 2.0});
    MetricsReport report = aggregate(outcomes);
    CHECK(report.counts.total() == int(outcomes.size()));
}

TEST_CASE("perfect ranking reaches AP 1") {
    std::vector<EvalFrame> frames;
    for (int i = 0; i < 5; ++i) {
        EvalFrame f;
        f.gt = make_gt(10.0 * i, 0.0);
        f.pred = make_pred(10.0 * i, 0.5, 0.9 - 0.01 * i);
        frames.push_back(f);
    }
    CHECK(average_precision(frames) == doctest::Approx(1.0));
}

TEST_CASE("a false positive ranked above all true positives lowers AP") {
    std::vector<EvalFrame> frames;
    EvalFrame fp;
    fp.pred = make_pred(500.0, 500.0, 0.99);
    frames.push_back(fp);
    for (int i = 0; i < 4; ++i) {
        EvalFrame f;
        f.gt = make_gt(10.0 * i, 0.0);
        f.pred = make_pred(10.0 * i, 0.0, 0.9 - 0.01 * i);
        frames.push_back(f);
    }
    double ap_bad = average_precision(frames);
    CHECK(ap_bad < 1.0);

    // Swapping the FP below the TPs (adjacent swaps) never decreases AP.
    frames[0].pred->confidence = 0.5;
    double ap_better = average_precision(frames);
    CHECK(ap_better >= ap_bad);
    CHECK(ap_better == doctest::Approx(1.0));
}

TEST_CASE("blur mae folding and the l > 3 filter") {
    std::vector<BlurLabel> preds, gts;
    preds.push_back(make_gt(0, 0, 5.0, deg_to_rad(179.0)));
    gts.push_back(make_gt(0, 0, 5.0, deg_to_rad(1.0)));
    BlurMae folded = blur_mae(preds, gts);
    CHECK(folded.angle.mean == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(folded.length.mean == doctest::Approx(0.0));

    // Hand-built five-pair set; two pairs fall under the length filter.
    preds.clear();
    gts.clear();
    struct Row {
        double pl, pt, gl, gt_;
    };
    std::vector<Row> rows = {
        {5.0, 10.0, 6.0, 15.0},   // eligible, angle err 5
        {8.0, 40.0, 7.0, 30.0},   // eligible, angle err 10
        {2.0, 80.0, 2.5, 10.0},   // filtered (pred l <= 3)
        {3.0, 5.0, 3.0, 25.0},    // filtered (boundary: not > 3)
        {12.0, -60.0, 11.0, -75.0},  // eligible, angle err 15
    };
    for (const Row& r : rows) {
        preds.push_back(make_gt(0, 0, r.pl, deg_to_rad(r.pt)));
        gts.push_back(make_gt(0, 0, r.gl, deg_to_rad(r.gt_)));
    }
    BlurMae result = blur_mae(preds, gts);
    CHECK(result.angle.count == 3);
    CHECK(result.angle.mean == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(result.length.count == 5);
    CHECK(result.length.mean == doctest::Approx((1.0 + 1.0 + 0.5 + 0.0 + 1.0) / 5.0));

    // Identical predictions: zero everywhere.
    BlurMae zero = blur_mae(gts, gts);
    CHECK(zero.length.mean == doctest::Approx(0.0));
    CHECK(zero.angle.mean == doctest::Approx(0.0));

    std::vector<BlurLabel> short_only{make_gt(0, 0, 1.0, 0.0)};
    CHECK_THROWS_WITH_AS(blur_mae(short_only, short_only), "no-eligible-angles",
                         std::runtime_error);
}

TEST_CASE("angle errors stay within [0, 90] degrees") {
    Rng rng(71);
    std::vector<BlurLabel> preds, gts;
    for (int i = 0; i < 200; ++i) {
        preds.push_back(make_gt(0, 0, 5.0, rng.uniform(-kPi, kPi)));
        gts.push_back(make_gt(0, 0, 5.0, rng.uniform(-kPi, kPi)));
    }
    BlurMae result = blur_mae(preds, gts);
    CHECK(result.angle.mean >= 0.0);
    CHECK(result.angle.mean <= 90.0);
}

TEST_CASE("noiseless corpus scores F1 1 below min_value and 0 above the peak") {
    HeatmapParams params;  // c_min = 0.7
    std::vector<std::pair<Heatmap, std::optional<BlurLabel>>> corpus;
    Rng rng(72);
    for (int i = 0; i < 20; ++i) {
        BlurLabel label;
        label.center = {rng.uniform(15.0, 80.0), rng.uniform(15.0, 40.0)};
        label.theta = rng.uniform(-kPi, kPi);
        label.half_length = rng.uniform(0.0, 6.0);
        corpus.emplace_back(real_blur_map(blur_endpoints(label), params, {96, 56}), label);
    }
    for (int i = 0; i < 5; ++i) {
        corpus.emplace_back(Heatmap(96, 56), std::nullopt);
    }

    auto sweep = threshold_sweep(corpus, {0.1, 0.3, 0.5, 0.69});
    for (const SweepPoint& point : sweep) {
        CHECK(point.report.f1 == doctest::Approx(1.0));
        CHECK(point.report.counts.tn == 5);
    }

    auto high = threshold_sweep(corpus, {1.0});
    CHECK(high[0].report.f1 == doctest::Approx(0.0));
    CHECK(high[0].report.counts.fn == 20);
}

TEST_CASE("noisy corpus produces a peaked f1 curve") {
    SceneParams params;
    params.size = {128, 72};
    params.frames = 150;
    params.noise = 0.45;
    params.empty_fraction = 0.3;
    params.peak_attenuation = 0.35;
    auto scene = generate_scene(73, params);

    std::vector<std::pair<Heatmap, std::optional<BlurLabel>>> corpus;
    for (auto& frame : scene) corpus.emplace_back(std::move(frame.heatmap), frame.label);

    std::vector<double> deltas{0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    auto sweep = threshold_sweep(corpus, deltas);

    size_t best = 0;
    for (size_t i = 0; i < sweep.size(); ++i) {
        if (sweep[i].report.f1 > sweep[best].report.f1) best = i;
    }
    CHECK(best > 0);
    CHECK(best < sweep.size() - 1);
    CHECK(sweep[best].report.f1 > sweep.front().report.f1);
    CHECK(sweep[best].report.f1 > sweep.back().report.f1);
}

TEST_SUITE_END();
