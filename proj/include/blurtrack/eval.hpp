#pragma once

#include <optional>
#include <string>
#include <vector>

#include "blurtrack/extract.hpp"
#include "blurtrack/geometry.hpp"
#include "blurtrack/heatmap.hpp"

// Detection and blur-quality metrics. A detection counts as a true
// positive when its center lies within tau pixels of the ground truth
// (boundary inclusive, default 4 px). Angle errors fold mod 180 degrees
// and are only aggregated where the predicted blur length exceeds 3 px.

namespace blurtrack {

enum class Outcome { TP, FP, TN, FN };

struct FrameOutcome {
    Outcome outcome = Outcome::TN;
    std::optional<double> dist;  // pixels, present when both sides exist
};

struct Counts {
    int tp = 0;
    int fp = 0;
    int tn = 0;
    int fn = 0;
    int total() const { return tp + fp + tn + fn; }
};

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;
    int count = 0;
};

struct MetricsReport {
    Counts counts;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    std::optional<double> ap;          // needs ranked confidences
    std::optional<MeanStd> mae_l;      // pixels, over TP pairs
    std::optional<MeanStd> mae_theta;  // degrees, over TP pairs with pred l > 3
    bool division_guard_hit = false;   // a rate had an empty denominator
};

constexpr double kDefaultTau = 4.0;
constexpr double kAngleEvalMinLength = 3.0;  // pixels of predicted blur

FrameOutcome classify_frame(const std::optional<Detection>& pred,
                            const std::optional<BlurLabel>& gt, double tau = kDefaultTau);

MetricsReport aggregate(const std::vector<FrameOutcome>& outcomes);

// Paired per-frame detections and ground truth for ranked metrics.
struct EvalFrame {
    std::optional<Detection> pred;
    std::optional<BlurLabel> gt;
};

// All-point interpolated average precision over the confidence ranking.
double average_precision(const std::vector<EvalFrame>& frames, double tau = kDefaultTau);

// Points of the precision-recall curve in ranking order, for export.
struct PrPoint {
    double confidence = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};
std::vector<PrPoint> pr_curve(const std::vector<EvalFrame>& frames, double tau = kDefaultTau);

struct BlurMae {
    MeanStd length;  // pixels
    MeanStd angle;   // degrees, mod-180
};

// Length MAE over all pairs; angle MAE only where the prediction's blur
// length exceeds 3 px. Throws "no-eligible-angles" when that set is empty.
BlurMae blur_mae(const std::vector<BlurLabel>& preds, const std::vector<BlurLabel>& gts);

// Full report over paired frames: classification at tau, AP, blur MAE on
// the true-positive pairs.
MetricsReport evaluate_frames(const std::vector<EvalFrame>& frames, double tau = kDefaultTau);

struct SweepPoint {
    double delta = 0.0;
    MetricsReport report;
};

struct SweepOptions {
    double tau = kDefaultTau;
    int min_area = 2;
    bool extra_candidates_as_fp = false;  // count trailing candidates as FPs
};

// Re-runs detection and classification per threshold over a labeled
// heatmap corpus.
std::vector<SweepPoint> threshold_sweep(
    const std::vector<std::pair<Heatmap, std::optional<BlurLabel>>>& frames,
    const std::vector<double>& deltas, const SweepOptions& options = {});

std::string format_report(const MetricsReport& report);

}  // namespace blurtrack
