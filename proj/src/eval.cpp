#include "blurtrack/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace blurtrack {

FrameOutcome classify_frame(const std::optional<Detection>& pred,
                            const std::optional<BlurLabel>& gt, double tau) {
    FrameOutcome out;
    if (pred && gt) {
        double d = distance(pred->label.center, gt->center);
        out.dist = d;
        out.outcome = d <= tau ? Outcome::TP : Outcome::FP;
    } else if (pred) {
        out.outcome = Outcome::FP;
    } else if (gt) {
        out.outcome = Outcome::FN;
    } else {
        out.outcome = Outcome::TN;
    }
    return out;
}

MetricsReport aggregate(const std::vector<FrameOutcome>& outcomes) {
    MetricsReport report;
    for (const FrameOutcome& o : outcomes) {
        switch (o.outcome) {
            case Outcome::TP: report.counts.tp++; break;
            case Outcome::FP: report.counts.fp++; break;
            case Outcome::TN: report.counts.tn++; break;
            case Outcome::FN: report.counts.fn++; break;
        }
    }
    const Counts& c = report.counts;
    auto rate = [&report](int num, int den) {
        if (den == 0) {
            report.division_guard_hit = true;
            return 0.0;
        }
        return double(num) / double(den);
    };
    report.precision = rate(c.tp, c.tp + c.fp);
    report.recall = rate(c.tp, c.tp + c.fn);
    report.f1 = rate(2 * c.tp, 2 * c.tp + c.fp + c.fn);
    report.accuracy = rate(c.tp + c.tn, c.total());
    return report;
}

namespace {

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd ms;
    ms.count = int(values.size());
    if (values.empty()) return ms;
    double sum = 0.0;
    for (double v : values) sum += v;
    ms.mean = sum / double(values.size());
    double sq = 0.0;
    for (double v : values) sq += (v - ms.mean) * (v - ms.mean);
    ms.stddev = std::sqrt(sq / double(values.size()));
    return ms;
}

}  // namespace

std::vector<PrPoint> pr_curve(const std::vector<EvalFrame>& frames, double tau) {
    int total_gt = 0;
    for (const EvalFrame& f : frames) {
        if (f.gt) total_gt++;
    }

    struct Ranked {
        double confidence;
        bool tp;
    };
    std::vector<Ranked> ranked;
    for (const EvalFrame& f : frames) {
        if (!f.pred) continue;
        bool tp = f.gt && distance(f.pred->label.center, f.gt->center) <= tau;
        ranked.push_back({f.pred->confidence, tp});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const Ranked& a, const Ranked& b) { return a.confidence > b.confidence; });

    std::vector<PrPoint> curve;
    int tp = 0, fp = 0;
    for (const Ranked& r : ranked) {
        (r.tp ? tp : fp)++;
        PrPoint p;
        p.confidence = r.confidence;
        p.precision = double(tp) / double(tp + fp);
        p.recall = total_gt > 0 ? double(tp) / double(total_gt) : 0.0;
        curve.push_back(p);
    }
    return curve;
}

double average_precision(const std::vector<EvalFrame>& frames, double tau) {
    std::vector<PrPoint> curve = pr_curve(frames, tau);
    if (curve.empty()) return 0.0;

    // All-point interpolation: integrate recall steps against the
    // right-to-left precision envelope.
    std::vector<double> envelope(curve.size());
    double run = 0.0;
    for (size_t i = curve.size(); i-- > 0;) {
        run = std::max(run, curve[i].precision);
        envelope[i] = run;
    }
    double ap = 0.0;
    double prev_recall = 0.0;
    for (size_t i = 0; i < curve.size(); ++i) {
        ap += (curve[i].recall - prev_recall) * envelope[i];
        prev_recall = curve[i].recall;
    }
    return ap;
}

BlurMae blur_mae(const std::vector<BlurLabel>& preds, const std::vector<BlurLabel>& gts) {
    if (preds.size() != gts.size()) {
        throw std::invalid_argument("blur_mae: prediction/ground-truth size mismatch");
    }
    std::vector<double> l_errors;
    std::vector<double> theta_errors;
    for (size_t i = 0; i < preds.size(); ++i) {
        l_errors.push_back(std::fabs(preds[i].half_length - gts[i].half_length));
        if (preds[i].half_length > kAngleEvalMinLength) {
            theta_errors.push_back(rad_to_deg(angle_diff_mod180(preds[i].theta, gts[i].theta)));
        }
    }
    if (theta_errors.empty()) throw std::runtime_error("no-eligible-angles");

    BlurMae result;
    result.length = mean_std(l_errors);
    result.angle = mean_std(theta_errors);
    return result;
}

MetricsReport evaluate_frames(const std::vector<EvalFrame>& frames, double tau) {
    std::vector<FrameOutcome> outcomes;
    std::vector<BlurLabel> tp_preds, tp_gts;
    for (const EvalFrame& f : frames) {
        FrameOutcome o = classify_frame(f.pred, f.gt, tau);
        outcomes.push_back(o);
        if (o.outcome == Outcome::TP) {
            tp_preds.push_back(f.pred->label);
            tp_gts.push_back(f.gt.value());
        }
    }
    MetricsReport report = aggregate(outcomes);
    report.ap = average_precision(frames, tau);
    if (!tp_preds.empty()) {
        std::vector<double> l_errors;
        std::vector<double> theta_errors;
        for (size_t i = 0; i < tp_preds.size(); ++i) {
            l_errors.push_back(std::fabs(tp_preds[i].half_length - tp_gts[i].half_length));
            if (tp_preds[i].half_length > kAngleEvalMinLength) {
                theta_errors.push_back(
                    rad_to_deg(angle_diff_mod180(tp_preds[i].theta, tp_gts[i].theta)));
            }
        }
        report.mae_l = mean_std(l_errors);
        if (!theta_errors.empty()) report.mae_theta = mean_std(theta_errors);
    }
    return report;
}

std::vector<SweepPoint> threshold_sweep(
    const std::vector<std::pair<Heatmap, std::optional<BlurLabel>>>& frames,
    const std::vector<double>& deltas, const SweepOptions& options) {
    std::vector<SweepPoint> sweep;
    for (double delta : deltas) {
        std::vector<EvalFrame> eval_frames;
        std::vector<FrameOutcome> extra_fp;
        for (const auto& [hm, gt] : frames) {
            auto detections = detect(hm, delta, options.min_area);
            EvalFrame ef;
            ef.gt = gt;
            if (!detections.empty()) {
                ef.pred = detections.front();
                if (options.extra_candidates_as_fp) {
                    for (size_t i = 1; i < detections.size(); ++i) {
                        extra_fp.push_back({Outcome::FP, std::nullopt});
                    }
                }
            }
            eval_frames.push_back(std::move(ef));
        }
        MetricsReport report = evaluate_frames(eval_frames, options.tau);
        if (!extra_fp.empty()) {
            std::vector<FrameOutcome> outcomes = extra_fp;
            for (const EvalFrame& f : eval_frames) {
                outcomes.push_back(classify_frame(f.pred, f.gt, options.tau));
            }
            MetricsReport merged = aggregate(outcomes);
            merged.ap = report.ap;
            merged.mae_l = report.mae_l;
            merged.mae_theta = report.mae_theta;
            report = merged;
        }
        sweep.push_back({delta, report});
    }
    return sweep;
}

std::string format_report(const MetricsReport& report) {
    char buf[512];
    std::string out;
    std::snprintf(buf, sizeof(buf), "%8s %8s %8s %8s %8s\n", "F1", "Acc", "Prec", "Rec", "AP");
    out += buf;
    char ap_text[32] = "n/a";
    if (report.ap) std::snprintf(ap_text, sizeof(ap_text), "%.4f", *report.ap);
    std::snprintf(buf, sizeof(buf), "%8.4f %8.4f %8.4f %8.4f %8s\n", report.f1, report.accuracy,
                  report.precision, report.recall, ap_text);
    out += buf;
    std::snprintf(buf, sizeof(buf), "counts: TP=%d FP=%d TN=%d FN=%d total=%d\n", report.counts.tp,
                  report.counts.fp, report.counts.tn, report.counts.fn, report.counts.total());
    out += buf;
    if (report.mae_l) {
        std::snprintf(buf, sizeof(buf), "MAE l:     %.2f +/- %.2f px  (n=%d)\n",
                      report.mae_l->mean, report.mae_l->stddev, report.mae_l->count);
        out += buf;
    }
    if (report.mae_theta) {
        std::snprintf(buf, sizeof(buf), "MAE theta: %.2f +/- %.2f deg (n=%d, pred l > 3 px)\n",
                      report.mae_theta->mean, report.mae_theta->stddev, report.mae_theta->count);
        out += buf;
    }
    return out;
}

}  // namespace blurtrack
