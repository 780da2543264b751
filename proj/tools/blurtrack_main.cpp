// Command-line surface for the blur-aware ball tracking toolkit. Eight
// subcommands cover fixture rendering, heatmap extraction, the classical
// frame-difference baseline, trajectory fitting, detection metrics,
// label-convention conversion, camera calibration and dataset statistics.
// Exit codes: 0 success, 1 runtime failure, 2 bad usage.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blurtrack/baseline.hpp"
#include "blurtrack/camera.hpp"
#include "blurtrack/eval.hpp"
#include "blurtrack/extract.hpp"
#include "blurtrack/io.hpp"
#include "blurtrack/synth.hpp"
#include "blurtrack/trajectory.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace blurtrack;

namespace {

void emit(const json& payload, const std::string& format) {
    if (format == "json") {
        json out = payload;
        out["schema"] = 1;
        std::cout << out.dump(2) << "\n";
    }
}

int run_render(uint64_t seed, const fs::path& output, int frames, int width, int height,
               double noise, double fps, double t_exp, int distractors, double empty_fraction,
               bool gray, const std::string& format) {
    SceneParams params;
    params.size = {width, height};
    params.frames = frames;
    params.noise = noise;
    params.fps = fps;
    params.t_exp = t_exp;
    params.distractors_per_frame = distractors;
    params.empty_fraction = empty_fraction;

    auto scene = generate_scene(seed, params);

    FixtureBundle bundle;
    bundle.seed = seed;
    bundle.size = params.size;
    bundle.params = params.heatmap;
    bundle.fps = fps;
    bundle.t_exp = t_exp;

    std::vector<Heatmap> maps;
    for (const auto& frame : scene) {
        FixtureFrame f;
        f.frame_index = frame.frame_index;
        f.t = frame.t;
        f.label = frame.label;
        char name[32];
        std::snprintf(name, sizeof(name), "hm_%06d.f32", frame.frame_index);
        f.heatmap_file = name;
        bundle.frames.push_back(f);
        maps.push_back(frame.heatmap);
    }
    write_fixture_bundle(output, bundle, maps);

    if (gray) {
        // Grayscale pairs for the baseline: reference frame from two frames back.
        GrayRenderOptions gray_options;
        for (size_t i = 0; i < scene.size(); ++i) {
            if (!scene[i].label) continue;
            std::optional<BlurLabel> ref;
            if (i >= 2 && scene[i - 2].label) ref = scene[i - 2].label;
            auto pair = render_gray_frames(*scene[i].label, ref, params.size, gray_options);
            char name[32];
            std::snprintf(name, sizeof(name), "gray_%06d.pgm", scene[i].frame_index);
            write_pgm(output / name, pair.frame_n);
            std::snprintf(name, sizeof(name), "ref_%06d.pgm", scene[i].frame_index);
            write_pgm(output / name, pair.frame_ref);
        }
    }

    int labeled = 0;
    for (const auto& frame : scene) {
        if (frame.label) labeled++;
    }
    emit({{"command", "render"},
          {"output", output.string()},
          {"frames", int(scene.size())},
          {"labeled_frames", labeled},
          {"seed", seed}},
         format);
    if (format != "json") {
        std::cout << "wrote " << scene.size() << " frames (" << labeled << " labeled) to "
                  << output.string() << "\n";
    }
    return 0;
}

int run_extract(const fs::path& input, const fs::path& output, double delta, int min_area,
                bool no_track, double gate, const std::string& format) {
    FixtureBundle bundle = read_fixture_manifest(input);
    TrackSelector tracker(gate);

    std::vector<DetectionRow> rows;
    int found = 0;
    for (const FixtureFrame& frame : bundle.frames) {
        Heatmap map = read_fixture_heatmap(input, frame);
        auto detections = detect(map, delta, min_area);
        std::optional<Detection> chosen;
        if (no_track) {
            if (!detections.empty()) chosen = detections.front();
        } else {
            chosen = tracker.select(frame.frame_index, detections);
        }

        DetectionRow row;
        row.annotation.frame_index = frame.frame_index;
        if (chosen) {
            row.annotation.label = chosen->label;
            row.confidence = chosen->confidence;
            found++;
        }
        rows.push_back(row);
    }
    write_detections_csv(output, rows);
    emit({{"command", "extract"},
          {"frames", int(rows.size())},
          {"detections", found},
          {"delta", delta},
          {"output", output.string()}},
         format);
    if (format != "json") {
        std::cout << "extracted " << found << "/" << rows.size() << " detections to "
                  << output.string() << "\n";
    }
    return 0;
}

int run_baseline(const fs::path& frames_dir, const fs::path& centers_csv, const fs::path& output,
                 int ref_offset, int half_size, double thresh, const std::string& format) {
    LabelsCsv centers = read_labels_csv(centers_csv);

    // Frame files keyed by index: accepts gray_%06d.pgm/png or %06d.pgm/png.
    std::map<int, fs::path> files;
    for (const auto& entry : fs::directory_iterator(frames_dir)) {
        if (!entry.is_regular_file()) continue;
        std::string stem = entry.path().stem().string();
        std::string ext = entry.path().extension().string();
        if (ext != ".pgm" && ext != ".png") continue;
        size_t digits = stem.find_last_not_of("0123456789");
        std::string num = digits == std::string::npos ? stem : stem.substr(digits + 1);
        if (num.empty()) continue;
        if (digits != std::string::npos && stem.substr(0, digits + 1) == "ref_") continue;
        files[std::stoi(num)] = entry.path();
    }

    BaselineParams params;
    params.roi_half_size = half_size;
    params.diff_threshold = thresh;

    std::vector<DetectionRow> rows;
    int found = 0;
    for (const FrameAnnotation& a : centers.annotations) {
        DetectionRow row;
        row.annotation.frame_index = a.frame_index;
        auto current = files.find(a.frame_index);
        auto ref = files.find(a.frame_index - ref_offset);
        if (a.label && current != files.end() && ref != files.end()) {
            GrayFrame frame_n = read_gray_image(current->second);
            GrayFrame frame_ref = read_gray_image(ref->second);
            try {
                auto blur = baseline_blur(frame_n, frame_ref, a.label->center, params);
                if (blur) {
                    row.annotation.label = blur;
                    row.confidence = 1.0;
                    found++;
                }
            } catch (const std::runtime_error&) {
                // ROI out of bounds: leave the frame unannotated.
            }
        }
        rows.push_back(row);
    }
    write_detections_csv(output, rows);
    emit({{"command", "baseline"},
          {"frames", int(rows.size())},
          {"detections", found},
          {"output", output.string()}},
         format);
    if (format != "json") {
        std::cout << "baseline recovered " << found << "/" << rows.size() << " blurs to "
                  << output.string() << "\n";
    }
    return 0;
}

json trajectory_to_json(const QuadTrajectory2D& traj) {
    json j{{"ax", traj.ax}, {"bx", traj.bx}, {"cx", traj.cx},
           {"ay", traj.ay}, {"by", traj.by}, {"cy", traj.cy}};
    if (traj.t_exp) j["t_exp"] = *traj.t_exp;
    return j;
}

int run_fit(const fs::path& input, double fps, int window, const std::string& mode,
            bool split_axes, const std::string& format) {
    LabelsCsv labels = read_labels_csv(input);

    std::vector<Observation> all;
    for (const FrameAnnotation& a : labels.annotations) {
        if (!a.label) continue;
        Observation o;
        o.t = a.frame_index / fps;
        o.pos = a.label->center;
        o.blur = BlurObservation{a.label->half_length, a.label->theta};
        all.push_back(o);
    }
    if (int(all.size()) < window + 1) {
        std::cerr << "fit: need more than " << window << " labeled frames, have " << all.size()
                  << "\n";
        return 1;
    }

    std::vector<Observation> head(all.begin(), all.begin() + window);
    std::vector<TimedPoint> tail;
    for (size_t i = window; i < all.size(); ++i) tail.push_back({all[i].t, all[i].pos});

    json out{{"command", "fit"}, {"observations", window}, {"evaluated", int(tail.size())}};
    std::string text;
    if (mode == "pos" || mode == "both") {
        QuadTrajectory2D traj = fit_position(head);
        double err = mae(traj, tail);
        out["position"] = {{"trajectory", trajectory_to_json(traj)}, {"mae", err}};
        text += "position-only MAE:  " + std::to_string(err) + " px\n";
    }
    if (mode == "blur" || mode == "both") {
        BlurFitOptions options;
        options.joint_axes = !split_axes;
        BlurFitResult fit = fit_position_blur(head, options);
        double err = mae(fit.trajectory, tail);
        out["position_blur"] = {{"trajectory", trajectory_to_json(fit.trajectory)},
                                {"mae", err},
                                {"fell_back_to_position", fit.fell_back_to_position},
                                {"t_exp_clamped", fit.t_exp_clamped}};
        text += "position+blur MAE:  " + std::to_string(err) + " px\n";
    }
    emit(out, format);
    if (format != "json") std::cout << text;
    return 0;
}

json report_to_json(const MetricsReport& r) {
    json j{{"precision", r.precision}, {"recall", r.recall},      {"f1", r.f1},
           {"accuracy", r.accuracy},   {"tp", r.counts.tp},       {"fp", r.counts.fp},
           {"tn", r.counts.tn},        {"fn", r.counts.fn},       {"total", r.counts.total()}};
    if (r.ap) j["ap"] = *r.ap;
    if (r.mae_l) {
        j["mae_l"] = {{"mean", r.mae_l->mean}, {"std", r.mae_l->stddev}, {"n", r.mae_l->count}};
    }
    if (r.mae_theta) {
        j["mae_theta_deg"] = {{"mean", r.mae_theta->mean},
                              {"std", r.mae_theta->stddev},
                              {"n", r.mae_theta->count}};
    }
    return j;
}

std::optional<Detection> row_to_detection(const DetectionRow& row) {
    if (!row.annotation.label) return std::nullopt;
    Detection d;
    d.label = *row.annotation.label;
    d.confidence = row.confidence.value_or(1.0);
    return d;
}

int run_eval(const fs::path& pred_path, const fs::path& gt_path, double tau,
             const std::string& convention, const fs::path& pr_out, const std::string& format) {
    auto preds = read_detections_csv(pred_path);
    LabelsCsv gts = read_labels_csv(gt_path);

    std::map<int, std::optional<BlurLabel>> gt_by_frame;
    for (const FrameAnnotation& a : gts.annotations) gt_by_frame[a.frame_index] = a.label;

    auto to_convention = [&convention](const BlurLabel& label) {
        if (convention != "front") return label;
        BlurLabel front = label;
        front.center = to_front_label(label);
        return front;
    };

    std::vector<EvalFrame> frames;
    for (const DetectionRow& row : preds) {
        auto it = gt_by_frame.find(row.annotation.frame_index);
        if (it == gt_by_frame.end()) continue;  // only evaluate shared frames
        EvalFrame f;
        if (auto det = row_to_detection(row)) {
            det->label = to_convention(det->label);
            f.pred = det;
        }
        if (it->second) f.gt = to_convention(*it->second);
        frames.push_back(f);
    }

    MetricsReport report = evaluate_frames(frames, tau);
    if (!pr_out.empty()) {
        auto curve = pr_curve(frames, tau);
        std::ofstream out(pr_out);
        out << "confidence,precision,recall\n";
        for (const PrPoint& p : curve) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.6f\n", p.confidence, p.precision,
                          p.recall);
            out << buf;
        }
    }

    json out = report_to_json(report);
    out["command"] = "eval";
    out["tau"] = tau;
    out["frames"] = int(frames.size());
    emit(out, format);
    if (format != "json") std::cout << format_report(report);
    return 0;
}

int run_sweep(const fs::path& bundle_dir, const std::vector<double>& deltas, double tau,
              const fs::path& sweep_out, const std::string& format) {
    FixtureBundle bundle = read_fixture_manifest(bundle_dir);
    std::vector<std::pair<Heatmap, std::optional<BlurLabel>>> corpus;
    for (const FixtureFrame& frame : bundle.frames) {
        corpus.emplace_back(read_fixture_heatmap(bundle_dir, frame), frame.label);
    }

    SweepOptions options;
    options.tau = tau;
    auto sweep = threshold_sweep(corpus, deltas, options);

    if (!sweep_out.empty()) {
        std::ofstream out(sweep_out);
        out << "delta,precision,recall,f1\n";
        for (const SweepPoint& p : sweep) {
            char buf[96];
            std::snprintf(buf, sizeof(buf), "%.3f,%.6f,%.6f,%.6f\n", p.delta, p.report.precision,
                          p.report.recall, p.report.f1);
            out << buf;
        }
    }

    json points = json::array();
    for (const SweepPoint& p : sweep) {
        json jp = report_to_json(p.report);
        jp["delta"] = p.delta;
        points.push_back(jp);
    }
    emit({{"command", "eval-sweep"}, {"points", points}, {"tau", tau}}, format);
    if (format != "json") {
        std::printf("%6s %8s %8s %8s\n", "delta", "prec", "rec", "f1");
        for (const SweepPoint& p : sweep) {
            std::printf("%6.2f %8.4f %8.4f %8.4f\n", p.delta, p.report.precision, p.report.recall,
                        p.report.f1);
        }
    }
    return 0;
}

int run_relabel(const fs::path& input, const fs::path& output, const std::string& to,
                const std::string& format) {
    LabelsCsv csv = read_labels_csv(input);
    for (FrameAnnotation& a : csv.annotations) {
        if (!a.label) continue;
        if (to == "front") {
            a.label->center = to_front_label(*a.label);
        } else {
            *a.label = from_front_label(a.label->center, a.label->theta, a.label->half_length);
        }
    }
    write_labels_csv(output, csv.annotations, csv.frame_digits);
    emit({{"command", "relabel"},
          {"to", to},
          {"rows", int(csv.annotations.size())},
          {"output", output.string()}},
         format);
    if (format != "json") {
        std::cout << "relabeled " << csv.annotations.size() << " rows to " << to << " convention\n";
    }
    return 0;
}

int run_calibrate(const fs::path& input, const fs::path& output, int width, int height, bool table,
                  const std::string& format) {
    Vec2 principal{width / 2.0, height / 2.0};

    std::vector<Keypoint2D3D> keypoints;
    std::ifstream in(input);
    if (!in) {
        std::cerr << "calibrate: cannot open " << input << "\n";
        return 1;
    }
    std::string line;
    int line_no = 0;
    auto canonical = table_keypoints();
    while (std::getline(in, line)) {
        line_no++;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream stream(line);
        std::vector<double> nums;
        double v;
        while (stream >> v) nums.push_back(v);
        if (nums.empty()) continue;
        Keypoint2D3D kp;
        if (table) {
            if (nums.size() != 2) {
                std::cerr << "calibrate: line " << line_no
                          << ": expected 2 numbers (image x y) in --table mode\n";
                return 1;
            }
            if (keypoints.size() >= canonical.size()) {
                std::cerr << "calibrate: more than " << canonical.size()
                          << " rows in --table mode\n";
                return 1;
            }
            kp.world = canonical[keypoints.size()];
            kp.image = {nums[0], nums[1]};
        } else {
            if (nums.size() != 5) {
                std::cerr << "calibrate: line " << line_no
                          << ": expected 5 numbers (world xyz, image xy)\n";
                return 1;
            }
            kp.world = {nums[0], nums[1], nums[2]};
            kp.image = {nums[3], nums[4]};
        }
        keypoints.push_back(kp);
    }

    CalibrationResult result = calibrate_pnp(keypoints, principal);
    write_calibration(output, result.camera);

    emit({{"command", "calibrate"},
          {"keypoints", int(keypoints.size())},
          {"f", result.camera.f},
          {"rms", result.rms},
          {"output", output.string()}},
         format);
    if (format != "json") {
        std::printf("f = %.2f px, rms reprojection error = %.4f px\n", result.camera.f,
                    result.rms);
    }
    return 0;
}

int run_stats(const fs::path& input, const fs::path& hist_out, const std::string& format) {
    std::vector<fs::path> files;
    if (fs::is_directory(input)) {
        for (const auto& entry : fs::recursive_directory_iterator(input)) {
            if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                files.push_back(entry.path());
            }
        }
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(input);
    }
    if (files.empty()) {
        std::cerr << "stats: no CSV files under " << input << "\n";
        return 1;
    }

    long frames = 0, visible = 0, blurred = 0;
    std::vector<double> displacements;
    std::vector<double> lengths;
    double max_length = 0.0;
    for (const fs::path& file : files) {
        LabelsCsv csv = read_labels_csv(file);
        const FrameAnnotation* prev = nullptr;
        for (const FrameAnnotation& a : csv.annotations) {
            frames++;
            if (a.label) {
                visible++;
                lengths.push_back(a.label->half_length);
                max_length = std::max(max_length, a.label->half_length);
                if (a.label->half_length > 0.0) blurred++;
                if (prev && prev->label && a.frame_index == prev->frame_index + 1) {
                    displacements.push_back(distance(a.label->center, prev->label->center));
                }
            }
            prev = &a;
        }
    }

    double disp_mean = 0.0, disp_std = 0.0;
    for (double d : displacements) disp_mean += d;
    if (!displacements.empty()) disp_mean /= double(displacements.size());
    for (double d : displacements) disp_std += (d - disp_mean) * (d - disp_mean);
    if (!displacements.empty()) disp_std = std::sqrt(disp_std / double(displacements.size()));
    double blur_ratio = visible > 0 ? double(blurred) / double(visible) : 0.0;

    // Half-length histogram in 1 px bins.
    std::vector<long> hist(size_t(std::ceil(max_length)) + 1, 0);
    for (double l : lengths) hist[size_t(std::min(l, max_length))]++;
    if (!hist_out.empty()) {
        std::ofstream out(hist_out);
        out << "half_length_bin,count\n";
        for (size_t i = 0; i < hist.size(); ++i) {
            out << i << "," << hist[i] << "\n";
        }
    }

    emit({{"command", "stats"},
          {"files", int(files.size())},
          {"frames", frames},
          {"visible", visible},
          {"blurred", blurred},
          {"blur_ratio", blur_ratio},
          {"mean_displacement", disp_mean},
          {"std_displacement", disp_std},
          {"max_half_length", max_length}},
         format);
    if (format != "json") {
        std::printf("files: %zu  frames: %ld  visible: %ld\n", files.size(), frames, visible);
        std::printf("blur ratio:        %.4f\n", blur_ratio);
        std::printf("mean displacement: %.2f +/- %.2f px\n", disp_mean, disp_std);
        std::printf("max half-length:   %.1f px\n", max_length);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Blur-aware ball tracking toolkit"};
    app.require_subcommand(1);
    std::string format = "text";
    app.add_option("--format", format, "Output format: text or json")
        ->check(CLI::IsMember({"text", "json"}));

    // render
    auto* render = app.add_subcommand("render", "Generate a synthetic labeled fixture bundle");
    uint64_t seed = 0;
    std::string output;
    int frames = 60, width = 512, height = 288, distractors = 0;
    double noise = 0.0, fps = 120.0, t_exp = 0.004, empty_fraction = 0.0;
    bool gray = false;
    render->add_option("--seed", seed, "Deterministic seed")->required();
    render->add_option("--output", output, "Bundle directory")->required();
    render->add_option("--frames", frames)->check(CLI::PositiveNumber);
    render->add_option("--width", width)->check(CLI::PositiveNumber);
    render->add_option("--height", height)->check(CLI::PositiveNumber);
    render->add_option("--noise", noise)->check(CLI::Range(0.0, 1.0));
    render->add_option("--fps", fps)->check(CLI::PositiveNumber);
    render->add_option("--t-exp", t_exp)->check(CLI::PositiveNumber);
    render->add_option("--distractors", distractors)->check(CLI::NonNegativeNumber);
    render->add_option("--empty-fraction", empty_fraction)->check(CLI::Range(0.0, 1.0));
    render->add_flag("--gray", gray, "Also write grayscale frame pairs");

    // extract
    auto* extract = app.add_subcommand("extract", "Detect balls and blur in a heatmap bundle");
    std::string ex_input, ex_output;
    double delta = 0.5, gate = 50.0;
    int min_area = 2;
    bool no_track = false;
    extract->add_option("--input", ex_input, "Bundle directory")->required();
    extract->add_option("--output", ex_output, "Detections CSV")->required();
    extract->add_option("--delta", delta, "Binarization threshold")->check(CLI::Range(0.0, 1.0));
    extract->add_option("--min-area", min_area)->check(CLI::PositiveNumber);
    extract->add_option("--gate", gate, "Tracker gate radius, px")->check(CLI::PositiveNumber);
    extract->add_flag("--no-track", no_track, "Pick top confidence without the tracker");

    // baseline
    auto* baseline_cmd = app.add_subcommand("baseline", "Frame-difference blur estimation");
    std::string bl_frames, bl_centers, bl_output;
    int ref_offset = 2, half_size = 40;
    double thresh = 0.1;
    baseline_cmd->add_option("--frames", bl_frames, "Directory of PGM/PNG frames")->required();
    baseline_cmd->add_option("--centers", bl_centers, "CSV with detected ball centers")->required();
    baseline_cmd->add_option("--output", bl_output, "Output blur CSV")->required();
    baseline_cmd->add_option("--ref-offset", ref_offset, "Reference frame distance")
        ->check(CLI::PositiveNumber);
    baseline_cmd->add_option("--half-size", half_size, "ROI half size, px")
        ->check(CLI::PositiveNumber);
    baseline_cmd->add_option("--thresh", thresh, "Difference threshold")->check(CLI::Range(0.0, 1.0));

    // fit
    auto* fit = app.add_subcommand("fit", "Quadratic trajectory fit and prediction error");
    std::string fit_input, mode = "both";
    double fit_fps = 120.0;
    int window = 3;
    bool split_axes = false;
    fit->add_option("--input", fit_input, "Labels CSV")->required();
    fit->add_option("--fps", fit_fps)->check(CLI::PositiveNumber);
    fit->add_option("--window", window, "Observations used for fitting")->check(CLI::Range(3, 100));
    fit->add_option("--mode", mode)->check(CLI::IsMember({"pos", "blur", "both"}));
    fit->add_flag("--split-axes", split_axes, "Independent exposure time per axis");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Detection metrics against ground truth");
    std::string ev_pred, ev_gt, ev_bundle, ev_pr_out, ev_sweep_out, convention = "mid";
    std::vector<double> sweep_deltas;
    double tau = kDefaultTau;
    eval_cmd->add_option("--pred", ev_pred, "Detections CSV");
    eval_cmd->add_option("--gt", ev_gt, "Ground truth CSV");
    eval_cmd->add_option("--bundle", ev_bundle, "Heatmap bundle (threshold sweep mode)");
    eval_cmd->add_option("--tau", tau, "TP distance threshold, px")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--convention", convention)->check(CLI::IsMember({"mid", "front"}));
    eval_cmd->add_option("--sweep", sweep_deltas, "Thresholds for a delta sweep");
    eval_cmd->add_option("--pr-out", ev_pr_out, "Write the PR curve CSV here");
    eval_cmd->add_option("--sweep-out", ev_sweep_out, "Write the sweep CSV here");

    // relabel
    auto* relabel = app.add_subcommand("relabel", "Convert between mid and front conventions");
    std::string rl_input, rl_output, rl_to;
    relabel->add_option("--input", rl_input)->required();
    relabel->add_option("--output", rl_output)->required();
    relabel->add_option("--to", rl_to, "Target convention")
        ->required()
        ->check(CLI::IsMember({"front", "mid"}));

    // calibrate
    auto* calibrate = app.add_subcommand("calibrate", "PnP camera calibration from keypoints");
    std::string cal_input, cal_output;
    int cal_width = 1024, cal_height = 576;
    bool cal_table = false;
    calibrate->add_option("--input", cal_input, "Keypoint file")->required();
    calibrate->add_option("--output", cal_output, "Calibration file")->required();
    calibrate->add_option("--width", cal_width, "Image width, px")->check(CLI::PositiveNumber);
    calibrate->add_option("--height", cal_height, "Image height, px")->check(CLI::PositiveNumber);
    calibrate->add_flag("--table", cal_table,
                        "Rows are image points of the six canonical table keypoints");

    // stats
    auto* stats = app.add_subcommand("stats", "Dataset statistics from label CSVs");
    std::string st_input, st_hist;
    stats->add_option("--input", st_input, "CSV file or directory")->required();
    stats->add_option("--hist-out", st_hist, "Write the half-length histogram CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (render->parsed()) {
            return run_render(seed, output, frames, width, height, noise, fps, t_exp, distractors,
                              empty_fraction, gray, format);
        }
        if (extract->parsed()) {
            return run_extract(ex_input, ex_output, delta, min_area, no_track, gate, format);
        }
        if (baseline_cmd->parsed()) {
            return run_baseline(bl_frames, bl_centers, bl_output, ref_offset, half_size, thresh,
                                format);
        }
        if (fit->parsed()) return run_fit(fit_input, fit_fps, window, mode, split_axes, format);
        if (eval_cmd->parsed()) {
            if (!ev_bundle.empty()) {
                if (sweep_deltas.empty()) {
                    sweep_deltas = {0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
                }
                return run_sweep(ev_bundle, sweep_deltas, tau, ev_sweep_out, format);
            }
            if (ev_pred.empty() || ev_gt.empty()) {
                std::cerr << "eval: need --pred and --gt, or --bundle for a sweep\n";
                return 2;
            }
            return run_eval(ev_pred, ev_gt, tau, convention, ev_pr_out, format);
        }
        if (relabel->parsed()) return run_relabel(rl_input, rl_output, rl_to, format);
        if (calibrate->parsed()) {
            return run_calibrate(cal_input, cal_output, cal_width, cal_height, cal_table, format);
        }
        if (stats->parsed()) return run_stats(st_input, st_hist, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
