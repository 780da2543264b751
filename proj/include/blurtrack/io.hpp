#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "blurtrack/baseline.hpp"
#include "blurtrack/camera.hpp"
#include "blurtrack/geometry.hpp"
#include "blurtrack/heatmap.hpp"

// File formats: annotation CSV (Frame,Visibility,X,Y,Theta,l with theta in
// degrees), per-game calibration text (f r3 T3, '#' comments), heatmaps as
// 8-bit PGM or raw little-endian float32 with a width/height header, and
// synthetic fixture bundles (manifest.json + labels.csv + per-frame maps).
// Writers go through a temp file plus rename so partial output never lands
// under the target name.

namespace blurtrack {

struct LabelsCsv {
    std::vector<FrameAnnotation> annotations;
    int frame_digits = 6;  // zero-padding observed in the file, kept on write
};

// Throws with the offending line number on malformed rows. Unknown extra
// columns are tolerated; visibility 0 yields an absent label.
LabelsCsv read_labels_csv(const std::filesystem::path& path);
void write_labels_csv(const std::filesystem::path& path, const std::vector<FrameAnnotation>& annotations,
                      int frame_digits = 6);

// Detections extend the annotation row with a confidence column.
struct DetectionRow {
    FrameAnnotation annotation;
    std::optional<double> confidence;
};
std::vector<DetectionRow> read_detections_csv(const std::filesystem::path& path);
void write_detections_csv(const std::filesystem::path& path, const std::vector<DetectionRow>& rows,
                          int frame_digits = 6);

CameraModel read_calibration(const std::filesystem::path& path, Vec2 principal);
void write_calibration(const std::filesystem::path& path, const CameraModel& cam);

void write_pgm(const std::filesystem::path& path, const Heatmap& map);
void write_pgm(const std::filesystem::path& path, const GrayFrame& frame);
GrayFrame read_pgm(const std::filesystem::path& path);

// Raw float32: uint32 width, uint32 height (little-endian), then
// width*height row-major float32 samples.
void write_heatmap_f32(const std::filesystem::path& path, const Heatmap& map);
Heatmap read_heatmap_f32(const std::filesystem::path& path);

// Grayscale load for PGM or PNG frame directories (PNG via libpng; color
// images reduce with the standard luminance weights).
GrayFrame read_gray_image(const std::filesystem::path& path);

struct FixtureFrame {
    int frame_index = 0;
    double t = 0.0;
    std::optional<BlurLabel> label;
    std::string heatmap_file;  // relative to the bundle directory
};

struct FixtureBundle {
    int schema = 1;
    uint64_t seed = 0;
    RasterSize size;
    HeatmapParams params;
    double fps = 0.0;
    double t_exp = 0.0;
    std::vector<FixtureFrame> frames;
};

void write_fixture_bundle(const std::filesystem::path& dir, const FixtureBundle& bundle,
                          const std::vector<Heatmap>& heatmaps);
FixtureBundle read_fixture_manifest(const std::filesystem::path& dir);
Heatmap read_fixture_heatmap(const std::filesystem::path& dir, const FixtureFrame& frame);

}  // namespace blurtrack
