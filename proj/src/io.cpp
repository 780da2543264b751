#include "blurtrack/io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace blurtrack {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, sep)) fields.push_back(field);
    if (!line.empty() && line.back() == sep) fields.push_back("");
    return fields;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& s, const fs::path& path, int line_no) {
    try {
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != trim(s).size() && used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": malformed number '" + s + "'");
    }
}

// Write to a sibling temp file, then rename over the target.
class AtomicFile {
public:
    explicit AtomicFile(const fs::path& path, std::ios::openmode mode = std::ios::out)
        : target_(path), temp_(path.string() + ".tmp"), out_(temp_, mode) {
        if (!out_) throw std::runtime_error("cannot open " + temp_.string() + " for writing");
    }
    std::ofstream& stream() { return out_; }
    void commit() {
        out_.close();
        if (!out_) throw std::runtime_error("write failed: " + temp_.string());
        fs::rename(temp_, target_);
    }

private:
    fs::path target_;
    fs::path temp_;
    std::ofstream out_;
};

std::string format_frame_id(int frame_index, int digits) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%0*d", digits, frame_index);
    return buf;
}

// Shared row parser for labels and detections.
struct CsvRow {
    FrameAnnotation annotation;
    std::optional<double> confidence;
    int digits = 0;
};

std::optional<CsvRow> parse_label_row(const std::string& raw, const fs::path& path, int line_no) {
    std::string line = trim(raw);
    if (line.empty()) return std::nullopt;
    auto fields = split(line, ',');
    if (!fields.empty() && trim(fields[0]) == "Frame") return std::nullopt;  // header
    if (fields.size() < 6) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": expected 6 columns, got " + std::to_string(fields.size()));
    }

    CsvRow row;
    std::string frame_field = trim(fields[0]);
    if (frame_field.empty() || frame_field.find_first_not_of("0123456789") != std::string::npos) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                 ": malformed frame id '" + frame_field + "'");
    }
    row.digits = int(frame_field.size());
    row.annotation.frame_index = int(parse_double(frame_field, path, line_no));

    int visibility = int(parse_double(trim(fields[1]), path, line_no));
    if (visibility != 0) {
        BlurLabel label;
        label.center.x = parse_double(trim(fields[2]), path, line_no);
        label.center.y = parse_double(trim(fields[3]), path, line_no);
        label.theta = deg_to_rad(parse_double(trim(fields[4]), path, line_no));
        label.half_length = parse_double(trim(fields[5]), path, line_no);
        label.visible = true;
        row.annotation.label = label;
    }
    if (fields.size() >= 7) {
        std::string c = trim(fields[6]);
        if (!c.empty()) row.confidence = parse_double(c, path, line_no);
    }
    return row;
}

void write_label_fields(std::ofstream& out, const FrameAnnotation& a, int digits) {
    out << format_frame_id(a.frame_index, digits);
    if (a.label) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), ",1,%.2f,%.2f,%.2f,%.2f", a.label->center.x,
                      a.label->center.y, rad_to_deg(a.label->theta), a.label->half_length);
        out << buf;
    } else {
        out << ",0,0.00,0.00,0.00,0.00";
    }
}

}  // namespace

LabelsCsv read_labels_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    LabelsCsv result;
    bool digits_seen = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto row = parse_label_row(line, path, line_no);
        if (!row) continue;
        if (!digits_seen) {
            result.frame_digits = row->digits;
            digits_seen = true;
        }
        result.annotations.push_back(std::move(row->annotation));
    }
    return result;
}

void write_labels_csv(const fs::path& path, const std::vector<FrameAnnotation>& annotations,
                      int frame_digits) {
    AtomicFile file(path);
    file.stream() << "Frame,Visibility,X,Y,Theta,l\n";
    for (const FrameAnnotation& a : annotations) {
        write_label_fields(file.stream(), a, frame_digits);
        file.stream() << "\n";
    }
    file.commit();
}

std::vector<DetectionRow> read_detections_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::vector<DetectionRow> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto row = parse_label_row(line, path, line_no);
        if (!row) continue;
        rows.push_back({std::move(row->annotation), row->confidence});
    }
    return rows;
}

void write_detections_csv(const fs::path& path, const std::vector<DetectionRow>& rows,
                          int frame_digits) {
    AtomicFile file(path);
    file.stream() << "Frame,Visibility,X,Y,Theta,l,Confidence\n";
    for (const DetectionRow& row : rows) {
        write_label_fields(file.stream(), row.annotation, frame_digits);
        char buf[32];
        std::snprintf(buf, sizeof(buf), ",%.4f", row.confidence.value_or(0.0));
        file.stream() << buf << "\n";
    }
    file.commit();
}

CameraModel read_calibration(const fs::path& path, Vec2 principal) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::vector<double> numbers;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream stream(line);
        double v;
        while (stream >> v) numbers.push_back(v);
    }
    if (numbers.size() != 7) {
        throw std::runtime_error(path.string() + ": expected 7 numbers (f r3 T3), got " +
                                 std::to_string(numbers.size()));
    }
    CameraModel cam;
    cam.f = numbers[0];
    cam.rvec = {numbers[1], numbers[2], numbers[3]};
    cam.tvec = {numbers[4], numbers[5], numbers[6]};
    cam.principal = principal;
    return cam;
}

void write_calibration(const fs::path& path, const CameraModel& cam) {
    AtomicFile file(path);
    char buf[256];
    std::snprintf(buf, sizeof(buf), "# f rx ry rz tx ty tz\n%.17g %.17g %.17g %.17g %.17g %.17g %.17g\n",
                  cam.f, cam.rvec[0], cam.rvec[1], cam.rvec[2], cam.tvec[0], cam.tvec[1],
                  cam.tvec[2]);
    file.stream() << buf;
    file.commit();
}

namespace {

void write_pgm_impl(const fs::path& path, int width, int height, const std::vector<double>& values) {
    AtomicFile file(path, std::ios::out | std::ios::binary);
    file.stream() << "P5\n" << width << " " << height << "\n255\n";
    std::vector<unsigned char> row(size_t(width));
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double v = values[size_t(y) * width + x];
            row[size_t(x)] = (unsigned char)std::lround(255.0 * std::clamp(v, 0.0, 1.0));
        }
        file.stream().write(reinterpret_cast<const char*>(row.data()), width);
    }
    file.commit();
}

}  // namespace

void write_pgm(const fs::path& path, const Heatmap& map) {
    write_pgm_impl(path, map.width, map.height, map.values);
}

void write_pgm(const fs::path& path, const GrayFrame& frame) {
    write_pgm_impl(path, frame.width, frame.height, frame.values);
}

GrayFrame read_pgm(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    std::string magic;
    in >> magic;
    if (magic != "P5" && magic != "P2") {
        throw std::runtime_error(path.string() + ": not a PGM file");
    }
    auto next_token = [&in, &path]() {
        std::string token;
        while (in >> token) {
            if (token[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return token;
        }
        throw std::runtime_error(path.string() + ": truncated PGM header");
    };
    int width = std::stoi(next_token());
    int height = std::stoi(next_token());
    int maxval = std::stoi(next_token());
    if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
        throw std::runtime_error(path.string() + ": bad PGM header");
    }

    GrayFrame frame(width, height);
    if (magic == "P2") {
        for (double& v : frame.values) {
            int raw;
            if (!(in >> raw)) throw std::runtime_error(path.string() + ": truncated PGM data");
            v = double(raw) / maxval;
        }
        return frame;
    }

    in.get();  // single whitespace after maxval
    int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> raw(size_t(width) * height * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), std::streamsize(raw.size()));
    if (size_t(in.gcount()) != raw.size()) {
        throw std::runtime_error(path.string() + ": truncated PGM data");
    }
    for (size_t i = 0; i < frame.values.size(); ++i) {
        int v = bytes == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
        frame.values[i] = double(v) / maxval;
    }
    return frame;
}

void write_heatmap_f32(const fs::path& path, const Heatmap& map) {
    AtomicFile file(path, std::ios::out | std::ios::binary);
    uint32_t header[2] = {uint32_t(map.width), uint32_t(map.height)};
    file.stream().write(reinterpret_cast<const char*>(header), 8);
    std::vector<float> data(map.values.begin(), map.values.end());
    file.stream().write(reinterpret_cast<const char*>(data.data()),
                        std::streamsize(data.size() * sizeof(float)));
    file.commit();
}

Heatmap read_heatmap_f32(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());

    uint32_t header[2];
    in.read(reinterpret_cast<char*>(header), 8);
    if (in.gcount() != 8) throw std::runtime_error(path.string() + ": truncated f32 header");
    if (header[0] == 0 || header[1] == 0 || header[0] > 1u << 20 || header[1] > 1u << 20) {
        throw std::runtime_error(path.string() + ": implausible f32 dimensions");
    }

    Heatmap map(int(header[0]), int(header[1]));
    std::vector<float> data(map.values.size());
    in.read(reinterpret_cast<char*>(data.data()), std::streamsize(data.size() * sizeof(float)));
    if (size_t(in.gcount()) != data.size() * sizeof(float)) {
        throw std::runtime_error(path.string() + ": truncated f32 data");
    }
    std::copy(data.begin(), data.end(), map.values.begin());
    return map;
}

namespace {

GrayFrame read_png(const fs::path& path) {
    FILE* fp = std::fopen(path.string().c_str(), "rb");
    if (!fp) throw std::runtime_error("cannot open " + path.string());

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw std::runtime_error("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw std::runtime_error(path.string() + ": PNG decode error");
    }

    png_init_io(png, fp);
    png_read_info(png, info);

    png_uint_32 width = png_get_image_width(png, info);
    png_uint_32 height = png_get_image_height(png, info);

    // Normalize to 8-bit RGB without alpha.
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    png_set_gray_to_rgb(png);
    png_read_update_info(png, info);

    std::vector<unsigned char> data(size_t(width) * height * 3);
    std::vector<png_bytep> rows(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = data.data() + size_t(y) * width * 3;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);

    GrayFrame frame(int(width), int(height));
    for (size_t i = 0; i < frame.values.size(); ++i) {
        const unsigned char* px = &data[i * 3];
        frame.values[i] = rgb_to_gray(px[0] / 255.0, px[1] / 255.0, px[2] / 255.0);
    }
    return frame;
}

}  // namespace

GrayFrame read_gray_image(const fs::path& path) {
    std::string ext = path.extension().string();
    for (char& c : ext) c = char(std::tolower(c));
    if (ext == ".png") return read_png(path);
    if (ext == ".pgm") return read_pgm(path);
    throw std::runtime_error(path.string() + ": unsupported image format (PNG/PGM only)");
}

namespace {

json label_to_json(const BlurLabel& label) {
    return json{{"x", label.center.x},
                {"y", label.center.y},
                {"theta", label.theta},
                {"half_length", label.half_length}};
}

BlurLabel label_from_json(const json& j) {
    BlurLabel label;
    label.center = {j.at("x").get<double>(), j.at("y").get<double>()};
    label.theta = j.at("theta").get<double>();
    label.half_length = j.at("half_length").get<double>();
    label.visible = true;
    return label;
}

}  // namespace

void write_fixture_bundle(const fs::path& dir, const FixtureBundle& bundle,
                          const std::vector<Heatmap>& heatmaps) {
    if (heatmaps.size() != bundle.frames.size()) {
        throw std::invalid_argument("fixture bundle: frame/heatmap count mismatch");
    }
    fs::create_directories(dir);

    json manifest;
    manifest["schema"] = bundle.schema;
    manifest["seed"] = bundle.seed;
    manifest["width"] = bundle.size.width;
    manifest["height"] = bundle.size.height;
    manifest["disk_radius"] = bundle.params.disk_radius;
    manifest["min_value"] = bundle.params.min_value;
    manifest["fps"] = bundle.fps;
    manifest["t_exp"] = bundle.t_exp;

    json frames = json::array();
    std::vector<FrameAnnotation> annotations;
    for (size_t i = 0; i < bundle.frames.size(); ++i) {
        const FixtureFrame& f = bundle.frames[i];
        json jf;
        jf["index"] = f.frame_index;
        jf["t"] = f.t;
        jf["heatmap"] = f.heatmap_file;
        jf["label"] = f.label ? label_to_json(*f.label) : json(nullptr);
        frames.push_back(jf);

        write_heatmap_f32(dir / f.heatmap_file, heatmaps[i]);
        annotations.push_back({f.frame_index, f.label});
    }
    manifest["frames"] = frames;

    AtomicFile file(dir / "manifest.json");
    file.stream() << manifest.dump(2) << "\n";
    file.commit();

    write_labels_csv(dir / "labels.csv", annotations);
}

FixtureBundle read_fixture_manifest(const fs::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw std::runtime_error("cannot open " + (dir / "manifest.json").string());
    json manifest = json::parse(in);

    FixtureBundle bundle;
    bundle.schema = manifest.at("schema").get<int>();
    if (bundle.schema != 1) {
        throw std::runtime_error("unsupported fixture schema " + std::to_string(bundle.schema));
    }
    bundle.seed = manifest.at("seed").get<uint64_t>();
    bundle.size = {manifest.at("width").get<int>(), manifest.at("height").get<int>()};
    bundle.params.disk_radius = manifest.at("disk_radius").get<double>();
    bundle.params.min_value = manifest.at("min_value").get<double>();
    bundle.fps = manifest.at("fps").get<double>();
    bundle.t_exp = manifest.at("t_exp").get<double>();

    for (const json& jf : manifest.at("frames")) {
        FixtureFrame f;
        f.frame_index = jf.at("index").get<int>();
        f.t = jf.at("t").get<double>();
        f.heatmap_file = jf.at("heatmap").get<std::string>();
        if (!jf.at("label").is_null()) f.label = label_from_json(jf.at("label"));
        bundle.frames.push_back(std::move(f));
    }
    return bundle;
}

Heatmap read_fixture_heatmap(const fs::path& dir, const FixtureFrame& frame) {
    return read_heatmap_f32(dir / frame.heatmap_file);
}

}  // namespace blurtrack
