#include "clockforge/dataio.hpp"

#include <png.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace clockforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadGuard() { png_destroy_read_struct(&png, info ? &info : nullptr, nullptr); }
};

struct PngWriteGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngWriteGuard() { png_destroy_write_struct(&png, info ? &info : nullptr); }
};

[[noreturn]] void png_fail(png_structp, png_const_charp msg) { throw ParseError(std::string("png: ") + msg); }

void png_warn(png_structp, png_const_charp) {}

struct MemoryReader {
    const std::string* data;
    std::size_t pos = 0;
};

void read_from_memory(png_structp png, png_bytep out, png_size_t len) {
    auto* r = static_cast<MemoryReader*>(png_get_io_ptr(png));
    if (r->pos + len > r->data->size()) throw ParseError("png: truncated file");
    std::copy_n(r->data->data() + r->pos, len, out);
    r->pos += len;
}

void write_to_vector(png_structp png, png_bytep data, png_size_t len) {
    auto* v = static_cast<std::vector<unsigned char>*>(png_get_io_ptr(png));
    v->insert(v->end(), data, data + len);
}

void flush_noop(png_structp) {}

}  // namespace

Image read_png(const fs::path& path) {
    const std::string bytes = read_file(path);
    if (bytes.size() < 8 || png_sig_cmp(reinterpret_cast<png_const_bytep>(bytes.data()), 0, 8) != 0) {
        throw ParseError("not a PNG file: " + path.string());
    }
    PngReadGuard g;
    g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    if (!g.png) throw std::runtime_error("png_create_read_struct failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw std::runtime_error("png_create_info_struct failed");
    MemoryReader reader{&bytes};
    png_set_read_fn(g.png, &reader, read_from_memory);
    png_read_info(g.png, g.info);

    const png_uint_32 w = png_get_image_width(g.png, g.info);
    const png_uint_32 h = png_get_image_height(g.png, g.info);
    const int color = png_get_color_type(g.png, g.info);
    if (png_get_bit_depth(g.png, g.info) == 16) png_set_strip_16(g.png);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(g.png, g.info) < 8) png_set_expand_gray_1_2_4_to_8(g.png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) png_set_gray_to_rgb(g.png);
    if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_strip_alpha(g.png);
    png_read_update_info(g.png, g.info);
    if (png_get_rowbytes(g.png, g.info) != static_cast<png_size_t>(w) * 3) {
        throw ParseError("png: unsupported pixel layout in " + path.string());
    }
    Image img(static_cast<int>(w), static_cast<int>(h));
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y) rows[y] = img.bytes().data() + static_cast<std::size_t>(y) * w * 3;
    png_read_image(g.png, rows.data());
    png_read_end(g.png, nullptr);
    return img;
}

std::vector<unsigned char> encode_png(const Image& img) {
    std::vector<unsigned char> out;
    PngWriteGuard g;
    g.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    if (!g.png) throw std::runtime_error("png_create_write_struct failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw std::runtime_error("png_create_info_struct failed");
    png_set_write_fn(g.png, &out, write_to_vector, flush_noop);
    png_set_IHDR(g.png, g.info, img.width(), img.height(), 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_set_compression_level(g.png, 6);
    png_write_info(g.png, g.info);
    for (int y = 0; y < img.height(); ++y) {
        png_write_row(g.png, img.bytes().data() + static_cast<std::size_t>(y) * img.width() * 3);
    }
    png_write_end(g.png, nullptr);
    return out;
}

void write_png(const fs::path& path, const Image& img) { write_file_atomic(path, encode_png(img)); }

void write_file_atomic(const fs::path& path, const std::vector<unsigned char>& contents) {
    write_file_atomic(path, std::string(contents.begin(), contents.end()));
}

void write_file_atomic(const fs::path& path, const std::string& contents) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<CsvRow> parse_csv(const std::string& text, const std::vector<std::string>& header) {
    std::istringstream in(text);
    std::string line;
    int number = 0;
    std::vector<CsvRow> rows;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (!seen_header) {
            if (fields != header) {
                std::string expected;
                for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
                throw ParseError("expected header '" + expected + "'", number);
            }
            seen_header = true;
            continue;
        }
        if (fields.size() != header.size()) {
            throw ParseError("expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             number);
        }
        rows.push_back({number, std::move(fields)});
    }
    if (!seen_header) throw ParseError("missing CSV header");
    return rows;
}

std::vector<CsvRow> read_csv(const fs::path& path, const std::vector<std::string>& header) {
    try {
        return parse_csv(read_file(path), header);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.message(), e.line());
    }
}

int parse_int(const std::string& field, int line) {
    int value = 0;
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (ec != std::errc() || ptr != end || field.empty()) throw ParseError("not an integer: '" + field + "'", line);
    return value;
}

double parse_double(const std::string& field, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("not a number: '" + field + "'", line);
    }
}

std::vector<LabelRow> parse_labels(const std::string& text) {
    std::vector<LabelRow> out;
    std::set<std::string> seen;
    for (const auto& row : parse_csv(text, {"filename", "hour", "minute"})) {
        const std::string& name = row.fields[0];
        if (name.empty()) throw ParseError("empty filename", row.line);
        if (!seen.insert(name).second) throw ParseError("duplicate filename '" + name + "'", row.line);
        const int hour = parse_int(row.fields[1], row.line);
        const int minute = parse_int(row.fields[2], row.line);
        try {
            out.push_back({name, ClockTime(hour, minute)});
        } catch (const RangeError& e) {
            throw RangeError("line " + std::to_string(row.line) + ": " + e.what());
        }
    }
    return out;
}

std::vector<LabelRow> load_labels(const fs::path& path) {
    try {
        return parse_labels(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.message(), e.line());
    }
}

std::string format_labels(const std::vector<LabelRow>& rows) {
    std::string out = "filename,hour,minute\n";
    for (const auto& r : rows) {
        out += r.filename + "," + std::to_string(r.time.hour()) + "," + std::to_string(r.time.minute()) + "\n";
    }
    return out;
}

void save_labels(const fs::path& path, const std::vector<LabelRow>& rows) {
    write_file_atomic(path, format_labels(rows));
}

std::vector<PredictionRow> parse_predictions(const std::string& text) {
    std::vector<PredictionRow> out;
    std::map<std::string, int> last_rank;
    for (const auto& row : parse_csv(text, {"filename", "pred_class", "score", "rank"})) {
        PredictionRow p;
        p.filename = row.fields[0];
        if (p.filename.empty()) throw ParseError("empty filename", row.line);
        const int cls = parse_int(row.fields[1], row.line);
        if (cls < 0 || cls >= kMinutesPerCycle) throw ParseError("class out of range", row.line);
        p.pred = TimeClass(cls);
        p.score = parse_double(row.fields[2], row.line);
        p.rank = parse_int(row.fields[3], row.line);
        int& prev = last_rank[p.filename];
        if (p.rank != prev + 1) throw ParseError("ranks must run 1, 2, ... per file", row.line);
        prev = p.rank;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<PredictionRow> load_predictions(const fs::path& path) {
    try {
        return parse_predictions(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.message(), e.line());
    }
}

std::string format_predictions(const std::vector<PredictionRow>& rows) {
    std::string out = "filename,pred_class,score,rank\n";
    char score[32];
    for (const auto& r : rows) {
        std::snprintf(score, sizeof score, "%.6f", r.score);
        out += r.filename + "," + std::to_string(r.pred.index()) + "," + score + "," + std::to_string(r.rank) + "\n";
    }
    return out;
}

DatasetManifest open_dataset(const fs::path& root) {
    DatasetManifest m;
    m.root = root;
    m.labels_file = root / "labels.csv";
    const auto rows = load_labels(m.labels_file);
    for (const auto& r : rows) {
        if (!fs::exists(root / "images" / r.filename)) {
            throw ParseError("labels reference missing image " + r.filename);
        }
    }
    m.image_count = static_cast<int>(rows.size());
    return m;
}

json to_json(const Homography& h) {
    const auto v = h.row_major();
    return json(std::vector<double>(v.begin(), v.end()));
}

Homography homography_from_json(const json& j) {
    if (!j.is_array() || j.size() != 9) throw ParseError("homography must be a 9-element array");
    std::array<double, 9> v{};
    for (std::size_t i = 0; i < 9; ++i) {
        if (!j[i].is_number()) throw ParseError("homography entries must be numbers");
        v[i] = j[i].get<double>();
    }
    return Homography::from_row_major(v);
}

Image crop_with_context(const Image& img, const BoundingBox& box, const CropConvention& convention) {
    if (box.width <= 0 || box.height <= 0) throw EmptyBox("bounding box has no area");
    if (convention.context_fraction < 0.0) throw std::invalid_argument("context fraction must be non-negative");
    const int pad_x = static_cast<int>(std::lround(convention.context_fraction * box.width));
    const int pad_y = static_cast<int>(std::lround(convention.context_fraction * box.height));
    const int x0 = box.x - pad_x;
    const int y0 = box.y - pad_y;
    Image out(box.width + 2 * pad_x, box.height + 2 * pad_y);
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            if (img.contains(x0 + x, y0 + y)) out.set_pixel(x, y, img.pixel(x0 + x, y0 + y));
        }
    }
    return out;
}

}  // namespace clockforge
