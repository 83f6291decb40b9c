#pragma once

#include "clockforge/homography.hpp"
#include "clockforge/image.hpp"
#include "clockforge/time.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace clockforge {

inline constexpr const char* kFormatVersion = "1.0.0";

/// Malformed input; carries the 1-based line number when it applies.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line), message_(what) {}
    [[nodiscard]] int line() const noexcept { return line_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }

private:
    int line_;
    std::string message_;
};

class EmptyBox : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// PNG, 8-bit RGB on write; gray, gray+alpha, RGB and RGBA on read.
Image read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image& img);
std::vector<unsigned char> encode_png(const Image& img);

/// Writes through a temporary sibling and renames into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
void write_file_atomic(const std::filesystem::path& path, const std::vector<unsigned char>& contents);

std::string read_file(const std::filesystem::path& path);

// Splits one CSV line on commas (no quoting; the toolkit's files never need it).
std::vector<std::string> split_csv_line(const std::string& line);

// Reads a whole CSV file, validating the header; returns data rows with
// their 1-based line numbers.
struct CsvRow {
    int line = 0;
    std::vector<std::string> fields;
};
std::vector<CsvRow> read_csv(const std::filesystem::path& path, const std::vector<std::string>& header);
std::vector<CsvRow> parse_csv(const std::string& text, const std::vector<std::string>& header);

int parse_int(const std::string& field, int line);
double parse_double(const std::string& field, int line);

struct LabelRow {
    std::string filename;
    ClockTime time;

    friend bool operator==(const LabelRow&, const LabelRow&) = default;
};

/// `filename,hour,minute`; duplicates and out-of-range fields are rejected.
std::vector<LabelRow> load_labels(const std::filesystem::path& path);
std::vector<LabelRow> parse_labels(const std::string& text);
std::string format_labels(const std::vector<LabelRow>& rows);
void save_labels(const std::filesystem::path& path, const std::vector<LabelRow>& rows);

struct PredictionRow {
    std::string filename;
    TimeClass pred;
    double score = 0.0;
    int rank = 1;

    friend bool operator==(const PredictionRow&, const PredictionRow&) = default;
};

/// `filename,pred_class,score,rank`; ranks per file must be 1, 2, ... in order.
std::vector<PredictionRow> parse_predictions(const std::string& text);
std::vector<PredictionRow> load_predictions(const std::filesystem::path& path);
std::string format_predictions(const std::vector<PredictionRow>& rows);

struct DatasetManifest {
    std::filesystem::path root;
    std::filesystem::path labels_file;
    int image_count = 0;
    std::string format_version = kFormatVersion;
};

/// Opens a generated dataset and checks that every labeled image exists.
DatasetManifest open_dataset(const std::filesystem::path& root);

nlohmann::json to_json(const Homography& h);
// Expects a 9-element row-major array; rescales so that h33 == 1.
Homography homography_from_json(const nlohmann::json& j);

struct BoundingBox {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

struct CropConvention {
    double context_fraction = 0.20;
};

/// Crops `box` grown by `context_fraction` of its size on every side;
/// regions beyond the image are black.
Image crop_with_context(const Image& img, const BoundingBox& box, const CropConvention& convention = {});

}  // namespace clockforge
