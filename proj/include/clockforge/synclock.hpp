#pragma once

#include "clockforge/homography.hpp"
#include "clockforge/image.hpp"
#include "clockforge/time.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace clockforge {

enum class FaceShape { circle, rounded_square, ellipse };
enum class TickMode { none, hour_only, every_minute };
enum class NumeralStyle { none, arabic, roman };
enum class HandKind { hour, minute, second, alarm };
enum class StylePreset { simple, full };

// Pixel-valued style fields are expressed on a 224 px reference canvas and
// scale linearly with the rendered size.
inline constexpr double kReferenceCanvas = 224.0;

struct HandStyle {
    HandKind kind = HandKind::hour;
    double length = 0.5;       // fraction of the face radius
    double back_length = 0.1;  // tail behind the pivot, fraction of radius
    double thickness = 4.0;    // px
    Rgb color{};
    bool arrow = false;
    double arrow_tip_length = 6.0;  // px
    double arrow_size = 6.0;        // px, full width of the head
    // Direction of distractor hands (second / alarm); unused for hour and
    // minute, which follow the time.
    double angle = 0.0;
};

struct ClockStyle {
    Rgb background{200, 200, 200};

    double face_size = 0.8;  // face diameter / canvas side
    FaceShape face_shape = FaceShape::circle;
    double face_aspect = 1.0;          // ellipse: vertical / horizontal semi-axis
    double corner_radius = 0.25;       // rounded square: fraction of half side
    Rgb face_color{255, 255, 255};

    double border_thickness = 3.0;
    Rgb border_color{};

    TickMode tick_mode = TickMode::every_minute;
    double tick_gap = 2.0;
    double tick_length = 5.0;
    double tick_thickness = 1.5;
    Rgb tick_color{};

    NumeralStyle numerals = NumeralStyle::arabic;
    double numeral_gap = 16.0;
    double font_size = 13.0;
    double font_thickness = 2.0;
    Rgb numeral_color{};

    std::vector<HandStyle> hands;

    [[nodiscard]] const HandStyle* hand(HandKind kind) const;
};

/// Throws std::invalid_argument when a style breaks its invariants.
void validate(const ClockStyle& style);

struct Range {
    double lo = 0.0;
    double hi = 0.0;
};

/// Sampling ranges for the `full` preset; shipped as config/synclock_ranges.json.
struct StyleRanges {
    std::string format_version = "1.0.0";
    Range face_size{0.5, 0.95};
    Range face_aspect{0.75, 1.0};
    Range corner_radius{0.1, 0.45};
    Range border_thickness{0.0, 8.0};
    Range tick_gap{0.0, 6.0};
    Range tick_length{3.0, 12.0};
    Range tick_thickness{1.0, 4.0};
    Range numeral_gap{12.0, 26.0};
    Range font_size{8.0, 20.0};
    Range font_thickness{1.0, 3.0};
    Range hour_length{0.35, 0.6};
    Range minute_length{0.6, 0.95};
    Range second_length{0.7, 0.95};
    Range alarm_length{0.3, 0.5};
    Range back_length{0.0, 0.25};
    Range hour_thickness{3.0, 8.0};
    Range minute_thickness{2.0, 6.0};
    Range distractor_thickness{0.8, 1.8};
    Range arrow_tip_length{4.0, 10.0};
    Range arrow_size{4.0, 10.0};
    double arrow_probability = 0.3;
    double min_hand_gap = 0.1;  // minute length - hour length
    // Probabilities of 2, 3 and 4 hands.
    double p_two_hands = 0.5;
    double p_three_hands = 0.3;
};

StyleRanges load_style_ranges(const std::filesystem::path& path);
nlohmann::json to_json(const StyleRanges& r);
StyleRanges style_ranges_from_json(const nlohmann::json& j);

ClockStyle sample_style(std::uint64_t seed, StylePreset preset, const StyleRanges& ranges = {});

/// Resolved geometry of one hand on a specific canvas.
struct HandGeometry {
    HandKind kind = HandKind::hour;
    double angle = 0.0;  // degrees clockwise from 12
    double length = 0.0;  // px
    double back_length = 0.0;
    double thickness = 0.0;
    bool arrow = false;
    double arrow_tip_length = 0.0;
    double arrow_size = 0.0;
    Rgb color{};
    Eigen::Vector2d center{0.0, 0.0};  // pivot, absolute pixel coordinates
};

std::vector<HandGeometry> hand_geometry(const ClockStyle& style, const ClockTime& time, int size);

/// Fronto-parallel render, '12' at the top. Deterministic in its inputs.
Image render_clock(const ClockStyle& style, const ClockTime& time, int size = 224);

struct ShadowSpec {
    HandGeometry hand;
    Eigen::Vector2d offset{3.0, 3.0};  // px
    double opacity = 0.5;
    Rgb color{};
};

struct LineArtefact {
    Eigen::Vector2d a{0.0, 0.0};
    Eigen::Vector2d b{0.0, 0.0};
    double thickness = 1.0;
    Rgb color{};
};

struct ArtefactSpec {
    std::optional<ShadowSpec> shadow;
    std::vector<LineArtefact> lines;  // at most 5

    [[nodiscard]] bool empty() const { return !shadow && lines.empty(); }
};

void validate(const ArtefactSpec& spec, int width, int height);

ArtefactSpec sample_artefacts(std::uint64_t seed, const ClockStyle& style, const ClockTime& time, int size);

/// Shadow: the hand silhouette at an offset, alpha-blended, with the hand
/// redrawn on top. Lines: aliased, every pixel whose center lies within
/// thickness / 2 of the segment.
Image apply_artefacts(const Image& img, const ArtefactSpec& spec);

struct AugmentParams {
    double blur_sigma = 0.0;
    double gain[3] = {1.0, 1.0, 1.0};
    double bias[3] = {0.0, 0.0, 0.0};
};

struct AugmentRanges {
    Range blur_sigma{0.0, 2.0};
    Range gain{0.8, 1.2};
    Range bias{-20.0, 20.0};
};

AugmentParams sample_augment(std::uint64_t seed, const AugmentRanges& ranges = {});

/// Gaussian blur (normalized kernel, replicated borders) then per-channel
/// gain / bias, clamped to [0, 255].
Image augment(const Image& img, const AugmentParams& params);

struct GenerateConfig {
    StylePreset preset = StylePreset::simple;
    int size = 224;
    bool warp = false;
    bool artefacts = false;
    bool augment = false;
    PerspectiveParams perspective{};
    AugmentRanges augment_ranges{};
    StyleRanges style_ranges{};
};

struct SynSample {
    std::uint64_t seed = 0;  // per-sample seed
    int index = 0;
    ClockTime time;
    ClockStyle style;
    ArtefactSpec artefacts;
    Homography homography;  // pixel space; identity when fronto-parallel
    AugmentParams augment;
    Image canonical;  // fronto-parallel render with artefacts
    Image image;      // final sample
};

SynSample generate_sample(std::uint64_t seed, int index, const GenerateConfig& config);

/// Samples 0..n-1; each depends only on (seed, index), so `threads` changes
/// scheduling but never the output.
std::vector<SynSample> generate(std::uint64_t seed, int n, const GenerateConfig& config, int threads = 1);

struct TimelapseJitter {
    double max_shift = 0.0;  // px, uniform per frame and axis
    double max_bias = 0.0;   // gray levels, uniform per frame
};

struct Timelapse {
    std::vector<Image> frames;
    std::vector<TimeClass> nominal;    // round(start + rate * i) mod 720
    std::vector<TimeClass> displayed;  // what each frame actually shows
    std::vector<bool> outlier;
};

Timelapse generate_timelapse(std::uint64_t seed, const ClockStyle& style, TimeClass start, double rate,
                             int frames, double outlier_fraction = 0.0, const TimelapseJitter& jitter = {},
                             int size = 224);

nlohmann::json to_json(const ClockStyle& s);
nlohmann::json to_json(const ArtefactSpec& a);
nlohmann::json to_json(const AugmentParams& a);
nlohmann::json sample_metadata(const SynSample& s);

std::string to_string(StylePreset p);
StylePreset parse_preset(const std::string& s);

}  // namespace clockforge
