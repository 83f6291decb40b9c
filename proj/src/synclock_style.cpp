#include "clockforge/synclock.hpp"

#include "clockforge/rng.hpp"

#include <fstream>
#include <stdexcept>

namespace clockforge {

using nlohmann::json;

const HandStyle* ClockStyle::hand(HandKind kind) const {
    for (const auto& h : hands) {
        if (h.kind == kind) return &h;
    }
    return nullptr;
}

void validate(const ClockStyle& s) {
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid clock style: " + what); };
    if (s.face_size < 0.5 || s.face_size > 0.95) fail("face_size outside [0.5, 0.95]");
    if (s.face_aspect <= 0.0 || s.face_aspect > 1.0) fail("face_aspect outside (0, 1]");
    if (s.border_thickness < 0.0) fail("negative border thickness");
    if (s.tick_mode != TickMode::none && (s.tick_length <= 0.0 || s.tick_thickness <= 0.0)) {
        fail("tick length and thickness must be positive");
    }
    if (s.numerals != NumeralStyle::none && (s.font_size <= 0.0 || s.font_thickness <= 0.0)) {
        fail("font size and thickness must be positive");
    }
    int counts[4] = {0, 0, 0, 0};
    for (const auto& h : s.hands) {
        ++counts[static_cast<int>(h.kind)];
        if (h.length <= 0.0 || h.back_length < 0.0 || h.thickness <= 0.0) fail("hand dimensions must be positive");
        if (h.arrow && (h.arrow_tip_length <= 0.0 || h.arrow_size <= 0.0)) fail("arrow dimensions must be positive");
    }
    if (counts[0] != 1 || counts[1] != 1) fail("exactly one hour and one minute hand required");
    if (counts[2] > 1 || counts[3] > 1) fail("duplicate distractor hand");
    const double gap = s.hand(HandKind::minute)->length - s.hand(HandKind::hour)->length;
    if (gap < 0.1 - 1e-12) fail("minute hand must exceed the hour hand by 10% of the radius");
}

namespace {

double draw(Rng& rng, const Range& r) { return rng.uniform(r.lo, r.hi); }

Rgb random_color(Rng& rng) {
    return {static_cast<std::uint8_t>(rng.uniform_int(0, 255)), static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
            static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
}

ClockStyle simple_style() {
    ClockStyle s;
    HandStyle hour;
    hour.kind = HandKind::hour;
    hour.length = 0.5;
    hour.back_length = 0.1;
    hour.thickness = 6.0;
    HandStyle minute;
    minute.kind = HandKind::minute;
    minute.length = 0.78;
    minute.back_length = 0.12;
    minute.thickness = 4.0;
    s.hands = {hour, minute};
    return s;
}

void sample_arrow(Rng& rng, const StyleRanges& r, HandStyle& h) {
    h.arrow = rng.bernoulli(r.arrow_probability);
    h.arrow_tip_length = draw(rng, r.arrow_tip_length);
    h.arrow_size = std::max(draw(rng, r.arrow_size), h.thickness + 1.0);
}

ClockStyle full_style(Rng& rng, const StyleRanges& r) {
    ClockStyle s;
    s.background = random_color(rng);
    s.face_size = draw(rng, r.face_size);
    s.face_shape = static_cast<FaceShape>(rng.uniform_int(0, 2));
    s.face_aspect = s.face_shape == FaceShape::ellipse ? draw(rng, r.face_aspect) : 1.0;
    s.corner_radius = draw(rng, r.corner_radius);
    s.face_color = random_color(rng);
    s.border_thickness = draw(rng, r.border_thickness);
    s.border_color = random_color(rng);
    s.tick_mode = static_cast<TickMode>(rng.uniform_int(0, 2));
    s.tick_gap = draw(rng, r.tick_gap);
    s.tick_length = draw(rng, r.tick_length);
    s.tick_thickness = draw(rng, r.tick_thickness);
    s.tick_color = random_color(rng);
    s.numerals = static_cast<NumeralStyle>(rng.uniform_int(0, 2));
    s.numeral_gap = draw(rng, r.numeral_gap);
    s.font_size = draw(rng, r.font_size);
    s.font_thickness = draw(rng, r.font_thickness);
    s.numeral_color = random_color(rng);

    const double u = rng.uniform();
    const int hand_count = u < r.p_two_hands ? 2 : (u < r.p_two_hands + r.p_three_hands ? 3 : 4);

    HandStyle hour;
    hour.kind = HandKind::hour;
    hour.length = draw(rng, r.hour_length);
    hour.back_length = draw(rng, r.back_length);
    hour.thickness = draw(rng, r.hour_thickness);
    hour.color = random_color(rng);
    sample_arrow(rng, r, hour);

    HandStyle minute;
    minute.kind = HandKind::minute;
    minute.length = rng.uniform(std::max(r.minute_length.lo, hour.length + r.min_hand_gap), r.minute_length.hi);
    minute.back_length = draw(rng, r.back_length);
    minute.thickness = draw(rng, r.minute_thickness);
    minute.color = random_color(rng);
    sample_arrow(rng, r, minute);

    s.hands = {hour, minute};
    // Distractors stay thinner than both labeled hands.
    const double thin_cap = std::min(r.distractor_thickness.hi, 0.7 * std::min(hour.thickness, minute.thickness));
    for (int k = 2; k < hand_count; ++k) {
        HandStyle h;
        h.kind = k == 2 ? HandKind::second : HandKind::alarm;
        h.length = draw(rng, k == 2 ? r.second_length : r.alarm_length);
        h.back_length = draw(rng, r.back_length);
        h.thickness = rng.uniform(r.distractor_thickness.lo, std::max(r.distractor_thickness.lo, thin_cap));
        h.color = random_color(rng);
        h.arrow = false;
        h.angle = rng.uniform(0.0, 360.0);
        s.hands.push_back(h);
    }
    return s;
}

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }

Range range_from(const json& j, const char* key, const Range& fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2) throw std::invalid_argument(std::string("range '") + key + "' must be [lo, hi]");
    Range r{v[0].get<double>(), v[1].get<double>()};
    if (r.lo > r.hi) throw std::invalid_argument(std::string("range '") + key + "' has lo > hi");
    return r;
}

json rgb_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }

const char* name(FaceShape f) {
    switch (f) {
        case FaceShape::circle: return "circle";
        case FaceShape::rounded_square: return "rounded-square";
        case FaceShape::ellipse: return "ellipse";
    }
    return "?";
}

const char* name(TickMode t) {
    switch (t) {
        case TickMode::none: return "none";
        case TickMode::hour_only: return "hour-only";
        case TickMode::every_minute: return "every-minute";
    }
    return "?";
}

const char* name(NumeralStyle n) {
    switch (n) {
        case NumeralStyle::none: return "none";
        case NumeralStyle::arabic: return "arabic";
        case NumeralStyle::roman: return "roman";
    }
    return "?";
}

const char* name(HandKind h) {
    switch (h) {
        case HandKind::hour: return "hour";
        case HandKind::minute: return "minute";
        case HandKind::second: return "second";
        case HandKind::alarm: return "alarm";
    }
    return "?";
}

}  // namespace

ClockStyle sample_style(std::uint64_t seed, StylePreset preset, const StyleRanges& ranges) {
    if (preset == StylePreset::simple) return simple_style();
    Rng rng(seed);
    ClockStyle s = full_style(rng, ranges);
    validate(s);
    return s;
}

json to_json(const StyleRanges& r) {
    return json{{"format_version", r.format_version},
                {"face_size", range_json(r.face_size)},
                {"face_aspect", range_json(r.face_aspect)},
                {"corner_radius", range_json(r.corner_radius)},
                {"border_thickness", range_json(r.border_thickness)},
                {"tick_gap", range_json(r.tick_gap)},
                {"tick_length", range_json(r.tick_length)},
                {"tick_thickness", range_json(r.tick_thickness)},
                {"numeral_gap", range_json(r.numeral_gap)},
                {"font_size", range_json(r.font_size)},
                {"font_thickness", range_json(r.font_thickness)},
                {"hour_length", range_json(r.hour_length)},
                {"minute_length", range_json(r.minute_length)},
                {"second_length", range_json(r.second_length)},
                {"alarm_length", range_json(r.alarm_length)},
                {"back_length", range_json(r.back_length)},
                {"hour_thickness", range_json(r.hour_thickness)},
                {"minute_thickness", range_json(r.minute_thickness)},
                {"distractor_thickness", range_json(r.distractor_thickness)},
                {"arrow_tip_length", range_json(r.arrow_tip_length)},
                {"arrow_size", range_json(r.arrow_size)},
                {"arrow_probability", r.arrow_probability},
                {"min_hand_gap", r.min_hand_gap},
                {"p_two_hands", r.p_two_hands},
                {"p_three_hands", r.p_three_hands}};
}

StyleRanges style_ranges_from_json(const json& j) {
    StyleRanges d;
    StyleRanges r;
    r.format_version = j.value("format_version", d.format_version);
    if (r.format_version.rfind("1.", 0) != 0) {
        throw std::invalid_argument("unsupported style range format_version " + r.format_version);
    }
    r.face_size = range_from(j, "face_size", d.face_size);
    r.face_aspect = range_from(j, "face_aspect", d.face_aspect);
    r.corner_radius = range_from(j, "corner_radius", d.corner_radius);
    r.border_thickness = range_from(j, "border_thickness", d.border_thickness);
    r.tick_gap = range_from(j, "tick_gap", d.tick_gap);
    r.tick_length = range_from(j, "tick_length", d.tick_length);
    r.tick_thickness = range_from(j, "tick_thickness", d.tick_thickness);
    r.numeral_gap = range_from(j, "numeral_gap", d.numeral_gap);
    r.font_size = range_from(j, "font_size", d.font_size);
    r.font_thickness = range_from(j, "font_thickness", d.font_thickness);
    r.hour_length = range_from(j, "hour_length", d.hour_length);
    r.minute_length = range_from(j, "minute_length", d.minute_length);
    r.second_length = range_from(j, "second_length", d.second_length);
    r.alarm_length = range_from(j, "alarm_length", d.alarm_length);
    r.back_length = range_from(j, "back_length", d.back_length);
    r.hour_thickness = range_from(j, "hour_thickness", d.hour_thickness);
    r.minute_thickness = range_from(j, "minute_thickness", d.minute_thickness);
    r.distractor_thickness = range_from(j, "distractor_thickness", d.distractor_thickness);
    r.arrow_tip_length = range_from(j, "arrow_tip_length", d.arrow_tip_length);
    r.arrow_size = range_from(j, "arrow_size", d.arrow_size);
    r.arrow_probability = j.value("arrow_probability", d.arrow_probability);
    r.min_hand_gap = j.value("min_hand_gap", d.min_hand_gap);
    r.p_two_hands = j.value("p_two_hands", d.p_two_hands);
    r.p_three_hands = j.value("p_three_hands", d.p_three_hands);
    if (r.face_size.lo < 0.5 || r.face_size.hi > 0.95) throw std::invalid_argument("face_size range exceeds [0.5, 0.95]");
    if (r.min_hand_gap < 0.1) throw std::invalid_argument("min_hand_gap must be at least 0.1");
    if (r.hour_length.hi + r.min_hand_gap > r.minute_length.hi) {
        throw std::invalid_argument("minute_length range cannot clear the longest hour hand");
    }
    if (r.p_two_hands < 0 || r.p_three_hands < 0 || r.p_two_hands + r.p_three_hands > 1.0) {
        throw std::invalid_argument("hand-count probabilities must be a distribution");
    }
    return r;
}

StyleRanges load_style_ranges(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open style ranges: " + path.string());
    return style_ranges_from_json(json::parse(in));
}

json to_json(const ClockStyle& s) {
    json hands = json::array();
    for (const auto& h : s.hands) {
        hands.push_back(json{{"kind", name(h.kind)},
                             {"length", h.length},
                             {"back_length", h.back_length},
                             {"thickness", h.thickness},
                             {"color", rgb_json(h.color)},
                             {"arrow", h.arrow},
                             {"arrow_tip_length", h.arrow_tip_length},
                             {"arrow_size", h.arrow_size},
                             {"angle", h.angle}});
    }
    return json{{"background_color", rgb_json(s.background)},
                {"face_size", s.face_size},
                {"face_shape", name(s.face_shape)},
                {"face_aspect", s.face_aspect},
                {"corner_radius", s.corner_radius},
                {"face_color", rgb_json(s.face_color)},
                {"border_thickness", s.border_thickness},
                {"border_color", rgb_json(s.border_color)},
                {"tick_mode", name(s.tick_mode)},
                {"tick_gap", s.tick_gap},
                {"tick_length", s.tick_length},
                {"tick_thickness", s.tick_thickness},
                {"tick_color", rgb_json(s.tick_color)},
                {"numerals", name(s.numerals)},
                {"numeral_gap", s.numeral_gap},
                {"font_size", s.font_size},
                {"font_thickness", s.font_thickness},
                {"numeral_color", rgb_json(s.numeral_color)},
                {"hands", hands}};
}

std::string to_string(StylePreset p) { return p == StylePreset::simple ? "simple" : "full"; }

StylePreset parse_preset(const std::string& s) {
    if (s == "simple") return StylePreset::simple;
    if (s == "full") return StylePreset::full;
    throw std::invalid_argument("unknown preset '" + s + "' (expected simple or full)");
}

}  // namespace clockforge
