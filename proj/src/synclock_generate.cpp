#include "clockforge/synclock.hpp"

#include "clockforge/parallel.hpp"
#include "clockforge/rng.hpp"

#include <cmath>

namespace clockforge {

using nlohmann::json;

namespace {

// Independent streams inside one sample.
enum Stream : std::uint64_t { kStyle = 1, kTime, kArtefacts, kWarp, kAugment };

json rgb_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }

json point_json(const Eigen::Vector2d& p) { return json::array({p.x(), p.y()}); }

const char* hand_name(HandKind h) {
    switch (h) {
        case HandKind::hour: return "hour";
        case HandKind::minute: return "minute";
        case HandKind::second: return "second";
        case HandKind::alarm: return "alarm";
    }
    return "?";
}

}  // namespace

SynSample generate_sample(std::uint64_t seed, int index, const GenerateConfig& config) {
    SynSample s;
    s.index = index;
    s.seed = derive_seed(seed, static_cast<std::uint64_t>(index));
    s.style = sample_style(derive_seed(s.seed, kStyle), config.preset, config.style_ranges);

    Rng time_rng(derive_seed(s.seed, kTime));
    s.time = decode_class(TimeClass(static_cast<int>(time_rng.uniform_int(0, kMinutesPerCycle - 1))));

    s.canonical = render_clock(s.style, s.time, config.size);
    if (config.artefacts) {
        s.artefacts = sample_artefacts(derive_seed(s.seed, kArtefacts), s.style, s.time, config.size);
        s.canonical = apply_artefacts(s.canonical, s.artefacts);
    }
    s.image = s.canonical;
    if (config.warp) {
        s.homography = unit_square_to_pixels(random_homography(derive_seed(s.seed, kWarp), config.perspective),
                                             config.size, config.size);
        s.image = warp_image(s.canonical, s.homography, config.size, config.size, s.style.background);
    }
    if (config.augment) {
        s.augment = sample_augment(derive_seed(s.seed, kAugment), config.augment_ranges);
        s.image = augment(s.image, s.augment);
    }
    return s;
}

std::vector<SynSample> generate(std::uint64_t seed, int n, const GenerateConfig& config, int threads) {
    if (n < 1) throw std::invalid_argument("generate: n must be at least 1");
    std::vector<SynSample> out(static_cast<std::size_t>(n));
    parallel_for(n, threads, [&](int i) { out[static_cast<std::size_t>(i)] = generate_sample(seed, i, config); });
    return out;
}

Timelapse generate_timelapse(std::uint64_t seed, const ClockStyle& style, TimeClass start, double rate, int frames,
                             double outlier_fraction, const TimelapseJitter& jitter, int size) {
    if (!(rate > 0.0)) throw std::invalid_argument("timelapse rate must be positive");
    if (!(outlier_fraction >= 0.0 && outlier_fraction < 1.0)) {
        throw std::invalid_argument("outlier fraction must lie in [0, 1)");
    }
    if (frames < 1) throw std::invalid_argument("timelapse needs at least one frame");
    Timelapse t;
    Rng rng(seed);
    for (int i = 0; i < frames; ++i) {
        const TimeClass nominal(positive_mod(std::llround(start.index() + rate * i), kMinutesPerCycle));
        const bool outlier = outlier_fraction > 0.0 && rng.bernoulli(outlier_fraction);
        const TimeClass shown = outlier ? TimeClass(static_cast<int>(rng.uniform_int(0, kMinutesPerCycle - 1))) : nominal;
        const double dx = rng.uniform(-jitter.max_shift, jitter.max_shift);
        const double dy = rng.uniform(-jitter.max_shift, jitter.max_shift);
        const double bias = rng.uniform(-jitter.max_bias, jitter.max_bias);

        Image frame = render_clock(style, decode_class(shown), size);
        if (dx != 0.0 || dy != 0.0) {
            frame = warp_image(frame, Homography::translation(dx, dy), size, size, style.background);
        }
        if (bias != 0.0) {
            AugmentParams p;
            p.bias[0] = p.bias[1] = p.bias[2] = bias;
            frame = augment(frame, p);
        }
        t.frames.push_back(std::move(frame));
        t.nominal.push_back(nominal);
        t.displayed.push_back(shown);
        t.outlier.push_back(outlier);
    }
    return t;
}

json to_json(const ArtefactSpec& a) {
    json j = json::object();
    if (a.shadow) {
        const auto& s = *a.shadow;
        j["shadow"] = json{{"hand", hand_name(s.hand.kind)},
                           {"angle", s.hand.angle},
                           {"length", s.hand.length},
                           {"back_length", s.hand.back_length},
                           {"thickness", s.hand.thickness},
                           {"arrow", s.hand.arrow},
                           {"arrow_tip_length", s.hand.arrow_tip_length},
                           {"arrow_size", s.hand.arrow_size},
                           {"hand_color", rgb_json(s.hand.color)},
                           {"center", point_json(s.hand.center)},
                           {"offset", point_json(s.offset)},
                           {"opacity", s.opacity},
                           {"color", rgb_json(s.color)}};
    } else {
        j["shadow"] = nullptr;
    }
    json lines = json::array();
    for (const auto& l : a.lines) {
        lines.push_back(json{{"a", point_json(l.a)}, {"b", point_json(l.b)}, {"thickness", l.thickness},
                             {"color", rgb_json(l.color)}});
    }
    j["random_lines"] = lines;
    return j;
}

json to_json(const AugmentParams& a) {
    return json{{"blur_sigma", a.blur_sigma},
                {"gain", json::array({a.gain[0], a.gain[1], a.gain[2]})},
                {"bias", json::array({a.bias[0], a.bias[1], a.bias[2]})}};
}

json sample_metadata(const SynSample& s) {
    const auto h = s.homography.row_major();
    return json{{"format_version", "1.0.0"},
                {"index", s.index},
                {"seed", s.seed},
                {"hour", s.time.hour()},
                {"minute", s.time.minute()},
                {"class", encode_time(s.time).index()},
                {"style", to_json(s.style)},
                {"artefacts", to_json(s.artefacts)},
                {"augment", to_json(s.augment)},
                {"homography", json(std::vector<double>(h.begin(), h.end()))}};
}

}  // namespace clockforge
