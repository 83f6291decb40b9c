#include "clockforge/uniformity.hpp"

#include "clockforge/dataio.hpp"
#include "clockforge/rng.hpp"

#include <cmath>
#include <cstdio>

namespace clockforge {

using nlohmann::json;

namespace {

constexpr double kPeriod = kMinutesPerCycle;
constexpr double kThresholdSlack = 1e-9;

// Difference folded into (-360, 360].
double wrapped_difference(double d) {
    d = std::fmod(d, kPeriod);
    if (d < 0.0) d += kPeriod;
    return d > kPeriod / 2 ? d - kPeriod : d;
}

double normalize_intercept(double c) {
    c = std::fmod(c, kPeriod);
    return c < 0.0 ? c + kPeriod : c;
}

int count_only(const PredictionSeries& s, double slope, double intercept, int margin) {
    int n = 0;
    for (const auto& e : s.entries()) n += circular_distance(e.prediction, sawtooth_value(slope, intercept, e.frame)) <= margin;
    return n;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

}  // namespace

PredictionSeries::PredictionSeries(std::vector<SeriesEntry> entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2) throw std::invalid_argument("a prediction series needs at least 2 entries");
    if (entries_.front().frame < 0) throw std::invalid_argument("frame indices must be non-negative");
    for (std::size_t i = 1; i < entries_.size(); ++i) {
        if (entries_[i].frame <= entries_[i - 1].frame) {
            throw std::invalid_argument("frame indices must be strictly increasing (frame " +
                                        std::to_string(entries_[i].frame) + ")");
        }
    }
}

TimeClass sawtooth_value(double slope, double intercept, int frame) noexcept {
    const double v = std::floor(intercept + slope * frame + 0.5);
    return TimeClass(static_cast<int>(v - kPeriod * std::floor(v / kPeriod)));
}

InlierCount count_inliers(const PredictionSeries& series, double slope, double intercept, int margin) {
    InlierCount out;
    out.mask.reserve(series.size());
    for (const auto& e : series.entries()) {
        const bool in = circular_distance(e.prediction, sawtooth_value(slope, intercept, e.frame)) <= margin;
        out.mask.push_back(in);
        out.count += in;
    }
    out.ratio = static_cast<double>(out.count) / static_cast<double>(series.size());
    return out;
}

InlierCount count_inliers(const PredictionSeries& series, const SawtoothFit& fit, int margin) {
    return count_inliers(series, fit.slope, fit.intercept, margin);
}

SawtoothFit fit_sawtooth_ransac(const PredictionSeries& series, const RansacParams& params) {
    if (params.margin < 0) throw std::invalid_argument("margin must be non-negative");
    const auto& e = series.entries();
    const auto n = static_cast<std::int64_t>(e.size());
    Rng rng(params.seed);

    int best_count = -1;
    double best_slope = 0.0, best_intercept = 0.0;
    int used = 0;
    for (int it = 0; it < params.iterations; ++it) {
        ++used;
        auto i = rng.uniform_int(0, n - 1);
        auto j = rng.uniform_int(0, n - 2);
        if (j >= i) ++j;
        if (j < i) std::swap(i, j);
        const auto& a = e[static_cast<std::size_t>(i)];
        const auto& b = e[static_cast<std::size_t>(j)];
        const double slope = wrapped_difference(b.prediction.index() - a.prediction.index()) / (b.frame - a.frame);
        const double intercept = a.prediction.index() - slope * a.frame;
        const int count = count_only(series, slope, intercept, params.margin);
        if (count > best_count || (count == best_count && std::abs(slope) < std::abs(best_slope))) {
            best_count = count;
            best_slope = slope;
            best_intercept = intercept;
        }
        if (best_count == n) break;
    }
    if (best_count < 2) throw FitFailed("no model is supported by two or more predictions");

    // Least squares on inliers lifted next to the winning line.
    const InlierCount base = count_inliers(series, best_slope, best_intercept, params.margin);
    double sf = 0, su = 0, sff = 0, sfu = 0;
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (!base.mask[k]) continue;
        const double model = best_intercept + best_slope * e[k].frame;
        const double u = model + wrapped_difference(e[k].prediction.index() - model);
        sf += e[k].frame;
        su += u;
        sff += static_cast<double>(e[k].frame) * e[k].frame;
        sfu += e[k].frame * u;
    }
    const double m = base.count;
    const double denom = m * sff - sf * sf;
    if (denom > 0.0) {
        const double slope = (m * sfu - sf * su) / denom;
        const double intercept = (su - slope * sf) / m;
        if (count_only(series, slope, intercept, params.margin) >= base.count) {
            best_slope = slope;
            best_intercept = intercept;
        }
    }

    SawtoothFit fit;
    fit.slope = best_slope;
    fit.intercept = normalize_intercept(best_intercept);
    const InlierCount final_count = count_inliers(series, fit.slope, fit.intercept, params.margin);
    fit.inlier_mask = final_count.mask;
    fit.inlier_ratio = final_count.ratio;
    fit.iterations_used = used;
    return fit;
}

std::string to_string(RejectReason r) {
    switch (r) {
        case RejectReason::low_inlier_ratio: return "low_inlier_ratio";
        case RejectReason::span_too_small: return "span_too_small";
        case RejectReason::fit_failed: return "fit_failed";
    }
    return "unknown";
}

AcceptanceDecision accept_video(const std::optional<SawtoothFit>& fit, int frame_extent,
                                const AcceptanceThresholds& thresholds) {
    AcceptanceDecision d;
    if (!fit) {
        d.reasons.push_back(RejectReason::fit_failed);
        return d;
    }
    if (fit->inlier_ratio < thresholds.min_inlier_ratio - kThresholdSlack) {
        d.reasons.push_back(RejectReason::low_inlier_ratio);
    }
    if (std::abs(fit->slope) * frame_extent < thresholds.min_span_minutes - kThresholdSlack) {
        d.reasons.push_back(RejectReason::span_too_small);
    }
    d.accepted = d.reasons.empty();
    return d;
}

PredictionSeries calibrate(const PredictionSeries& series, const SawtoothFit& fit) {
    std::vector<SeriesEntry> out;
    out.reserve(series.size());
    for (const auto& e : series.entries()) out.push_back({e.frame, sawtooth_value(fit, e.frame)});
    return PredictionSeries(std::move(out));
}

PredictionSeries parse_series(const std::string& text) {
    std::vector<SeriesEntry> entries;
    for (const auto& row : parse_csv(text, {"frame_index", "pred_class"})) {
        const int frame = parse_int(row.fields[0], row.line);
        const int cls = parse_int(row.fields[1], row.line);
        if (cls < 0 || cls >= kMinutesPerCycle) throw ParseError("class out of range", row.line);
        if (!entries.empty() && frame <= entries.back().frame) {
            throw ParseError("frame indices must be strictly increasing", row.line);
        }
        if (frame < 0) throw ParseError("negative frame index", row.line);
        entries.push_back({frame, TimeClass(cls)});
    }
    if (entries.size() < 2) throw ParseError("a prediction series needs at least 2 rows");
    return PredictionSeries(std::move(entries));
}

PredictionSeries load_series(const std::filesystem::path& path) {
    try {
        return parse_series(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    }
}

std::string format_series(const PredictionSeries& series) {
    std::string out = "frame_index,pred_class\n";
    for (const auto& e : series.entries()) {
        out += std::to_string(e.frame) + "," + std::to_string(e.prediction.index()) + "\n";
    }
    return out;
}

void save_series(const std::filesystem::path& path, const PredictionSeries& series) {
    write_file_atomic(path, format_series(series));
}

json fit_report(const std::optional<SawtoothFit>& fit, const AcceptanceDecision& decision, std::uint64_t seed) {
    json reasons = json::array();
    for (auto r : decision.reasons) reasons.push_back(to_string(r));
    json j{{"format_version", kFormatVersion},
           {"accepted", decision.accepted},
           {"reasons", reasons},
           {"seed", seed}};
    if (fit) {
        j["slope"] = fit->slope;
        j["intercept"] = fit->intercept;
        j["inlier_ratio"] = fit->inlier_ratio;
        j["iterations_used"] = fit->iterations_used;
    } else {
        j["slope"] = nullptr;
        j["intercept"] = nullptr;
        j["inlier_ratio"] = 0.0;
        j["iterations_used"] = nullptr;
    }
    return j;
}

std::string sawtooth_svg(const PredictionSeries& series, const std::optional<SawtoothFit>& fit, int width,
                         int height) {
    const double pad = 40.0;
    const double f0 = series.entries().front().frame;
    const double extent = std::max(1, series.frame_extent());
    auto sx = [&](double f) { return pad + (f - f0) / extent * (width - 2 * pad); };
    auto sy = [&](double v) { return height - pad - v / kPeriod * (height - 2 * pad); };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
                      "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<rect x=\"" + fmt(pad) + "\" y=\"" + fmt(pad) + "\" width=\"" + fmt(width - 2 * pad) + "\" height=\"" +
           fmt(height - 2 * pad) + "\" fill=\"none\" stroke=\"#888\"/>\n";
    for (int h = 0; h <= 12; h += 3) {
        svg += "<text x=\"4\" y=\"" + fmt(sy(h * 60.0) + 4) + "\" font-size=\"11\">" + std::to_string(h) +
               ":00</text>\n";
    }

    if (fit) {
        std::string points;
        double prev = -1.0;
        const int last = series.entries().back().frame;
        const double step = std::max(1.0, extent / 2000.0);
        auto flush = [&] {
            if (!points.empty()) svg += "<polyline fill=\"none\" stroke=\"#1f5fbf\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
            points.clear();
        };
        for (double f = f0; f <= last + 1e-9; f += step) {
            double v = fit->intercept + fit->slope * f;
            v -= kPeriod * std::floor(v / kPeriod);
            if (prev >= 0.0 && std::abs(v - prev) > kPeriod / 2) flush();
            points += fmt(sx(f)) + "," + fmt(sy(v)) + " ";
            prev = v;
        }
        flush();
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& e = series[k];
        const bool inlier = !fit || fit->inlier_mask[k];
        svg += "<circle cx=\"" + fmt(sx(e.frame)) + "\" cy=\"" + fmt(sy(e.prediction.index())) + "\" r=\"2.5\" fill=\"" +
               (inlier ? "#2a9d3a" : "#d62828") + "\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace clockforge
