#pragma once

// Cyclic RANSAC over per-frame time predictions: a line modulo 720 minutes.

#include "clockforge/time.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace clockforge {

class FitFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SeriesEntry {
    int frame = 0;
    TimeClass prediction;

    friend bool operator==(const SeriesEntry&, const SeriesEntry&) = default;
};

/// At least two entries with strictly increasing, non-negative frames.
class PredictionSeries {
public:
    explicit PredictionSeries(std::vector<SeriesEntry> entries);

    [[nodiscard]] const std::vector<SeriesEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] const SeriesEntry& operator[](std::size_t i) const { return entries_[i]; }
    [[nodiscard]] int frame_extent() const { return entries_.back().frame - entries_.front().frame; }

    friend bool operator==(const PredictionSeries&, const PredictionSeries&) = default;

private:
    std::vector<SeriesEntry> entries_;
};

struct SawtoothFit {
    double slope = 0.0;      // minutes per frame
    double intercept = 0.0;  // minutes, in [0, 720)
    std::vector<bool> inlier_mask;
    double inlier_ratio = 0.0;
    int iterations_used = 0;
};

/// floor(intercept + slope * frame + 1/2) mod 720.
TimeClass sawtooth_value(double slope, double intercept, int frame) noexcept;
inline TimeClass sawtooth_value(const SawtoothFit& fit, int frame) noexcept {
    return sawtooth_value(fit.slope, fit.intercept, frame);
}

inline constexpr int kDefaultMargin = 3;

struct InlierCount {
    std::vector<bool> mask;
    double ratio = 0.0;
    int count = 0;
};

/// Inlier iff the circular distance to the model is at most `margin`.
InlierCount count_inliers(const PredictionSeries& series, double slope, double intercept, int margin = kDefaultMargin);
InlierCount count_inliers(const PredictionSeries& series, const SawtoothFit& fit, int margin = kDefaultMargin);

struct RansacParams {
    int iterations = 10000;
    int margin = kDefaultMargin;
    std::uint64_t seed = 0;
};

/// Two-point candidates lifted into one period (smallest |slope|), best by
/// inlier count, then refined by least squares on the unwrapped inliers.
/// Stops early once every entry is an inlier. Throws FitFailed when fewer
/// than two entries support the best model.
SawtoothFit fit_sawtooth_ransac(const PredictionSeries& series, const RansacParams& params = {});

enum class RejectReason { low_inlier_ratio, span_too_small, fit_failed };

std::string to_string(RejectReason r);

struct AcceptanceThresholds {
    double min_inlier_ratio = 0.7;
    double min_span_minutes = 10.0;
};

struct AcceptanceDecision {
    bool accepted = false;
    std::vector<RejectReason> reasons;  // in enum order
};

/// `fit` empty means the fit failed. Span is |slope| * frame_extent.
AcceptanceDecision accept_video(const std::optional<SawtoothFit>& fit, int frame_extent,
                                const AcceptanceThresholds& thresholds = {});

/// Every prediction replaced by the model value at its frame.
PredictionSeries calibrate(const PredictionSeries& series, const SawtoothFit& fit);

// `frame_index,pred_class`
PredictionSeries parse_series(const std::string& text);
PredictionSeries load_series(const std::filesystem::path& path);
std::string format_series(const PredictionSeries& series);
void save_series(const std::filesystem::path& path, const PredictionSeries& series);

nlohmann::json fit_report(const std::optional<SawtoothFit>& fit, const AcceptanceDecision& decision,
                          std::uint64_t seed);

/// Scatter of predictions (inliers and outliers colored apart) with the
/// fitted sawtooth overlaid.
std::string sawtooth_svg(const PredictionSeries& series, const std::optional<SawtoothFit>& fit, int width = 800,
                         int height = 400);

}  // namespace clockforge
