#pragma once

#include "clockforge/time.hpp"

#include <json.hpp>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace clockforge {

class EmptyDataset : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct LabeledPrediction {
    TimeClass truth;
    std::vector<TimeClass> candidates;  // ranked; empty when the reader failed
};

struct EvalReport {
    int n = 0;
    double top1 = 0.0;
    double top2 = 0.0;
    double top3 = 0.0;
    double hour_top1 = 0.0;
    double minute_top1 = 0.0;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Cyclic minute distance of at most one.
bool minute_correct(const ClockTime& pred, const ClockTime& truth) noexcept;

/// Class distance of at most one, so 2:59 vs 3:00 counts.
bool overall_correct(TimeClass pred, TimeClass truth) noexcept;
bool overall_correct(const ClockTime& pred, const ClockTime& truth) noexcept;

/// Hour accuracy uses strict equality of the rank-1 hour. Throws
/// EmptyDataset on no items.
EvalReport evaluate(std::span<const LabeledPrediction> items);

nlohmann::json to_json(const EvalReport& r);
std::string format_table(const EvalReport& r);

}  // namespace clockforge
