#include "clockforge/evalkit.hpp"

#include "clockforge/dataio.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>

namespace clockforge {

bool minute_correct(const ClockTime& pred, const ClockTime& truth) noexcept {
    const int d = std::abs(pred.minute() - truth.minute());
    return std::min(d, 60 - d) <= 1;
}

bool overall_correct(TimeClass pred, TimeClass truth) noexcept { return circular_distance(pred, truth) <= 1; }

bool overall_correct(const ClockTime& pred, const ClockTime& truth) noexcept {
    return overall_correct(encode_time(pred), encode_time(truth));
}

EvalReport evaluate(std::span<const LabeledPrediction> items) {
    if (items.empty()) throw EmptyDataset("evaluate needs at least one item");
    std::array<long, 3> topk{};
    long hour = 0, minute = 0;
    for (const auto& item : items) {
        int first_hit = -1;
        for (std::size_t k = 0; k < item.candidates.size() && k < 3; ++k) {
            if (overall_correct(item.candidates[k], item.truth)) {
                first_hit = static_cast<int>(k);
                break;
            }
        }
        if (first_hit >= 0) {
            for (int k = first_hit; k < 3; ++k) ++topk[static_cast<std::size_t>(k)];
        }
        if (!item.candidates.empty()) {
            const ClockTime p = decode_class(item.candidates.front());
            const ClockTime t = decode_class(item.truth);
            hour += p.hour() == t.hour();
            minute += minute_correct(p, t);
        }
    }
    const double n = static_cast<double>(items.size());
    return {static_cast<int>(items.size()), topk[0] / n, topk[1] / n, topk[2] / n, hour / n, minute / n};
}

nlohmann::json to_json(const EvalReport& r) {
    return {{"format_version", kFormatVersion},
            {"n", r.n},
            {"top1", r.top1},
            {"top2", r.top2},
            {"top3", r.top3},
            {"hour_top1", r.hour_top1},
            {"minute_top1", r.minute_top1}};
}

std::string format_table(const EvalReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "items     %d\n"
                  "top-1     %6.2f%%\n"
                  "top-2     %6.2f%%\n"
                  "top-3     %6.2f%%\n"
                  "hour-1    %6.2f%%\n"
                  "minute-1  %6.2f%%\n",
                  r.n, 100 * r.top1, 100 * r.top2, 100 * r.top3, 100 * r.hour_top1, 100 * r.minute_top1);
    return buf;
}

}  // namespace clockforge
