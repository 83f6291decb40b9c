#pragma once

// Brute-force recount of evaluation metrics from hour/minute fields.

#include "clockforge/evalkit.hpp"

#include <cstdlib>
#include <vector>

namespace clockforge::testing {

// Recount from hour/minute fields, with the carry cases spelled out.
inline bool oracle_correct(int pc, int tc) {
    const int ph = pc / 60, pm = pc % 60, th = tc / 60, tm = tc % 60;
    if (ph == th && std::abs(pm - tm) <= 1) return true;
    if (tm == 0 && pm == 59 && ph == (th + 11) % 12) return true;
    if (tm == 59 && pm == 0 && ph == (th + 1) % 12) return true;
    return false;
}

inline EvalReport oracle(const std::vector<LabeledPrediction>& items) {
    double hits[3] = {0, 0, 0}, hour = 0, minute = 0;
    for (const auto& it : items) {
        for (int k = 0; k < 3; ++k) {
            bool any = false;
            for (int j = 0; j <= k && j < static_cast<int>(it.candidates.size()); ++j)
                any = any || oracle_correct(it.candidates[j].index(), it.truth.index());
            hits[k] += any;
        }
        if (!it.candidates.empty()) {
            const int p = it.candidates[0].index(), t = it.truth.index();
            hour += p / 60 == t / 60;
            const int d = std::abs(p % 60 - t % 60);
            minute += d <= 1 || d == 59;
        }
    }
    const double n = static_cast<double>(items.size());
    return {static_cast<int>(items.size()), hits[0] / n, hits[1] / n, hits[2] / n, hour / n, minute / n};
}

}  // namespace clockforge::testing
