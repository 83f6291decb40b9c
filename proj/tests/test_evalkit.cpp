#include "clockforge/evalkit.hpp"
#include "clockforge/rng.hpp"
#include "eval_oracle.hpp"

#include <doctest.h>

#include <algorithm>

using namespace clockforge;

using testing::oracle;
using testing::oracle_correct;

TEST_CASE("minute_correct and overall_correct examples") {
    CHECK(minute_correct({1, 59}, {1, 0}));
    CHECK_FALSE(minute_correct({1, 30}, {1, 32}));
    CHECK(minute_correct({4, 4}, {4, 4}));
    CHECK(overall_correct(ClockTime(2, 59), ClockTime(3, 0)));
    CHECK_FALSE(overall_correct(ClockTime(3, 0), ClockTime(3, 2)));
    CHECK(overall_correct(ClockTime(11, 59), ClockTime(0, 0)));
}

TEST_CASE("overall_correct properties over all pairs") {
    for (int a = 0; a < 720; ++a) {
        for (int b = 0; b < 720; ++b) {
            const TimeClass p(a), t(b);
            const bool ok = overall_correct(p, t);
            REQUIRE(ok == overall_correct(t, p));
            REQUIRE(ok == oracle_correct(a, b));
            if (ok) REQUIRE(minute_correct(decode_class(p), decode_class(t)));
        }
    }
}

TEST_CASE("evaluate examples") {
    std::vector<LabeledPrediction> exact;
    for (int i = 0; i < 10; ++i) exact.push_back({TimeClass(i * 70), {TimeClass(i * 70)}});
    const EvalReport r = evaluate(exact);
    CHECK(r == EvalReport{10, 1, 1, 1, 1, 1});

    std::vector<LabeledPrediction> second;
    for (int i = 0; i < 10; ++i) second.push_back({TimeClass(i * 70), {TimeClass(i * 70 + 5), TimeClass(i * 70)}});
    const EvalReport s = evaluate(second);
    CHECK(s.top1 == 0.0);
    CHECK(s.top2 == 1.0);
    CHECK(s.top3 == 1.0);

    const EvalReport empty_list = evaluate(std::vector<LabeledPrediction>{{TimeClass(3), {}}});
    CHECK(empty_list == EvalReport{1, 0, 0, 0, 0, 0});

    CHECK_THROWS_AS(evaluate({}), EmptyDataset);
}

TEST_CASE("evaluate matches a brute-force recount") {
    Rng rng(2718);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<LabeledPrediction> items;
        const int n = static_cast<int>(rng.uniform_int(1, 40));
        for (int i = 0; i < n; ++i) {
            LabeledPrediction item;
            // Bias truths toward the 719/0 seam.
            item.truth = TimeClass(rng.bernoulli(0.2) ? (rng.bernoulli(0.5) ? 719 : 0)
                                                      : static_cast<int>(rng.uniform_int(0, 719)));
            const int k = static_cast<int>(rng.uniform_int(0, 3));
            while (static_cast<int>(item.candidates.size()) < k) {
                const int c = rng.bernoulli(0.6) ? (item.truth.index() + static_cast<int>(rng.uniform_int(-3, 3)) + 720) % 720
                                                 : static_cast<int>(rng.uniform_int(0, 719));
                if (std::find(item.candidates.begin(), item.candidates.end(), TimeClass(c)) == item.candidates.end())
                    item.candidates.push_back(TimeClass(c));
            }
            items.push_back(item);
        }
        const EvalReport r = evaluate(items);
        REQUIRE(r == oracle(items));
        REQUIRE(r.top1 <= r.top2);
        REQUIRE(r.top2 <= r.top3);

        std::vector<LabeledPrediction> shuffled(items.rbegin(), items.rend());
        REQUIRE(evaluate(shuffled) == r);
    }
}

TEST_CASE("report output") {
    const EvalReport r{4, 0.5, 0.75, 1.0, 0.5, 0.75};
    const auto j = to_json(r);
    CHECK(j["n"] == 4);
    CHECK(j["top2"] == 0.75);
    CHECK(format_table(r).find("75.00%") != std::string::npos);
}
