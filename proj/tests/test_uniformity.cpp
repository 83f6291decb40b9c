#include "clockforge/dataio.hpp"
#include "clockforge/uniformity.hpp"
#include "planted.hpp"

#include <doctest.h>

using namespace clockforge;
using testing::make_planted;

namespace {

PredictionSeries series_of(const std::vector<int>& values) {
    std::vector<SeriesEntry> e;
    for (std::size_t i = 0; i < values.size(); ++i) e.push_back({static_cast<int>(i), TimeClass(values[i])});
    return PredictionSeries(std::move(e));
}

SawtoothFit model(double slope, double intercept, std::size_t n = 0, double ratio = 1.0) {
    SawtoothFit f;
    f.slope = slope;
    f.intercept = intercept;
    f.inlier_mask.assign(n, true);
    f.inlier_ratio = ratio;
    return f;
}

}  // namespace

TEST_CASE("sawtooth_value") {
    CHECK(sawtooth_value(1.0, 719.0, 1) == TimeClass(0));
    for (int f : {0, 7, 1000}) CHECK(sawtooth_value(0.0, 100.0, f) == TimeClass(100));
    CHECK(sawtooth_value(-2.0, 10.0, 6) == TimeClass(718));
    CHECK(sawtooth_value(3.0, 0.0, 240) == TimeClass(0));
}

TEST_CASE("count_inliers") {
    const PredictionSeries exact = series_of({10, 12, 14, 16});
    CHECK(count_inliers(exact, 2.0, 10.0).ratio == 1.0);

    const PredictionSeries edge = series_of({3, 717, 4, 719});
    const auto c = count_inliers(edge, 0.0, 0.0);
    CHECK(c.mask == std::vector<bool>{true, true, false, true});
    CHECK(c.count == 3);

    const PredictionSeries wrap = series_of({719, 1});
    CHECK(count_inliers(wrap, 0.0, 1.0).mask[0]);

    SUBCASE("monotone in margin") {
        Rng rng(4);
        const auto p = make_planted(rng, 2.5, 300, 150, 0.5);
        const PredictionSeries s(p.entries);
        int previous = -1;
        for (int m = 0; m <= 360; m += 3) {
            const int n = count_inliers(s, 2.5, 300, m).count;
            CHECK(n >= previous);
            previous = n;
        }
        CHECK(previous == 150);
    }
}

TEST_CASE("fit_sawtooth_ransac recovers planted models") {
    SUBCASE("slope 5, 20% outliers") {
        Rng rng(11);
        const auto p = make_planted(rng, 5.0, 100.0, 100, 0.2);
        const SawtoothFit fit = fit_sawtooth_ransac(PredictionSeries(p.entries), {10000, 3, 7});
        CHECK(std::abs(fit.slope - 5.0) < 0.05);
        for (std::size_t i = 0; i < p.inlier.size(); ++i)
            if (p.inlier[i]) CHECK(fit.inlier_mask[i]);
    }

    SUBCASE("static clock") {
        const SawtoothFit fit = fit_sawtooth_ransac(series_of(std::vector<int>(40, 333)));
        CHECK(fit.slope == 0.0);
        CHECK(fit.inlier_ratio == 1.0);
        CHECK(sawtooth_value(fit, 17) == TimeClass(333));
    }

    SUBCASE("wrap mid-series") {
        std::vector<int> v;
        for (int f = 0; f < 60; ++f) v.push_back((690 + f) % 720);
        const SawtoothFit fit = fit_sawtooth_ransac(series_of(v));
        CHECK(fit.inlier_ratio == 1.0);
        CHECK(fit.slope == doctest::Approx(1.0));
    }

    SUBCASE("backward clock") {
        Rng rng(3);
        const auto p = make_planted(rng, -4.0, 20.0, 200, 0.25);
        const SawtoothFit fit = fit_sawtooth_ransac(PredictionSeries(p.entries), {10000, 3, 1});
        CHECK(std::abs(fit.slope + 4.0) < 0.05);
        const PredictionSeries cal = calibrate(PredictionSeries(p.entries), fit);
        for (std::size_t i = 0; i < p.inlier.size(); ++i) {
            if (p.inlier[i]) CHECK(circular_distance(cal[i].prediction, p.entries[i].prediction) <= 1);
        }
    }

    SUBCASE("clean data spanning up to 12 periods") {
        for (int periods = 1; periods <= 12; ++periods) {
            Rng rng(static_cast<std::uint64_t>(periods));
            const double slope = periods * 720.0 / 300.0;
            const auto p = make_planted(rng, slope, 55.0, 300, 0.0);
            const SawtoothFit fit = fit_sawtooth_ransac(PredictionSeries(p.entries), {10000, 3, 99});
            CHECK(fit.inlier_ratio == 1.0);
            CHECK(std::abs(fit.slope - slope) < 0.05);
        }
    }

    SUBCASE("pure noise rarely looks uniform") {
        int low = 0;
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            Rng rng(seed + 1000);
            const auto p = make_planted(rng, 1.0, 0.0, 200, 1.0);
            low += fit_sawtooth_ransac(PredictionSeries(p.entries), {10000, 3, seed}).inlier_ratio < 0.2;
        }
        CHECK(low >= 99);
    }

    SUBCASE("zero iterations fail") {
        CHECK_THROWS_AS(fit_sawtooth_ransac(series_of({1, 2, 3}), {0, 3, 0}), FitFailed);
    }

    SUBCASE("deterministic per seed") {
        Rng rng(8);
        const auto p = make_planted(rng, 0.7, 400, 120, 0.4);
        const PredictionSeries s(p.entries);
        const auto a = fit_sawtooth_ransac(s, {500, 3, 5});
        const auto b = fit_sawtooth_ransac(s, {500, 3, 5});
        CHECK(a.slope == b.slope);
        CHECK(a.intercept == b.intercept);
        CHECK(a.inlier_mask == b.inlier_mask);
    }
}

TEST_CASE("fit properties") {
    Rng rng(21);
    const auto p = make_planted(rng, 3.3, 250.0, 180, 0.3);
    const PredictionSeries s(p.entries);
    const SawtoothFit base = fit_sawtooth_ransac(s, {10000, 3, 42});

    SUBCASE("shift equivariance") {
        for (int c : {1, 100, 359, 719}) {
            std::vector<SeriesEntry> shifted = p.entries;
            for (auto& e : shifted) e.prediction = TimeClass((e.prediction.index() + c) % 720);
            const SawtoothFit fit = fit_sawtooth_ransac(PredictionSeries(shifted), {10000, 3, 42});
            CHECK(fit.slope == doctest::Approx(base.slope).epsilon(1e-9));
            CHECK(fit.inlier_mask == base.inlier_mask);
            CHECK(fit.inlier_ratio == base.inlier_ratio);
            const double d = std::fmod(fit.intercept - base.intercept - c + 1440.0, 720.0);
            CHECK(std::min(d, 720.0 - d) < 1e-6);
        }
    }

    SUBCASE("frame reversal") {
        std::vector<SeriesEntry> reversed;
        const int last = p.entries.back().frame;
        for (auto it = p.entries.rbegin(); it != p.entries.rend(); ++it) reversed.push_back({last - it->frame, it->prediction});
        const SawtoothFit fit = fit_sawtooth_ransac(PredictionSeries(reversed), {10000, 3, 42});
        CHECK(fit.slope == doctest::Approx(-base.slope).epsilon(1e-6));
        CHECK(fit.inlier_ratio == base.inlier_ratio);
    }
}

TEST_CASE("accept_video") {
    CHECK(accept_video(model(2.0, 0, 100, 0.65), 99).reasons == std::vector{RejectReason::low_inlier_ratio});
    CHECK(accept_video(model(0.05, 0, 100, 1.0), 99).reasons == std::vector{RejectReason::span_too_small});
    CHECK(accept_video(model(5.0, 0, 101, 0.9), 100).accepted);
    CHECK(accept_video(model(0.1, 0, 10, 7.0 / 10.0), 100).accepted);
    CHECK(accept_video(model(0.099, 0, 10, 1.0), 100).reasons == std::vector{RejectReason::span_too_small});
    CHECK(accept_video(model(1.0, 0, 100, 0.69), 100).reasons == std::vector{RejectReason::low_inlier_ratio});
    const auto both = accept_video(model(0.01, 0, 100, 0.1), 100);
    CHECK_FALSE(both.accepted);
    CHECK(both.reasons == std::vector{RejectReason::low_inlier_ratio, RejectReason::span_too_small});
    const auto failed = accept_video(std::nullopt, 100);
    CHECK_FALSE(failed.accepted);
    CHECK(failed.reasons == std::vector{RejectReason::fit_failed});
}

TEST_CASE("calibrate") {
    const PredictionSeries exact = series_of({700, 705, 710, 715, 0, 5});
    const SawtoothFit fit = fit_sawtooth_ransac(exact);
    CHECK(calibrate(exact, fit) == exact);

    std::vector<int> v = {100, 102, 104, 106, 108, 110, 112};
    v[3] = 400;
    const PredictionSeries one = series_of(v);
    const SawtoothFit f = fit_sawtooth_ransac(one);
    const PredictionSeries cal = calibrate(one, f);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i == 3) {
            CHECK(cal[i].prediction == TimeClass(106));
        } else {
            CHECK(cal[i] == one[i]);
        }
    }
}

TEST_CASE("series files and reports") {
    const PredictionSeries s({{0, TimeClass(5)}, {3, TimeClass(719)}, {9, TimeClass(0)}});
    CHECK(parse_series(format_series(s)) == s);
    CHECK_THROWS_AS(parse_series("frame_index,pred_class\n0,1\n0,2\n"), ParseError);
    CHECK_THROWS_AS(parse_series("frame_index,pred_class\n0,720\n1,2\n"), ParseError);
    CHECK_THROWS_AS(parse_series("frame_index,pred_class\n0,1\n"), ParseError);
    CHECK_THROWS_AS(PredictionSeries({{2, TimeClass(0)}, {1, TimeClass(0)}}), std::invalid_argument);

    const SawtoothFit fit = fit_sawtooth_ransac(s);
    const auto report = fit_report(fit, accept_video(fit, s.frame_extent()), 5);
    CHECK(report["seed"] == 5);
    CHECK(report["format_version"] == "1.0.0");
    CHECK(report.contains("iterations_used"));
    const auto failed = fit_report(std::nullopt, accept_video(std::nullopt, 9), 5);
    CHECK(failed["reasons"] == nlohmann::json::array({"fit_failed"}));

    const std::string svg = sawtooth_svg(s, fit);
    CHECK(svg.find("<polyline") != std::string::npos);
    std::size_t circles = 0;
    for (auto pos = svg.find("<circle"); pos != std::string::npos; pos = svg.find("<circle", pos + 1)) ++circles;
    CHECK(circles == 3);
}
