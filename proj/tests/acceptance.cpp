// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit status 1 if any fails.

#include "clockforge/cli.hpp"
#include "clockforge/dataio.hpp"
#include "clockforge/evalkit.hpp"
#include "clockforge/georeader.hpp"
#include "clockforge/homography.hpp"
#include "clockforge/pipeline.hpp"
#include "clockforge/synclock.hpp"
#include "clockforge/time.hpp"
#include "clockforge/uniformity.hpp"
#include "eval_oracle.hpp"
#include "planted.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>

using namespace clockforge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

int failures = 0;

void criterion(const char* id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = limit_seconds <= 0 || secs < limit_seconds;
    const bool pass = o.ok && in_time;
    failures += !pass;
    char timing[64];
    if (limit_seconds > 0) {
        std::snprintf(timing, sizeof timing, "%.2fs < %.0fs", secs, limit_seconds);
    } else {
        std::snprintf(timing, sizeof timing, "%.2fs", secs);
    }
    std::printf("[%s] %s %s: %s (%s)\n", pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), timing);
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome ac1() {
    int failed = 0;
    for (int c = 0; c < kMinutesPerCycle; ++c) {
        const TimeClass tc(c);
        const ClockTime t = decode_class(tc);
        failed += t.hour() != c / 60 || t.minute() != c % 60;
        failed += encode_time(t) != tc;
        failed += angles_to_time(hand_angles(t))[0] != tc;
    }
    return {failed == 0, fmt("720 classes, %d failures", failed)};
}

Outcome ac2() {
    const Homography id = normalize_to_unit_grid(Homography::identity(), 224.0);
    const bool exact = id.matrix() == Eigen::Matrix3d::Identity();

    Rng rng(20);
    double worst_comp = 0.0;
    for (int i = 0; i < 200; ++i) {
        const Homography a = unit_square_to_pixels(random_homography(rng.next()), 224, 224);
        const Homography b = unit_square_to_pixels(random_homography(rng.next()), 224, 224);
        const Homography lhs = normalize_to_unit_grid(a * b, 224.0);
        const Homography rhs = normalize_to_unit_grid(a, 224.0) * normalize_to_unit_grid(b, 224.0);
        worst_comp = std::max(worst_comp, (lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff());
    }

    // Band-limited renders (sigma 1 blur). Unblurred line art loses about
    // 7 dB to bilinear resampling alone, so it is reported but not gated.
    const ClockStyle style = sample_style(0, StylePreset::simple);
    double worst_psnr = 1e9, worst_sharp = 1e9;
    for (int i = 0; i < 50; ++i) {
        const Image sharp = render_clock(style, decode_class(TimeClass(static_cast<int>(rng.uniform_int(0, 719)))), 224);
        const Image img = augment(sharp, AugmentParams{1.0, {1, 1, 1}, {0, 0, 0}});
        const Homography h = unit_square_to_pixels(random_homography(rng.next(), {0.04, 5.0}), 224, 224);
        const Image back = warp_image(warp_image(img, h, 224, 224), h.inverse(), 224, 224);
        worst_psnr = std::min(worst_psnr, psnr(img, back, 40, 40, 184, 184));
        const Image sharp_back = warp_image(warp_image(sharp, h, 224, 224), h.inverse(), 224, 224);
        worst_sharp = std::min(worst_sharp, psnr(sharp, sharp_back, 40, 40, 184, 184));
    }
    return {exact && worst_comp < 1e-9 && worst_psnr >= 30.0,
            fmt("identity exact=%s, composition err %.2e, worst round-trip PSNR %.1f dB over 50 (unblurred %.1f dB)",
                exact ? "yes" : "no", worst_comp, worst_psnr, worst_sharp)};
}

Outcome ac3() {
    Rng rng(3);
    int good = 0, wraps = 0, backward = 0;
    for (int trial = 0; trial < 100; ++trial) {
        double slope = rng.uniform(-10.0, 10.0);
        double intercept = rng.uniform(0.0, 720.0);
        const int frames = static_cast<int>(rng.uniform_int(100, 500));
        if (trial == 0) slope = 0.9, intercept = 650.0;  // crosses 11:59 -> 0:00 early
        if (trial == 1) slope = -2.5, intercept = 30.0;  // runs backward through 0:00
        const auto p = testing::make_planted(rng, slope, intercept, frames, 0.3);
        wraps += std::floor((intercept + slope * (frames - 1)) / 720.0) != std::floor(intercept / 720.0);
        backward += slope < 0;
        const SawtoothFit fit = fit_sawtooth_ransac(PredictionSeries(p.entries), {10000, 3, rng.next()});
        bool all = std::abs(fit.slope - slope) < 0.05;
        for (std::size_t i = 0; i < p.inlier.size(); ++i) all = all && (!p.inlier[i] || fit.inlier_mask[i]);
        good += all;
    }
    return {good >= 95 && wraps > 0 && backward > 0,
            fmt("%d/100 recovered (need 95); %d wrap-crossing, %d backward", good, wraps, backward)};
}

SawtoothFit with_ratio(double slope, double ratio) {
    SawtoothFit f;
    f.slope = slope;
    f.inlier_ratio = ratio;
    f.inlier_mask.assign(100, true);
    return f;
}

Outcome ac4() {
    // frame_extent 99 turns slope into span: span = slope * 99.
    const double e = 99.0;
    const auto r69 = accept_video(with_ratio(1.0, 0.69), e);
    const auto r70 = accept_video(with_ratio(1.0, 0.70), e);
    const auto s99 = accept_video(with_ratio(9.9 / e, 1.0), e);
    const auto s10 = accept_video(with_ratio(10.0 / e, 1.0), e);
    const bool ok = !r69.accepted && r69.reasons == std::vector{RejectReason::low_inlier_ratio} && r70.accepted &&
                    !s99.accepted && s99.reasons == std::vector{RejectReason::span_too_small} && s10.accepted &&
                    kDefaultMargin == 3 && RansacParams{}.margin == 3 && AcceptanceThresholds{}.min_inlier_ratio == 0.7 &&
                    AcceptanceThresholds{}.min_span_minutes == 10.0;
    return {ok, fmt("ratio 0.69 %s, 0.70 %s, span 9.9 %s, 10.0 %s", r69.accepted ? "accepted" : "rejected",
                    r70.accepted ? "accepted" : "rejected", s99.accepted ? "accepted" : "rejected",
                    s10.accepted ? "accepted" : "rejected")};
}

Outcome ac5() {
    Rng rng(5);
    int rejected = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = testing::make_planted(rng, 0.0, 0.0, 200, 1.0);
        const PredictionSeries s(p.entries);
        const SawtoothFit fit = fit_sawtooth_ransac(s, {10000, 3, rng.next()});
        const auto d = accept_video(fit, s.frame_extent());
        rejected += !d.accepted && !d.reasons.empty() && d.reasons.front() == RejectReason::low_inlier_ratio;
    }
    return {rejected >= 99, fmt("%d/100 rejected for low_inlier_ratio (need 99)", rejected)};
}

Outcome ac6() {
    GenerateConfig cfg;
    cfg.preset = StylePreset::simple;
    int correct = 0;
    for (int i = 0; i < 200; ++i) {
        const SynSample s = generate_sample(6, i, cfg);
        const ReadResult r = read_time(s.image);
        correct += !r.empty() && overall_correct(r.top().time, encode_time(s.time));
    }
    return {correct >= 180, fmt("%d/200 correct within 1 min (need 180)", correct)};
}

Outcome ac7() {
    std::string detail;
    bool ok = true;
    // Jitter only, then with 10% of frames showing a random time.
    for (double outliers : {0.0, 0.1}) {
        DemoConfig cfg;
        cfg.outlier_fraction = outliers;
        const DemoResult r = run_demo(1, cfg);
        const double ratio = r.fit ? r.fit->inlier_ratio : 0.0;
        const bool this_ok = r.decision.accepted && r.calibrated_accuracy >= r.raw_accuracy &&
                             (ratio <= 0.75 || r.calibrated_accuracy >= 0.99);
        ok = ok && this_ok;
        detail += fmt("%soutliers %.0f%%: %s, inliers %.1f%%, raw %.1f%% -> calibrated %.1f%%", detail.empty() ? "" : "; ",
                      100 * outliers, r.decision.accepted ? "accepted" : "rejected", 100 * ratio, 100 * r.raw_accuracy,
                      100 * r.calibrated_accuracy);
    }
    return {ok, detail};
}

Outcome ac8() {
    Rng rng(8);
    int mismatches = 0, seam = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<LabeledPrediction> items;
        const int n = static_cast<int>(rng.uniform_int(1, 50));
        for (int i = 0; i < n; ++i) {
            LabeledPrediction item;
            item.truth = TimeClass(rng.bernoulli(0.2) ? (rng.bernoulli(0.5) ? 719 : 0)
                                                      : static_cast<int>(rng.uniform_int(0, 719)));
            seam += item.truth.index() == 0 || item.truth.index() == 719;
            const int k = static_cast<int>(rng.uniform_int(0, 3));
            while (static_cast<int>(item.candidates.size()) < k) {
                const int c = rng.bernoulli(0.6) ? positive_mod(item.truth.index() + rng.uniform_int(-2, 2), 720)
                                                 : static_cast<int>(rng.uniform_int(0, 719));
                if (std::find(item.candidates.begin(), item.candidates.end(), TimeClass(c)) == item.candidates.end())
                    item.candidates.push_back(TimeClass(c));
            }
            items.push_back(std::move(item));
        }
        const EvalReport r = evaluate(items);
        mismatches += !(r == testing::oracle(items)) || r.top1 > r.top2 || r.top2 > r.top3;
    }
    return {mismatches == 0, fmt("1000 sets, %d mismatches, %d truths on the 719/0 seam", mismatches, seam)};
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = read_file(e.path());
    return files;
}

Outcome ac9() {
    // Each pass runs every command into its own directory; the two passes
    // must agree byte for byte, stdout included.
    const fs::path base = fs::temp_directory_path() / "clockforge_acceptance";
    fs::remove_all(base);
    auto pass = [&](const std::string& tag) {
        const fs::path d = base / tag;
        fs::create_directories(d);
        std::ostringstream log;
        auto run = [&](std::vector<std::string> args) {
            args.insert(args.begin(), "clockforge");
            std::vector<const char*> argv;
            for (const auto& a : args) argv.push_back(a.c_str());
            std::ostringstream out, err;
            const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
            if (code != kExitOk) throw std::runtime_error(args[1] + " failed: " + err.str());
            // Paths differ between passes; strip them from stdout.
            std::string text = out.str();
            for (auto pos = text.find(d.string()); pos != std::string::npos; pos = text.find(d.string()))
                text.replace(pos, d.string().size(), "<dir>");
            log << "$ " << args[1] << "\n" << text;
        };
        const std::string D = d.string();
        run({"generate", "--n", "8", "--seed", "11", "--out", D + "/simple"});
        run({"generate", "--n", "8", "--seed", "11", "--preset", "full", "--warp", "--artefacts", "--augment", "--out",
             D + "/full", "--threads", "2"});
        run({"generate", "--timelapse", "--frames", "30", "--rate", "3", "--seed", "11", "--outlier-fraction", "0.1",
             "--jitter-shift", "2", "--jitter-bias", "8", "--out", D + "/tl"});
        run({"read", D + "/simple", "--out", D + "/simple_pred.csv"});
        run({"read", D + "/tl", "--out", D + "/tl_pred.csv", "--series", D + "/tl_series.csv"});
        run({"evaluate", "--labels", D + "/simple/labels.csv", "--predictions", D + "/simple_pred.csv", "--report",
             D + "/eval.json"});
        run({"calibrate", "--in", D + "/tl_series.csv", "--seed", "11", "--report", D + "/fit.json"});
        run({"plot", "--in", D + "/tl_series.csv", "--seed", "11", "--out", D + "/plot.svg"});
        run({"demo", "--seed", "1", "--frames", "60", "--plot", D + "/demo.svg"});
        auto files = snapshot(d);
        files["<stdout>"] = log.str();
        return files;
    };
    const auto a = pass("a");
    const auto b = pass("b");
    int differing = 0;
    for (const auto& [name, content] : a) {
        const auto it = b.find(name);
        differing += it == b.end() || it->second != content;
    }
    differing += static_cast<int>(b.size()) - static_cast<int>(a.size());
    fs::remove_all(base);
    return {differing == 0 && a.size() > 60, fmt("%zu outputs compared across re-runs, %d differ", a.size(), differing)};
}

}  // namespace

int main() {
    criterion("AC1", "time algebra exhaustive", 1, ac1);
    criterion("AC2", "homography conformance", 30, ac2);
    criterion("AC3", "cyclic RANSAC recovery", 60, ac3);
    criterion("AC4", "acceptance constants", 0, ac4);
    criterion("AC5", "pure-noise rejection", 60, ac5);
    criterion("AC6", "geometric reader on clean renders", 120, ac6);
    criterion("AC7", "end-to-end timelapse demo", 120, ac7);
    criterion("AC8", "metrics oracle", 0, ac8);
    criterion("AC9", "CLI determinism", 0, ac9);
    return failures == 0 ? 0 : 1;
}
