#include "clockforge/cli.hpp"

#include "clockforge/dataio.hpp"
#include "clockforge/evalkit.hpp"
#include "clockforge/georeader.hpp"
#include "clockforge/parallel.hpp"
#include "clockforge/pipeline.hpp"
#include "clockforge/rng.hpp"
#include "clockforge/synclock.hpp"
#include "clockforge/uniformity.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>

namespace clockforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t resolve_seed(const CLI::Option* opt, std::uint64_t value) {
    if (opt->count() > 0) return value;
    if (const char* env = std::getenv("CLOCKFORGE_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw UsageError(std::string("CLOCKFORGE_SEED is not an unsigned integer: ") + env);
    }
    return 0;
}

std::string percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
    return buf;
}

std::optional<long long> numeric_stem(const fs::path& p) {
    const std::string s = p.stem().string();
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); })) return {};
    return std::stoll(s);
}

// PNGs under a file, a directory, or a dataset root with images/.
std::vector<fs::path> collect_images(const fs::path& input) {
    if (fs::is_regular_file(input)) return {input};
    if (!fs::is_directory(input)) throw ParseError("no such file or directory: " + input.string());
    const fs::path dir = fs::is_directory(input / "images") ? input / "images" : input;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
    }
    const bool numeric = std::all_of(files.begin(), files.end(), [](const auto& p) { return numeric_stem(p).has_value(); });
    std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) {
        if (numeric) return *numeric_stem(a) < *numeric_stem(b);
        return a.filename() < b.filename();
    });
    if (files.empty()) throw ParseError("no PNG images in " + dir.string());
    return files;
}

void write_text(const fs::path& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
    } else {
        write_file_atomic(path, text);
    }
}

struct GenerateArgs {
    int n = 0;
    std::uint64_t seed = 0;
    std::string preset = "simple";
    int size = 224;
    bool warp = false, artefacts = false, augment = false;
    std::string out;
    int threads = 0;
    std::string style_config;
    bool timelapse = false;
    int frames = 200;
    double rate = 3.0;
    int start = -1;
    double outlier_fraction = 0.0;
    double jitter_shift = 0.0, jitter_bias = 0.0;
};

int cmd_generate(const GenerateArgs& a, std::uint64_t seed, std::ostream& out) {
    const fs::path root(a.out);
    GenerateConfig cfg;
    cfg.preset = parse_preset(a.preset);
    cfg.size = a.size;
    cfg.warp = a.warp;
    cfg.artefacts = a.artefacts;
    cfg.augment = a.augment;
    if (!a.style_config.empty()) cfg.style_ranges = load_style_ranges(a.style_config);

    std::vector<LabelRow> labels;
    if (a.timelapse) {
        const ClockStyle style = sample_style(derive_seed(seed, 1), cfg.preset, cfg.style_ranges);
        Rng start_rng(derive_seed(seed, 2));
        const TimeClass start(a.start >= 0 ? a.start : static_cast<int>(start_rng.uniform_int(0, kMinutesPerCycle - 1)));
        const Timelapse t = generate_timelapse(derive_seed(seed, 3), style, start, a.rate, a.frames, a.outlier_fraction,
                                               {a.jitter_shift, a.jitter_bias}, a.size);
        std::vector<SeriesEntry> nominal;
        parallel_for(a.frames, a.threads, [&](int i) {
            write_png(root / "images" / (std::to_string(i) + ".png"), t.frames[static_cast<std::size_t>(i)]);
        });
        for (int i = 0; i < a.frames; ++i) {
            const auto k = static_cast<std::size_t>(i);
            labels.push_back({std::to_string(i) + ".png", decode_class(t.displayed[k])});
            nominal.push_back({i, t.nominal[k]});
            const json meta{{"format_version", kFormatVersion},
                            {"index", i},
                            {"nominal_class", t.nominal[k].index()},
                            {"displayed_class", t.displayed[k].index()},
                            {"outlier", static_cast<bool>(t.outlier[k])},
                            {"style", to_json(style)}};
            write_file_atomic(root / "meta" / (std::to_string(i) + ".json"), meta.dump(2) + "\n");
        }
        if (a.frames >= 2) save_series(root / "nominal.csv", PredictionSeries(std::move(nominal)));
    } else {
        labels.resize(static_cast<std::size_t>(a.n));
        parallel_for(a.n, a.threads, [&](int i) {
            const SynSample s = generate_sample(seed, i, cfg);
            const std::string name = std::to_string(i);
            write_png(root / "images" / (name + ".png"), s.image);
            write_file_atomic(root / "meta" / (name + ".json"), sample_metadata(s).dump(2) + "\n");
            labels[static_cast<std::size_t>(i)] = {name + ".png", s.time};
        });
    }
    save_labels(root / "labels.csv", labels);
    out << "wrote " << labels.size() << " images to " << root.string() << "\n";
    return kExitOk;
}

int cmd_read(const std::string& input, const std::string& out_path, const std::string& series_path, int threads,
             std::ostream& out) {
    const auto files = collect_images(input);
    std::vector<ReadResult> results(files.size());
    parallel_for(static_cast<int>(files.size()), threads, [&](int i) {
        const auto k = static_cast<std::size_t>(i);
        results[k] = read_time(read_png(files[k]));
    });

    std::vector<PredictionRow> rows;
    std::vector<SeriesEntry> series;
    for (std::size_t k = 0; k < files.size(); ++k) {
        const auto& c = results[k].candidates;
        for (std::size_t r = 0; r < c.size(); ++r) {
            rows.push_back({files[k].filename().string(), c[r].time, c[r].score, static_cast<int>(r + 1)});
        }
        if (!series_path.empty() && !c.empty()) {
            const auto stem = numeric_stem(files[k]);
            if (!stem) throw ParseError("--series needs numeric file names, got " + files[k].filename().string());
            series.push_back({static_cast<int>(*stem), c.front().time});
        }
    }
    write_text(out_path, format_predictions(rows), out);
    if (!series_path.empty()) {
        if (series.size() < 2) throw ParseError("fewer than two frames could be read");
        save_series(series_path, PredictionSeries(std::move(series)));
    }
    return kExitOk;
}

struct FitArgs {
    int iterations = 10000;
    int margin = kDefaultMargin;
    double min_ratio = 0.7;
    double min_span = 10.0;
};

std::optional<SawtoothFit> try_fit(const PredictionSeries& s, const FitArgs& a, std::uint64_t seed) {
    try {
        return fit_sawtooth_ransac(s, {a.iterations, a.margin, seed});
    } catch (const FitFailed&) {
        return std::nullopt;
    }
}

int cmd_calibrate(const std::string& in, std::string out_path, const std::string& report_path, const FitArgs& a,
                  std::uint64_t seed, std::ostream& out) {
    const PredictionSeries series = load_series(in);
    const auto fit = try_fit(series, a, seed);
    const AcceptanceDecision d = accept_video(fit, series.frame_extent(), {a.min_ratio, a.min_span});
    const std::string report = fit_report(fit, d, seed).dump(2) + "\n";
    if (!report_path.empty()) write_file_atomic(report_path, report);
    if (out_path.empty()) {
        fs::path p(in);
        out_path = (p.parent_path() / (p.stem().string() + ".calibrated.csv")).string();
    }
    if (d.accepted) {
        save_series(out_path, calibrate(series, *fit));
        out << "accepted: slope " << fit->slope << " min/frame, inliers " << percent(fit->inlier_ratio) << "; wrote "
            << out_path << "\n";
    } else {
        out << "rejected:";
        for (auto r : d.reasons) out << " " << to_string(r);
        out << "; no calibrated labels written\n";
    }
    if (report_path.empty()) out << report;
    return kExitOk;
}

int cmd_evaluate(const std::string& labels_path, const std::string& preds_path, const std::string& report_path,
                 std::ostream& out) {
    const auto labels = load_labels(labels_path);
    std::map<std::string, std::vector<TimeClass>> preds;
    for (const auto& p : load_predictions(preds_path)) preds[p.filename].push_back(p.pred);
    std::vector<LabeledPrediction> items;
    for (const auto& l : labels) {
        LabeledPrediction item{encode_time(l.time), {}};
        if (auto it = preds.find(l.filename); it != preds.end()) {
            item.candidates = it->second;
            preds.erase(it);
        }
        items.push_back(std::move(item));
    }
    if (!preds.empty()) throw ParseError("prediction for unlabeled file " + preds.begin()->first);
    const EvalReport r = evaluate(items);
    if (!report_path.empty()) write_file_atomic(report_path, to_json(r).dump(2) + "\n");
    out << format_table(r);
    return kExitOk;
}

int cmd_plot(const std::string& in, const std::string& out_path, bool no_fit, const FitArgs& a, std::uint64_t seed,
             std::ostream& out) {
    const PredictionSeries series = load_series(in);
    const auto fit = no_fit ? std::nullopt : try_fit(series, a, seed);
    write_text(out_path, sawtooth_svg(series, fit), out);
    return kExitOk;
}

int cmd_demo(const DemoConfig& cfg, std::uint64_t seed, const std::string& plot_path, std::ostream& out) {
    const DemoResult r = run_demo(seed, cfg);
    std::size_t unread = std::count(r.raw.begin(), r.raw.end(), std::nullopt);
    out << "frames          " << cfg.frames << " (rate " << cfg.rate << " min/frame, " << unread << " unread)\n";
    if (r.fit) {
        out << "fit             slope " << r.fit->slope << ", inliers " << percent(r.fit->inlier_ratio) << "\n";
    }
    out << "video           " << (r.decision.accepted ? "accepted" : "rejected");
    for (auto reason : r.decision.reasons) out << " " << to_string(reason);
    out << "\n";
    out << "raw accuracy    " << percent(r.raw_accuracy) << "\n";
    out << "calibrated      " << percent(r.calibrated_accuracy) << "\n";
    if (!plot_path.empty() && r.series) write_file_atomic(plot_path, sawtooth_svg(*r.series, r.fit));
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synthetic analog clock toolkit: generate, read, calibrate, evaluate, plot, demo"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    std::uint64_t seed_value = 0;
    auto add_seed = [&](CLI::App* sub) {
        return sub->add_option("--seed", seed_value, "Random seed (default: $CLOCKFORGE_SEED or 0)");
    };

    GenerateArgs g;
    auto* gen = app.add_subcommand("generate", "Render a labeled synthetic dataset or timelapse");
    gen->add_option("--n", g.n, "Number of images")->check(CLI::PositiveNumber);
    auto* gen_seed = add_seed(gen);
    gen->add_option("--preset", g.preset, "Style preset")->check(CLI::IsMember({"simple", "full"}));
    gen->add_option("--size", g.size, "Canvas side in pixels")->check(CLI::Range(16, 4096));
    gen->add_flag("--warp", g.warp, "Apply a random perspective warp");
    gen->add_flag("--artefacts", g.artefacts, "Add shadows and random lines");
    gen->add_flag("--augment", g.augment, "Blur and color jitter");
    gen->add_option("--out", g.out, "Output directory")->required();
    gen->add_option("--threads", g.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    gen->add_option("--style-config", g.style_config, "Style range JSON")->check(CLI::ExistingFile);
    gen->add_flag("--timelapse", g.timelapse, "Render one clock running at --rate");
    gen->add_option("--frames", g.frames, "Timelapse frames")->check(CLI::PositiveNumber);
    gen->add_option("--rate", g.rate, "Timelapse minutes per frame")->check(CLI::PositiveNumber);
    gen->add_option("--start", g.start, "Timelapse start class (default: random)")->check(CLI::Range(0, 719));
    gen->add_option("--outlier-fraction", g.outlier_fraction, "Timelapse frames showing a random time")
        ->check(CLI::Range(0.0, 0.99));
    gen->add_option("--jitter-shift", g.jitter_shift, "Timelapse max translation, px")->check(CLI::NonNegativeNumber);
    gen->add_option("--jitter-bias", g.jitter_bias, "Timelapse max brightness bias")->check(CLI::NonNegativeNumber);

    std::string read_in, read_out, read_series;
    int read_threads = 0;
    auto* rd = app.add_subcommand("read", "Read times with the geometric reader");
    rd->add_option("input", read_in, "PNG file, image directory or dataset root")->required()->check(CLI::ExistingPath);
    rd->add_option("--out", read_out, "Prediction CSV (default: stdout)");
    rd->add_option("--series", read_series, "Also write frame_index,pred_class from numeric file names");
    rd->add_option("--threads", read_threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    FitArgs fa;
    auto add_fit = [&](CLI::App* sub) {
        sub->add_option("--iterations", fa.iterations, "RANSAC iterations")->check(CLI::NonNegativeNumber);
        sub->add_option("--margin", fa.margin, "Inlier margin, minutes")->check(CLI::Range(0, 360));
    };
    std::string cal_in, cal_out, cal_report;
    auto* cal = app.add_subcommand("calibrate", "Fit a sawtooth to a prediction series and relabel it");
    cal->add_option("--in", cal_in, "Series CSV")->required()->check(CLI::ExistingFile);
    cal->add_option("--out", cal_out, "Calibrated CSV (default: <in>.calibrated.csv)");
    cal->add_option("--report", cal_report, "Fit report JSON (default: stdout)");
    cal->add_option("--min-ratio", fa.min_ratio, "Acceptance inlier ratio")->check(CLI::Range(0.0, 1.0));
    cal->add_option("--min-span", fa.min_span, "Acceptance span, minutes")->check(CLI::NonNegativeNumber);
    add_fit(cal);
    auto* cal_seed = add_seed(cal);

    std::string ev_labels, ev_preds, ev_report;
    auto* ev = app.add_subcommand("evaluate", "Score predictions against labels");
    ev->add_option("--labels", ev_labels, "filename,hour,minute CSV")->required()->check(CLI::ExistingFile);
    ev->add_option("--predictions", ev_preds, "filename,pred_class,score,rank CSV")->required()->check(CLI::ExistingFile);
    ev->add_option("--report", ev_report, "JSON report path");

    std::string plot_in, plot_out;
    bool no_fit = false;
    auto* pl = app.add_subcommand("plot", "SVG of a prediction series with its fitted sawtooth");
    pl->add_option("--in", plot_in, "Series CSV")->required()->check(CLI::ExistingFile);
    pl->add_option("--out", plot_out, "SVG path (default: stdout)");
    pl->add_flag("--no-fit", no_fit, "Plot predictions only");
    add_fit(pl);
    auto* plot_seed = add_seed(pl);

    DemoConfig dc;
    std::string demo_plot;
    auto* dm = app.add_subcommand("demo", "Timelapse round trip: generate, read, calibrate, score");
    auto* demo_seed = add_seed(dm);
    dm->add_option("--frames", dc.frames, "Frames")->check(CLI::Range(2, 100000));
    dm->add_option("--rate", dc.rate, "Minutes per frame")->check(CLI::PositiveNumber);
    dm->add_option("--outlier-fraction", dc.outlier_fraction, "Frames showing a random time")->check(CLI::Range(0.0, 0.99));
    dm->add_option("--plot", demo_plot, "Write an SVG of the fit");
    dm->add_option("--threads", dc.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto pick_threads = [&](int local) { return local > 0 ? local : threads; };
    try {
        if (gen->parsed()) {
            if (!g.timelapse && g.n <= 0) throw UsageError("generate needs --n (or --timelapse)");
            g.threads = pick_threads(g.threads);
            return cmd_generate(g, resolve_seed(gen_seed, seed_value), out);
        }
        if (rd->parsed()) return cmd_read(read_in, read_out, read_series, pick_threads(read_threads), out);
        if (cal->parsed()) return cmd_calibrate(cal_in, cal_out, cal_report, fa, resolve_seed(cal_seed, seed_value), out);
        if (ev->parsed()) return cmd_evaluate(ev_labels, ev_preds, ev_report, out);
        if (pl->parsed()) return cmd_plot(plot_in, plot_out, no_fit, fa, resolve_seed(plot_seed, seed_value), out);
        if (dm->parsed()) {
            dc.threads = pick_threads(dc.threads);
            return cmd_demo(dc, resolve_seed(demo_seed, seed_value), demo_plot, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace clockforge
