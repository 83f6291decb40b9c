#include "clockforge/pipeline.hpp"

#include "clockforge/evalkit.hpp"
#include "clockforge/georeader.hpp"
#include "clockforge/parallel.hpp"
#include "clockforge/rng.hpp"

namespace clockforge {

namespace {

enum Stream : std::uint64_t { kStart = 1, kFrames, kRansac };

}  // namespace

DemoResult run_demo(std::uint64_t seed, const DemoConfig& config) {
    DemoResult r;
    const ClockStyle style = sample_style(0, StylePreset::simple);
    Rng start_rng(derive_seed(seed, kStart));
    const TimeClass start(static_cast<int>(start_rng.uniform_int(0, kMinutesPerCycle - 1)));
    r.timelapse = generate_timelapse(derive_seed(seed, kFrames), style, start, config.rate, config.frames,
                                     config.outlier_fraction, config.jitter, config.size);

    r.raw.resize(static_cast<std::size_t>(config.frames));
    parallel_for(config.frames, config.threads, [&](int i) {
        const ReadResult read = read_time(r.timelapse.frames[static_cast<std::size_t>(i)]);
        if (!read.empty()) r.raw[static_cast<std::size_t>(i)] = read.top().time;
    });

    std::vector<SeriesEntry> entries;
    int raw_hits = 0;
    for (int i = 0; i < config.frames; ++i) {
        const auto& p = r.raw[static_cast<std::size_t>(i)];
        if (!p) continue;
        entries.push_back({i, *p});
        raw_hits += overall_correct(*p, r.timelapse.nominal[static_cast<std::size_t>(i)]);
    }
    r.raw_accuracy = static_cast<double>(raw_hits) / config.frames;
    r.calibrated_accuracy = r.raw_accuracy;

    if (entries.size() >= 2) {
        r.series = PredictionSeries(std::move(entries));
        RansacParams params = config.ransac;
        if (params.seed == 0) params.seed = derive_seed(seed, kRansac);
        try {
            r.fit = fit_sawtooth_ransac(*r.series, params);
        } catch (const FitFailed&) {
        }
        r.decision = accept_video(r.fit, r.series->frame_extent());
    } else {
        r.decision = accept_video(std::nullopt, 0);
    }

    if (r.decision.accepted) {
        int hits = 0;
        for (int i = 0; i < config.frames; ++i) {
            hits += overall_correct(sawtooth_value(*r.fit, i), r.timelapse.nominal[static_cast<std::size_t>(i)]);
        }
        r.calibrated_accuracy = static_cast<double>(hits) / config.frames;
    }
    return r;
}

}  // namespace clockforge
