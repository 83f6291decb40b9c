#pragma once

// Timelapse round trip: render, read every frame, fit the sawtooth and
// compare per-frame accuracy before and after calibration.

#include "clockforge/synclock.hpp"
#include "clockforge/uniformity.hpp"

#include <cstdint>
#include <optional>

namespace clockforge {

struct DemoConfig {
    int frames = 200;
    double rate = 3.0;  // minutes per frame
    double outlier_fraction = 0.1;
    TimelapseJitter jitter{2.0, 8.0};
    int size = 224;
    RansacParams ransac{};
    int threads = 0;
};

struct DemoResult {
    Timelapse timelapse;
    std::vector<std::optional<TimeClass>> raw;  // rank-1 per frame; empty when unread
    std::optional<SawtoothFit> fit;
    AcceptanceDecision decision;
    std::optional<PredictionSeries> series;
    double raw_accuracy = 0.0;
    double calibrated_accuracy = 0.0;  // equals raw_accuracy when rejected
};

/// Accuracy is against the nominal (uniformly flowing) time of each frame.
/// The RANSAC seed is derived from `seed` unless `config.ransac.seed` is set.
DemoResult run_demo(std::uint64_t seed, const DemoConfig& config = {});

}  // namespace clockforge
