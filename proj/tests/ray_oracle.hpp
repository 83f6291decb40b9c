#pragma once

// Test-only hand direction measurement for simple-preset renders: sums
// darkness along rays in two radial bands. Independent of the georeader.

#include "clockforge/image.hpp"
#include "clockforge/time.hpp"

#include <cmath>
#include <vector>

namespace clockforge::testing {

struct RayReading {
    double hour_angle;
    double minute_angle;
};

inline double band_darkness(const ScalarMap& lum, double cx, double cy, double angle, double r0, double r1) {
    const double rad = angle * M_PI / 180.0;
    const double dx = std::sin(rad), dy = -std::cos(rad);
    double sum = 0.0;
    for (double r = r0; r <= r1; r += 0.5) {
        const int x = static_cast<int>(std::floor(cx + dx * r));
        const int y = static_cast<int>(std::floor(cy + dy * r));
        if (x < 0 || y < 0 || x >= lum.cols() || y >= lum.rows()) continue;
        sum += 255.0 - lum(y, x);
    }
    return sum;
}

// Weighted circular centroid of `profile` (0.25 deg bins) within +-window of `peak_deg`.
inline double centroid(const std::vector<double>& profile, double peak_deg, double window) {
    double sx = 0.0, sy = 0.0;
    const int n = static_cast<int>(profile.size());
    for (int i = 0; i < n; ++i) {
        const double a = i * 360.0 / n;
        if (std::abs(angle_difference(a, peak_deg)) > window) continue;
        sx += profile[i] * std::sin(a * M_PI / 180.0);
        sy += profile[i] * std::cos(a * M_PI / 180.0);
    }
    return wrap_degrees(std::atan2(sx, sy) * 180.0 / M_PI);
}

// `radius` is the face radius in pixels; the simple preset has hour hands
// at 0.5 R, minute hands at 0.78 R and numerals beyond 0.6 R.
inline RayReading read_rays(const Image& img, double radius) {
    const ScalarMap lum = luminance(img);
    const double cx = img.width() / 2.0, cy = img.height() / 2.0;
    const int n = 1440;
    std::vector<double> outer(n), inner(n);
    for (int i = 0; i < n; ++i) {
        const double a = i * 360.0 / n;
        outer[i] = band_darkness(lum, cx, cy, a, 0.52 * radius, 0.58 * radius);
        inner[i] = band_darkness(lum, cx, cy, a, 0.2 * radius, 0.45 * radius);
    }
    auto argmax = [&](const std::vector<double>& p) {
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (p[i] > p[best]) best = i;
        return best * 360.0 / n;
    };
    const double minute = centroid(outer, argmax(outer), 10.0);
    std::vector<double> masked = inner;
    double inner_max = 0.0;
    for (int i = 0; i < n; ++i) {
        inner_max = std::max(inner_max, inner[i]);
        if (std::abs(angle_difference(i * 360.0 / n, minute)) < 10.0) masked[i] = 0.0;
    }
    const double masked_peak = argmax(masked);
    const double masked_max = masked[static_cast<int>(std::lround(masked_peak * n / 360.0)) % n];
    const double hour = masked_max > 0.5 * inner_max ? centroid(masked, masked_peak, 8.0) : centroid(inner, minute, 12.0);
    return {hour, minute};
}

}  // namespace clockforge::testing
