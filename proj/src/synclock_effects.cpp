#include "clockforge/synclock.hpp"

#include "clockforge/rng.hpp"
#include "synclock_internal.hpp"

#include <cmath>
#include <stdexcept>

namespace clockforge {

using Eigen::Vector2d;

void validate(const ArtefactSpec& spec, int width, int height) {
    if (spec.shadow) {
        const double a = spec.shadow->opacity;
        if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("shadow opacity must lie in (0, 1]");
        if (spec.shadow->hand.length <= 0.0) throw std::invalid_argument("shadow hand has no length");
    }
    if (spec.lines.size() > 5) throw std::invalid_argument("at most 5 random lines");
    auto inside = [&](const Vector2d& p) {
        return p.x() >= -0.25 * width && p.x() <= 1.25 * width && p.y() >= -0.25 * height && p.y() <= 1.25 * height;
    };
    for (const auto& l : spec.lines) {
        if (!inside(l.a) || !inside(l.b)) throw std::invalid_argument("line endpoint outside 1.5x canvas bounds");
        if (l.thickness <= 0.0) throw std::invalid_argument("line thickness must be positive");
    }
}

ArtefactSpec sample_artefacts(std::uint64_t seed, const ClockStyle& style, const ClockTime& time, int size) {
    Rng rng(seed);
    const double k = size / kReferenceCanvas;
    ArtefactSpec spec;
    if (rng.bernoulli(0.5)) {
        const auto hands = hand_geometry(style, time, size);
        ShadowSpec shadow;
        shadow.hand = hands[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(hands.size()) - 1))];
        const double dist = rng.uniform(2.0, 6.0) * k;
        const double dir = rng.uniform(0.0, 2.0 * M_PI);
        shadow.offset = Vector2d(dist * std::cos(dir), dist * std::sin(dir));
        shadow.opacity = rng.uniform(0.2, 0.7);
        const auto gray = static_cast<std::uint8_t>(rng.uniform_int(0, 60));
        shadow.color = Rgb{gray, gray, gray};
        spec.shadow = shadow;
    }
    const int count = static_cast<int>(rng.uniform_int(0, 5));
    for (int i = 0; i < count; ++i) {
        LineArtefact l;
        l.a = Vector2d(rng.uniform(-0.25, 1.25) * size, rng.uniform(-0.25, 1.25) * size);
        l.b = Vector2d(rng.uniform(-0.25, 1.25) * size, rng.uniform(-0.25, 1.25) * size);
        l.thickness = rng.uniform(1.0, 4.0) * k;
        l.color = Rgb{static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                      static_cast<std::uint8_t>(rng.uniform_int(0, 255)),
                      static_cast<std::uint8_t>(rng.uniform_int(0, 255))};
        spec.lines.push_back(l);
    }
    return spec;
}

Image apply_artefacts(const Image& img, const ArtefactSpec& spec) {
    validate(spec, img.width(), img.height());
    Image out = img;
    if (spec.shadow) {
        const Vector2d origin(0.0, 0.0);
        const ShadowSpec& s = *spec.shadow;
        const Shape silhouette = detail::hand_shape(s.hand, origin);
        fill_shape(out, translated(silhouette, s.offset), s.color, origin, s.opacity);
        // The shadow falls beside the hand, never over it.
        fill_shape(out, silhouette, s.hand.color, origin);
    }
    for (const auto& l : spec.lines) draw_hard_segment(out, l.a, l.b, l.thickness, l.color);
    return out;
}

AugmentParams sample_augment(std::uint64_t seed, const AugmentRanges& ranges) {
    Rng rng(seed);
    AugmentParams p;
    p.blur_sigma = rng.uniform(ranges.blur_sigma.lo, ranges.blur_sigma.hi);
    for (double& g : p.gain) g = rng.uniform(ranges.gain.lo, ranges.gain.hi);
    for (double& b : p.bias) b = rng.uniform(ranges.bias.lo, ranges.bias.hi);
    return p;
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        k[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += k[i + radius];
    }
    for (double& v : k) v /= sum;
    return k;
}

}  // namespace

Image augment(const Image& img, const AugmentParams& p) {
    const int w = img.width(), h = img.height();
    std::vector<double> buf(img.bytes().begin(), img.bytes().end());
    if (p.blur_sigma > 1e-6) {
        const auto k = gaussian_kernel(p.blur_sigma);
        const int r = static_cast<int>(k.size() / 2);
        std::vector<double> tmp(buf.size());
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < 3; ++c) {
                    double acc = 0.0;
                    for (int i = -r; i <= r; ++i) {
                        const int xx = std::clamp(x + i, 0, w - 1);
                        acc += k[i + r] * buf[(static_cast<std::size_t>(y) * w + xx) * 3 + c];
                    }
                    tmp[(static_cast<std::size_t>(y) * w + x) * 3 + c] = acc;
                }
            }
        }
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                for (int c = 0; c < 3; ++c) {
                    double acc = 0.0;
                    for (int i = -r; i <= r; ++i) {
                        const int yy = std::clamp(y + i, 0, h - 1);
                        acc += k[i + r] * tmp[(static_cast<std::size_t>(yy) * w + x) * 3 + c];
                    }
                    buf[(static_cast<std::size_t>(y) * w + x) * 3 + c] = acc;
                }
            }
        }
    }
    Image out(w, h);
    auto& bytes = out.bytes();
    for (std::size_t i = 0; i < buf.size(); ++i) {
        const int c = static_cast<int>(i % 3);
        bytes[i] = clamp_to_byte(p.gain[c] * buf[i] + p.bias[c]);
    }
    return out;
}

}  // namespace clockforge
