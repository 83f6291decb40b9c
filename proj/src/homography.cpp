#include "clockforge/homography.hpp"

#include "clockforge/rng.hpp"

#include <cmath>

namespace clockforge {

Homography unit_square_to_pixels(const Homography& h, int width, int height) {
    Eigen::Matrix3d s = Eigen::Matrix3d::Identity();
    s(0, 0) = width;
    s(1, 1) = height;
    Eigen::Matrix3d s_inv = Eigen::Matrix3d::Identity();
    s_inv(0, 0) = 1.0 / width;
    s_inv(1, 1) = 1.0 / height;
    return Homography(Eigen::Matrix3d(s * h.matrix() * s_inv));
}

namespace {

double tap(const Image& src, int x, int y, int c, const Rgb& fill) {
    if (!src.contains(x, y)) {
        return c == 0 ? fill.r : (c == 1 ? fill.g : fill.b);
    }
    return src.at(x, y, c);
}

}  // namespace

Image warp_image(const Image& src, const Homography& h, int out_width, int out_height, Rgb fill) {
    const Homography inv = h.inverse();
    const Eigen::Matrix3d& m = inv.matrix();
    Image out(out_width, out_height, fill);
    for (int y = 0; y < out_height; ++y) {
        for (int x = 0; x < out_width; ++x) {
            const double px = x + 0.5;
            const double py = y + 0.5;
            const double den = m(2, 0) * px + m(2, 1) * py + m(2, 2);
            if (!(std::abs(den) >= Homography::kDenominatorEpsilon)) continue;
            // Continuous source position, shifted to pixel-index space.
            const double u = (m(0, 0) * px + m(0, 1) * py + m(0, 2)) / den - 0.5;
            const double v = (m(1, 0) * px + m(1, 1) * py + m(1, 2)) / den - 0.5;
            if (!std::isfinite(u) || !std::isfinite(v)) continue;
            if (u < -1.0 || v < -1.0 || u > src.width() || v > src.height()) continue;
            const int x0 = static_cast<int>(std::floor(u));
            const int y0 = static_cast<int>(std::floor(v));
            const double fx = u - x0;
            const double fy = v - y0;
            for (int c = 0; c < 3; ++c) {
                double value = (1.0 - fx) * (1.0 - fy) * tap(src, x0, y0, c, fill);
                if (fx != 0.0) value += fx * (1.0 - fy) * tap(src, x0 + 1, y0, c, fill);
                if (fy != 0.0) value += (1.0 - fx) * fy * tap(src, x0, y0 + 1, c, fill);
                if (fx != 0.0 && fy != 0.0) value += fx * fy * tap(src, x0 + 1, y0 + 1, c, fill);
                out.at(x, y, c) = clamp_to_byte(value);
            }
        }
    }
    return out;
}

namespace {

bool convex_and_well_conditioned(const std::array<Point2d, 4>& quad) {
    double sign = 0.0;
    for (int i = 0; i < 4; ++i) {
        const Point2d a = quad[(i + 1) % 4] - quad[i];
        const Point2d b = quad[(i + 2) % 4] - quad[(i + 1) % 4];
        const double cross = a.x() * b.y() - a.y() * b.x();
        if (std::abs(cross) < 1e-3) return false;
        if (sign == 0.0) sign = cross;
        if (cross * sign < 0.0) return false;
    }
    return true;
}

}  // namespace

Homography random_homography(std::uint64_t seed, const PerspectiveParams& params) {
    if (params.max_corner_shift < 0.0 || params.max_corner_shift >= 0.5 ||
        params.max_rotation_deg < 0.0 || params.max_rotation_deg > 180.0) {
        throw std::invalid_argument("perspective parameters out of range");
    }
    const std::array<Point2d, 4> square = {Point2d(0, 0), Point2d(1, 0), Point2d(1, 1), Point2d(0, 1)};
    Rng rng(seed);
    constexpr int kMaxAttempts = 100;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::array<Point2d, 4> moved = square;
        bool displaced = false;
        for (auto& corner : moved) {
            const double dx = rng.uniform(-params.max_corner_shift, params.max_corner_shift);
            const double dy = rng.uniform(-params.max_corner_shift, params.max_corner_shift);
            corner += Point2d(dx, dy);
            displaced = displaced || dx != 0.0 || dy != 0.0;
        }
        const double degrees = rng.uniform(-params.max_rotation_deg, params.max_rotation_deg);
        if (!convex_and_well_conditioned(moved)) continue;
        try {
            const Homography perspective = displaced ? solve_dlt(square, moved) : Homography::identity();
            const Homography h = Homography::rotation(degrees, Point2d(0.5, 0.5)) * perspective;
            std::array<Point2d, 4> image;
            for (int i = 0; i < 4; ++i) image[i] = warp_point(h, square[i]);
            if (!convex_and_well_conditioned(image)) continue;
            return h;
        } catch (const std::runtime_error&) {
            continue;
        }
    }
    throw std::runtime_error("random_homography: no well-conditioned sample in 100 attempts");
}

}  // namespace clockforge
