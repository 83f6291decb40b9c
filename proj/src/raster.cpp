#include "clockforge/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace clockforge {

using Eigen::Vector2d;

namespace {

constexpr double kEarlyOut = 0.75;  // > half a pixel diagonal

Shape with_box(std::function<double(double, double)> f, double x0, double y0, double x1, double y1) {
    return Shape{std::move(f), x0, y0, x1, y1};
}

}  // namespace

double segment_distance(Vector2d p, Vector2d a, Vector2d b) {
    const Vector2d ab = b - a;
    const double len2 = ab.squaredNorm();
    double t = len2 > 0.0 ? (p - a).dot(ab) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

Shape disk(Vector2d c, double r) {
    return with_box([c, r](double x, double y) { return std::hypot(x - c.x(), y - c.y()) - r; },
                    c.x() - r, c.y() - r, c.x() + r, c.y() + r);
}

Shape ellipse(Vector2d c, double rx, double ry) {
    const double m = std::min(rx, ry);
    // Scaling by m / axis is 1-Lipschitz, so this bounds the true distance.
    return with_box(
        [c, rx, ry, m](double x, double y) { return (std::hypot((x - c.x()) / rx, (y - c.y()) / ry) - 1.0) * m; },
        c.x() - rx, c.y() - ry, c.x() + rx, c.y() + ry);
}

Shape rounded_box(Vector2d c, double hw, double hh, double cr) {
    cr = std::clamp(cr, 0.0, std::min(hw, hh));
    return with_box(
        [c, hw, hh, cr](double x, double y) {
            const double qx = std::abs(x - c.x()) - (hw - cr);
            const double qy = std::abs(y - c.y()) - (hh - cr);
            const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
            const double inside = std::min(std::max(qx, qy), 0.0);
            return outside + inside - cr;
        },
        c.x() - hw, c.y() - hh, c.x() + hw, c.y() + hh);
}

Shape capsule(Vector2d a, Vector2d b, double hw) {
    return with_box([a, b, hw](double x, double y) { return segment_distance({x, y}, a, b) - hw; },
                    std::min(a.x(), b.x()) - hw, std::min(a.y(), b.y()) - hw,
                    std::max(a.x(), b.x()) + hw, std::max(a.y(), b.y()) + hw);
}

Shape bar(Vector2d a, Vector2d b, double hw) {
    const Vector2d d = b - a;
    const double len = d.norm();
    if (len == 0.0) return capsule(a, b, hw);
    const Vector2d u = d / len;
    const Vector2d c = (a + b) / 2.0;
    const double hl = len / 2.0;
    const double ex = std::abs(u.x()) * hl + std::abs(u.y()) * hw;
    const double ey = std::abs(u.y()) * hl + std::abs(u.x()) * hw;
    return with_box(
        [c, u, hl, hw](double x, double y) {
            const double dx = x - c.x();
            const double dy = y - c.y();
            const double along = std::abs(dx * u.x() + dy * u.y()) - hl;
            const double across = std::abs(dx * -u.y() + dy * u.x()) - hw;
            const double outside = std::hypot(std::max(along, 0.0), std::max(across, 0.0));
            return outside + std::min(std::max(along, across), 0.0);
        },
        c.x() - ex, c.y() - ey, c.x() + ex, c.y() + ey);
}

Shape convex_polygon(std::vector<Vector2d> v) {
    // Orient counter-clockwise in y-down coordinates is irrelevant: normalize
    // so that interior is on the negative side of every edge function.
    double area = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Vector2d& p = v[i];
        const Vector2d& q = v[(i + 1) % v.size()];
        area += p.x() * q.y() - q.x() * p.y();
    }
    if (area < 0.0) std::reverse(v.begin(), v.end());
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    for (const auto& p : v) {
        x0 = std::min(x0, p.x());
        y0 = std::min(y0, p.y());
        x1 = std::max(x1, p.x());
        y1 = std::max(y1, p.y());
    }
    return with_box(
        [v](double x, double y) {
            // Max of half-plane distances: exact inside, a lower bound outside.
            double d = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < v.size(); ++i) {
                const Vector2d& p = v[i];
                const Vector2d& q = v[(i + 1) % v.size()];
                const Vector2d e = q - p;
                const double len = e.norm();
                if (len == 0.0) continue;
                // Outward normal for positive-area winding in this frame.
                const double s = (e.x() * (y - p.y()) - e.y() * (x - p.x())) / len;
                d = std::max(d, -s);
            }
            return d;
        },
        x0, y0, x1, y1);
}

Shape shape_union(std::vector<Shape> parts) {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    for (const auto& s : parts) {
        x0 = std::min(x0, s.min_x);
        y0 = std::min(y0, s.min_y);
        x1 = std::max(x1, s.max_x);
        y1 = std::max(y1, s.max_y);
    }
    return with_box(
        [parts = std::move(parts)](double x, double y) {
            double d = std::numeric_limits<double>::infinity();
            for (const auto& s : parts) {
                if (x < s.min_x - 2.0 || x > s.max_x + 2.0 || y < s.min_y - 2.0 || y > s.max_y + 2.0) {
                    // Outside the padded box the part is at least 2 px away.
                    d = std::min(d, 2.0);
                    continue;
                }
                d = std::min(d, s.distance(x, y));
            }
            return d;
        },
        x0, y0, x1, y1);
}

Shape inner_band(Shape outer, double t) {
    Shape s = outer;
    s.distance = [f = outer.distance, t](double x, double y) {
        const double d = f(x, y);
        return std::abs(d + t / 2.0) - t / 2.0;
    };
    return s;
}

Shape translated(Shape s, Vector2d o) {
    Shape out = s;
    out.distance = [f = s.distance, o](double x, double y) { return f(x - o.x(), y - o.y()); };
    out.min_x += o.x();
    out.max_x += o.x();
    out.min_y += o.y();
    out.max_y += o.y();
    return out;
}

double pixel_coverage(const Shape& s, int px, int py, Vector2d origin) {
    // Offsets are multiples of 1/8 so mirrored pixels give exactly negated
    // coordinates when the origin sits on a pixel corner.
    const double bx = px - origin.x();
    const double by = py - origin.y();
    const double d = s.distance(bx + 0.5, by + 0.5);
    if (d >= kEarlyOut) return 0.0;
    if (d <= -kEarlyOut) return 1.0;
    int inside = 0;
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
            if (s.distance(bx + (i + 0.5) / 4.0, by + (j + 0.5) / 4.0) <= 0.0) ++inside;
        }
    }
    return inside / 16.0;
}

Canvas::Canvas(int width, int height, Rgb bg, Vector2d origin)
    : width_(width), height_(height), origin_(origin), rgb_(static_cast<std::size_t>(width) * height * 3) {
    for (std::size_t i = 0; i < rgb_.size(); i += 3) {
        rgb_[i] = bg.r;
        rgb_[i + 1] = bg.g;
        rgb_[i + 2] = bg.b;
    }
}

namespace {

template <typename Blend>
void for_each_covered(const Shape& s, int width, int height, Vector2d origin, Blend&& blend) {
    const int x0 = std::max(0, static_cast<int>(std::floor(s.min_x + origin.x())) - 1);
    const int y0 = std::max(0, static_cast<int>(std::floor(s.min_y + origin.y())) - 1);
    const int x1 = std::min(width - 1, static_cast<int>(std::ceil(s.max_x + origin.x())) + 1);
    const int y1 = std::min(height - 1, static_cast<int>(std::ceil(s.max_y + origin.y())) + 1);
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            const double cov = pixel_coverage(s, x, y, origin);
            if (cov > 0.0) blend(x, y, cov);
        }
    }
}

}  // namespace

void Canvas::fill(const Shape& s, Rgb color, double opacity) {
    const double c[3] = {double(color.r), double(color.g), double(color.b)};
    for_each_covered(s, width_, height_, origin_, [&](int x, int y, double cov) {
        const double a = cov * opacity;
        double* p = &rgb_[(static_cast<std::size_t>(y) * width_ + x) * 3];
        for (int k = 0; k < 3; ++k) p[k] = a == 1.0 ? c[k] : p[k] * (1.0 - a) + c[k] * a;
    });
}

Image Canvas::to_image() const {
    Image img(width_, height_);
    auto& bytes = img.bytes();
    for (std::size_t i = 0; i < rgb_.size(); ++i) bytes[i] = clamp_to_byte(rgb_[i]);
    return img;
}

void fill_shape(Image& img, const Shape& s, Rgb color, Vector2d origin, double opacity) {
    const double c[3] = {double(color.r), double(color.g), double(color.b)};
    for_each_covered(s, img.width(), img.height(), origin, [&](int x, int y, double cov) {
        const double a = cov * opacity;
        for (int k = 0; k < 3; ++k) {
            img.at(x, y, k) = a == 1.0 ? static_cast<std::uint8_t>(c[k])
                                       : clamp_to_byte(img.at(x, y, k) * (1.0 - a) + c[k] * a);
        }
    });
}

void draw_hard_segment(Image& img, Vector2d a, Vector2d b, double thickness, Rgb color) {
    const double r = thickness / 2.0;
    const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x(), b.x()) - r - 1)));
    const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y(), b.y()) - r - 1)));
    const int x1 = std::min(img.width() - 1, static_cast<int>(std::ceil(std::max(a.x(), b.x()) + r + 1)));
    const int y1 = std::min(img.height() - 1, static_cast<int>(std::ceil(std::max(a.y(), b.y()) + r + 1)));
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            if (segment_distance({x + 0.5, y + 0.5}, a, b) <= r) img.set_pixel(x, y, color);
        }
    }
}

}  // namespace clockforge
