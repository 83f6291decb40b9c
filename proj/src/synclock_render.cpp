#include "clockforge/synclock.hpp"

#include "stroke_font.hpp"
#include "synclock_internal.hpp"

#include <cmath>
#include <string>

namespace clockforge {

using Eigen::Vector2d;

namespace detail {

Vector2d clock_direction(double degrees) {
    double t = wrap_degrees(degrees);
    if (t > 180.0) t -= 360.0;
    // Fold into [0, 45] so quadrant angles come out exact.
    double a = std::abs(t);
    const bool back = a > 90.0;
    if (back) a = 180.0 - a;
    const bool steep = a > 45.0;
    if (steep) a = 90.0 - a;
    double s = std::sin(a * (M_PI / 180.0));
    double c = std::cos(a * (M_PI / 180.0));
    if (steep) std::swap(s, c);
    if (back) c = -c;
    return {t < 0.0 ? -s : s, -c};
}

Shape hand_shape(const HandGeometry& h, Vector2d origin) {
    const Vector2d pivot = h.center - origin;
    const Vector2d d = clock_direction(h.angle);
    const Vector2d tail = pivot - d * h.back_length;
    const double hw = h.thickness / 2.0;
    if (!h.arrow || h.arrow_tip_length >= h.length) {
        return bar(tail, pivot + d * h.length, hw);
    }
    const Vector2d base = pivot + d * (h.length - h.arrow_tip_length);
    const Vector2d n(-d.y(), d.x());
    const double head = h.arrow_size / 2.0;
    return shape_union({bar(tail, base, hw),
                        convex_polygon({base + n * head, pivot + d * h.length, base - n * head})});
}

}  // namespace detail

namespace {

struct FaceGeometry {
    Shape outline;
    double radius;       // half width of the face
    double hand_radius;  // reference radius for hand lengths
};

FaceGeometry face_geometry(const ClockStyle& s, int size) {
    const double r = s.face_size * size / 2.0;
    const Vector2d c(0.0, 0.0);
    switch (s.face_shape) {
        case FaceShape::rounded_square:
            return {rounded_box(c, r, r, s.corner_radius * r), r, r};
        case FaceShape::ellipse:
            return {ellipse(c, r, r * s.face_aspect), r, r * s.face_aspect};
        case FaceShape::circle:
        default:
            return {disk(c, r), r, r};
    }
}

// Distance from the center to the face outline along direction d.
double boundary_radius(const Shape& outline, Vector2d d, double max_r) {
    double lo = 0.0, hi = max_r;
    for (int i = 0; i < 48; ++i) {
        const double mid = 0.5 * (lo + hi);
        const Vector2d p = d * mid;
        if (outline.distance(p.x(), p.y()) <= 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

std::string numeral_text(int hour, NumeralStyle style) {
    if (style == NumeralStyle::arabic) return std::to_string(hour);
    static const char* roman[] = {"XII", "I", "II", "III", "IV", "V", "VI", "VII", "VIII", "IX", "X", "XI", "XII"};
    return roman[hour];
}

Shape text_shape(const std::string& text, Vector2d center, double height, double stroke) {
    const double width = font::text_width(text) * height;
    double x = center.x() - width / 2.0;
    const double y = center.y() - height / 2.0;
    std::vector<Shape> parts;
    for (char ch : text) {
        const auto& g = font::glyph(ch);
        for (const auto& poly : g.strokes) {
            for (std::size_t i = 0; i + 1 < poly.size(); ++i) {
                const Vector2d a(x + poly[i].x() * height, y + poly[i].y() * height);
                const Vector2d b(x + poly[i + 1].x() * height, y + poly[i + 1].y() * height);
                parts.push_back(capsule(a, b, stroke / 2.0));
            }
        }
        x += (g.width + font::kSpacing) * height;
    }
    return shape_union(std::move(parts));
}

int draw_order(HandKind k) {
    switch (k) {
        case HandKind::alarm: return 0;
        case HandKind::hour: return 1;
        case HandKind::minute: return 2;
        case HandKind::second: return 3;
    }
    return 4;
}

}  // namespace

std::vector<HandGeometry> hand_geometry(const ClockStyle& style, const ClockTime& time, int size) {
    const double k = size / kReferenceCanvas;
    const FaceGeometry face = face_geometry(style, size);
    const HandAngles angles = hand_angles(time);
    std::vector<HandGeometry> out;
    for (const auto& h : style.hands) {
        HandGeometry g;
        g.kind = h.kind;
        g.angle = h.kind == HandKind::hour ? angles.hour_angle
                  : h.kind == HandKind::minute ? angles.minute_angle
                                               : wrap_degrees(h.angle);
        g.length = h.length * face.hand_radius;
        g.back_length = h.back_length * face.hand_radius;
        g.thickness = h.thickness * k;
        g.arrow = h.arrow;
        g.arrow_tip_length = h.arrow_tip_length * k;
        g.arrow_size = h.arrow_size * k;
        g.color = h.color;
        g.center = Vector2d(size / 2.0, size / 2.0);
        out.push_back(g);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const HandGeometry& a, const HandGeometry& b) { return draw_order(a.kind) < draw_order(b.kind); });
    return out;
}

Image render_clock(const ClockStyle& style, const ClockTime& time, int size) {
    validate(style);
    if (size < 16) throw std::invalid_argument("render size must be at least 16 px");
    const double k = size / kReferenceCanvas;
    const Vector2d origin(size / 2.0, size / 2.0);
    Canvas canvas(size, size, style.background, origin);

    const FaceGeometry face = face_geometry(style, size);
    canvas.fill(face.outline, style.face_color);
    const double border = style.border_thickness * k;
    if (border > 0.0) canvas.fill(inner_band(face.outline, border), style.border_color);

    if (style.tick_mode != TickMode::none) {
        const bool every = style.tick_mode == TickMode::every_minute;
        for (int m = 0; m < 60; ++m) {
            const bool on_hour = m % 5 == 0;
            if (!every && !on_hour) continue;
            const Vector2d d = detail::clock_direction(6.0 * m);
            const double outer = boundary_radius(face.outline, d, 1.5 * face.radius) - border - style.tick_gap * k;
            const double len = style.tick_length * k * (every && on_hour ? 2.0 : 1.0);
            const double thick = style.tick_thickness * k * (every && on_hour ? 1.5 : 1.0);
            if (outer - len <= 0.0) continue;
            canvas.fill(bar(d * (outer - len), d * outer, thick / 2.0), style.tick_color);
        }
    }

    if (style.numerals != NumeralStyle::none) {
        const double height = style.font_size * k;
        for (int h = 1; h <= 12; ++h) {
            const Vector2d d = detail::clock_direction(30.0 * h);
            const double r = boundary_radius(face.outline, d, 1.5 * face.radius) - border -
                             style.numeral_gap * k - height / 2.0;
            if (r <= 0.0) continue;
            canvas.fill(text_shape(numeral_text(h, style.numerals), d * r, height, style.font_thickness * k),
                        style.numeral_color);
        }
    }

    const auto hands = hand_geometry(style, time, size);
    double hub = 0.0;
    Rgb hub_color{};
    for (const auto& h : hands) {
        canvas.fill(detail::hand_shape(h, origin), h.color);
        if ((h.kind == HandKind::hour || h.kind == HandKind::minute) && h.thickness * 0.8 > hub) {
            hub = h.thickness * 0.8;
            hub_color = h.color;
        }
    }
    canvas.fill(disk(Vector2d(0.0, 0.0), hub), hub_color);
    return canvas.to_image();
}

}  // namespace clockforge
