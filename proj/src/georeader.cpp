#include "clockforge/georeader.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace clockforge {

namespace {

constexpr double kDeg = M_PI / 180.0;

// Tuning of the hand heuristic, in units of the face radius unless noted.
constexpr double kCenterPassing = 0.08;
constexpr double kClusterDegrees = 5.0;
constexpr double kMinHandLength = 0.2;
constexpr double kSecondRayLength = 0.3;
constexpr double kRayGap = 3.0;  // px
constexpr double kVoteFraction = 0.2;

double sample_clamped(const ScalarMap& m, int x, int y) {
    x = std::clamp(x, 0, static_cast<int>(m.cols()) - 1);
    y = std::clamp(y, 0, static_cast<int>(m.rows()) - 1);
    return m(y, x);
}

// Bilinear lookup at continuous coordinates (pixel centers at +0.5).
double bilinear(const ScalarMap& m, double x, double y) {
    const double u = x - 0.5, v = y - 0.5;
    const int x0 = static_cast<int>(std::floor(u)), y0 = static_cast<int>(std::floor(v));
    const double fx = u - x0, fy = v - y0;
    return (1 - fy) * ((1 - fx) * sample_clamped(m, x0, y0) + fx * sample_clamped(m, x0 + 1, y0)) +
           fy * ((1 - fx) * sample_clamped(m, x0, y0 + 1) + fx * sample_clamped(m, x0 + 1, y0 + 1));
}

double axis_difference(double a, double b) {
    double d = std::fmod(std::abs(a - b), 180.0);
    return std::min(d, 180.0 - d);
}

// Contrast model of the dial: pixels far from the face level count as ink.
struct InkModel {
    ScalarMap gray;
    double face = 0.0;
    double threshold = 0.0;

    [[nodiscard]] double contrast(double x, double y) const { return std::abs(bilinear(gray, x, y) - face); }
    [[nodiscard]] bool ink(double x, double y) const { return contrast(x, y) > threshold; }
};

InkModel ink_model(const Image& img, const Circle& face) {
    InkModel m;
    m.gray = luminance(img);
    std::vector<double> inside;
    for (int y = 0; y < m.gray.rows(); ++y) {
        for (int x = 0; x < m.gray.cols(); ++x) {
            if (std::hypot(x + 0.5 - face.cx, y + 0.5 - face.cy) < 0.9 * face.radius) inside.push_back(m.gray(y, x));
        }
    }
    if (inside.empty()) inside.push_back(m.gray(0, 0));
    auto mid = inside.begin() + static_cast<std::ptrdiff_t>(inside.size() / 2);
    std::nth_element(inside.begin(), mid, inside.end());
    m.face = *mid;
    std::vector<double> dev(inside.size());
    std::transform(inside.begin(), inside.end(), dev.begin(), [&](double v) { return std::abs(v - m.face); });
    auto hi = dev.begin() + static_cast<std::ptrdiff_t>(dev.size() * 98 / 100);
    std::nth_element(dev.begin(), hi, dev.end());
    m.threshold = std::max(20.0, 0.45 * *hi);
    return m;
}

Eigen::Vector2d along(const Circle& c, double angle_deg, double r) {
    return {c.cx + std::sin(angle_deg * kDeg) * r, c.cy - std::cos(angle_deg * kDeg) * r};
}

// Length of the ink run leaving the center, tolerating short gaps.
double ray_length(const InkModel& ink, const Circle& c, double angle) {
    const double limit = 0.98 * c.radius;
    double last = -1.0;
    for (double r = 0.0; r <= limit; r += 0.5) {
        const auto p = along(c, angle, r);
        if (ink.ink(p.x(), p.y())) {
            last = r;
        } else if (r - std::max(last, kCenterPassing * c.radius) > kRayGap) {
            break;
        }
    }
    return std::max(last, 0.0);
}

// Ink extent on each side of the ray at radius r, px.
std::pair<double, double> side_extents(const InkModel& ink, const Circle& c, double angle, double r) {
    const Eigen::Vector2d normal(std::cos(angle * kDeg), std::sin(angle * kDeg));
    const auto p = along(c, angle, r);
    std::array<double, 2> ext{};
    for (int k = 0; k < 2; ++k) {
        const double side = k == 0 ? -1.0 : 1.0;
        double t = 0.0;
        while (t < 0.15 * c.radius) {
            const auto q = p + normal * side * (t + 0.25);
            if (!ink.ink(q.x(), q.y())) break;
            t += 0.25;
        }
        ext[k] = t;
    }
    return {ext[0], ext[1]};
}

// Re-centers the ray on the ink by the median perpendicular offset.
double refine_angle(const InkModel& ink, const Circle& c, double angle, double length) {
    for (int iter = 0; iter < 3; ++iter) {
        std::vector<double> shifts;
        for (double r = 0.25 * c.radius; r <= 0.85 * length; r += 1.0) {
            const auto [minus, plus] = side_extents(ink, c, angle, r);
            if (std::max(minus, plus) >= 0.15 * c.radius || minus + plus == 0.0) continue;
            shifts.push_back(std::atan2((plus - minus) / 2.0, r) / kDeg);
        }
        if (shifts.empty()) break;
        auto mid = shifts.begin() + static_cast<std::ptrdiff_t>(shifts.size() / 2);
        std::nth_element(shifts.begin(), mid, shifts.end());
        angle = wrap_degrees(angle + *mid);
    }
    return angle;
}

// Perpendicular ink width, median over the middle of the ray.
double ray_width(const InkModel& ink, const Circle& c, double angle, double length) {
    std::vector<double> widths;
    for (double f : {0.3, 0.4, 0.5, 0.6, 0.7}) {
        const auto [minus, plus] = side_extents(ink, c, angle, f * length);
        widths.push_back(minus + plus);
    }
    std::nth_element(widths.begin(), widths.begin() + 2, widths.end());
    return widths[2];
}

// True when the shorter ray runs inside the ink of the longer one.
bool contained(const HandEstimate& inner, const HandEstimate& outer) {
    if (inner.length > outer.length) return false;
    const double off = std::abs(std::sin(angle_difference(inner.angle, outer.angle) * kDeg)) * inner.length;
    return std::abs(angle_difference(inner.angle, outer.angle)) < 90.0 && off <= outer.thickness_score / 2.0 + 1.0;
}

struct Cluster {
    double sx = 0.0, sy = 0.0;  // doubled-angle vote sum
    double seed = 0.0;          // axis angle in degrees, [0, 180)
    int votes = 0;

    [[nodiscard]] double axis() const {
        double a = std::atan2(sy, sx) / kDeg / 2.0;
        return a < 0.0 ? a + 180.0 : a;
    }
};

}  // namespace

EdgeMap sobel_edges(const ScalarMap& g) {
    if (g.rows() < 8 || g.cols() < 8) throw ImageTooSmall("sobel_edges needs at least 8x8 pixels");
    const int h = static_cast<int>(g.rows()), w = static_cast<int>(g.cols());
    EdgeMap e{ScalarMap::Zero(h, w), ScalarMap::Zero(h, w)};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto at = [&](int dx, int dy) { return sample_clamped(g, x + dx, y + dy); };
            const double gx = (at(1, -1) + 2 * at(1, 0) + at(1, 1)) - (at(-1, -1) + 2 * at(-1, 0) + at(-1, 1));
            const double gy = (at(-1, 1) + 2 * at(0, 1) + at(1, 1)) - (at(-1, -1) + 2 * at(0, -1) + at(1, -1));
            e.magnitude(y, x) = std::hypot(gx, gy);
            e.orientation(y, x) = std::atan2(gy, gx);
        }
    }
    return e;
}

EdgeMap sobel_edges(const Image& img) {
    if (img.width() < 8 || img.height() < 8) throw ImageTooSmall("sobel_edges needs at least 8x8 pixels");
    return sobel_edges(luminance(img));
}

std::vector<LineDetection> hough_lines(const EdgeMap& edges, int vote_threshold, const HoughParams& params) {
    const int h = static_cast<int>(edges.magnitude.rows()), w = static_cast<int>(edges.magnitude.cols());
    const double max_mag = edges.magnitude.size() ? edges.magnitude.maxCoeff() : 0.0;
    if (max_mag <= 0.0) return {};
    if (params.n_theta < 1) throw std::invalid_argument("hough_lines: n_theta must be positive");
    const double diag = std::hypot(w, h);
    const int n_rho = params.n_rho > 0 ? params.n_rho : static_cast<int>(std::ceil(diag));
    const int n_theta = params.n_theta;
    const double rho_step = diag / n_rho;

    std::vector<double> cs(n_theta), sn(n_theta);
    for (int t = 0; t < n_theta; ++t) {
        cs[t] = std::cos(M_PI * t / n_theta);
        sn[t] = std::sin(M_PI * t / n_theta);
    }
    Eigen::ArrayXXi acc = Eigen::ArrayXXi::Zero(n_theta, n_rho);
    const double cut = params.edge_fraction * max_mag;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (edges.magnitude(y, x) < cut) continue;
            const double px = x + 0.5 - w / 2.0, py = y + 0.5 - h / 2.0;
            for (int t = 0; t < n_theta; ++t) {
                const int bin = static_cast<int>(std::floor((px * cs[t] + py * sn[t] + diag / 2.0) / rho_step));
                if (bin >= 0 && bin < n_rho) ++acc(t, bin);
            }
        }
    }

    // theta wraps at pi with rho negated.
    auto votes_at = [&](int t, int r) {
        if (t < 0) {
            t += n_theta;
            r = n_rho - 1 - r;
        } else if (t >= n_theta) {
            t -= n_theta;
            r = n_rho - 1 - r;
        }
        return (r < 0 || r >= n_rho) ? 0 : acc(t, r);
    };
    std::vector<LineDetection> out;
    for (int t = 0; t < n_theta; ++t) {
        for (int r = 0; r < n_rho; ++r) {
            const int v = acc(t, r);
            if (v < vote_threshold || v == 0) continue;
            bool is_max = true;
            for (int dt = -1; dt <= 1 && is_max; ++dt) {
                for (int dr = -1; dr <= 1; ++dr) {
                    if (dt == 0 && dr == 0) continue;
                    const int n = votes_at(t + dt, r + dr);
                    // Plateaus keep their first cell in scan order.
                    const bool earlier = dt < 0 || (dt == 0 && dr < 0);
                    if (n > v || (n == v && earlier)) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) out.push_back({(r + 0.5) * rho_step - diag / 2.0, M_PI * t / n_theta, v});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.votes > b.votes; });
    return out;
}

Circle detect_center(const EdgeMap& edges, double min_score) {
    const int h = static_cast<int>(edges.magnitude.rows()), w = static_cast<int>(edges.magnitude.cols());
    const double max_mag = edges.magnitude.size() ? edges.magnitude.maxCoeff() : 0.0;
    if (max_mag <= 0.0) throw NoCircleSupport("no edges");
    const ScalarMap ux = edges.orientation.cos() * edges.magnitude / max_mag;
    const ScalarMap uy = edges.orientation.sin() * edges.magnitude / max_mag;

    std::array<std::vector<double>, 2> cos_table, sin_table;
    for (int t = 0; t < 2; ++t) {
        const int k = t == 0 ? 128 : 360;
        for (int i = 0; i < k; ++i) {
            cos_table[t].push_back(std::cos(2 * M_PI * i / k));
            sin_table[t].push_back(std::sin(2 * M_PI * i / k));
        }
    }
    auto score = [&](double cx, double cy, double r, int k) {
        const int t = k == 128 ? 0 : 1;
        double s = 0.0;
        for (int i = 0; i < k; ++i) {
            const double c = cos_table[t][i], sn = sin_table[t][i];
            const int x = static_cast<int>(std::floor(cx + r * c)), y = static_cast<int>(std::floor(cy + r * sn));
            if (x < 0 || y < 0 || x >= w || y >= h) continue;
            s += std::abs(ux(y, x) * c + uy(y, x) * sn);
        }
        return s / k;
    };

    const double m = std::min(w, h);
    const double r_lo = 0.25 * m, r_hi = 0.5 * m;
    const double step = std::max(1.0, m / 112.0);
    Circle best{w / 2.0, h / 2.0, 0.4 * m};
    double best_score = -1.0;
    for (double cy = h / 2.0 - 0.1 * h; cy <= h / 2.0 + 0.1 * h + 1e-9; cy += step) {
        for (double cx = w / 2.0 - 0.1 * w; cx <= w / 2.0 + 0.1 * w + 1e-9; cx += step) {
            for (double r = r_lo; r <= r_hi + 1e-9; r += step) {
                const double s = score(cx, cy, r, 128);
                if (s > best_score) {
                    best_score = s;
                    best = {cx, cy, r};
                }
            }
        }
    }
    const Circle coarse = best;
    best_score = -1.0;
    for (double dy = -step; dy <= step + 1e-9; dy += step / 4) {
        for (double dx = -step; dx <= step + 1e-9; dx += step / 4) {
            for (double dr = -step; dr <= step + 1e-9; dr += step / 4) {
                const double r = std::clamp(coarse.radius + dr, r_lo, r_hi);
                const double s = score(coarse.cx + dx, coarse.cy + dy, r, 360);
                if (s > best_score) {
                    best_score = s;
                    best = {coarse.cx + dx, coarse.cy + dy, r};
                }
            }
        }
    }
    if (best_score < min_score) throw NoCircleSupport("circular edge support too weak");
    return best;
}

Circle detect_center(const Image& img, double min_score) { return detect_center(sobel_edges(img), min_score); }

Circle locate_face(const EdgeMap& edges) {
    try {
        return detect_center(edges);
    } catch (const NoCircleSupport&) {
        const double w = static_cast<double>(edges.magnitude.cols()), h = static_cast<double>(edges.magnitude.rows());
        return {w / 2.0, h / 2.0, 0.4 * std::min(w, h)};
    }
}

HandPair extract_hands(const std::vector<LineDetection>& lines, const Circle& face, const Image& img) {
    // Face center relative to the Hough origin.
    const double ox = face.cx - img.width() / 2.0, oy = face.cy - img.height() / 2.0;
    std::vector<Cluster> clusters;
    for (const auto& l : lines) {
        if (std::abs(ox * std::cos(l.theta) + oy * std::sin(l.theta) - l.rho) > kCenterPassing * face.radius) continue;
        const double axis = l.theta / kDeg;
        auto it = std::find_if(clusters.begin(), clusters.end(),
                               [&](const Cluster& c) { return axis_difference(c.seed, axis) <= kClusterDegrees; });
        if (it == clusters.end()) {
            clusters.push_back({});
            it = std::prev(clusters.end());
            it->seed = axis;
        }
        it->sx += l.votes * std::cos(2 * l.theta);
        it->sy += l.votes * std::sin(2 * l.theta);
        it->votes += l.votes;
    }
    if (clusters.empty()) throw InsufficientHands("no lines through the center");

    const InkModel ink = ink_model(img, face);
    std::vector<HandEstimate> hands;
    for (const auto& c : clusters) {
        // A line at normal angle theta runs along clock angles theta and theta + 180.
        std::array<HandEstimate, 2> rays;
        for (int k = 0; k < 2; ++k) {
            const double a = wrap_degrees(c.axis() + 180.0 * k);
            rays[k].angle = a;
            rays[k].length = ray_length(ink, face, a);
        }
        if (rays[1].length > rays[0].length) std::swap(rays[0], rays[1]);
        const int keep = rays[1].length >= kSecondRayLength * face.radius ? 2 : 1;
        for (int k = 0; k < keep; ++k) {
            if (rays[k].length < kMinHandLength * face.radius) continue;
            HandEstimate e = rays[k];
            e.angle = refine_angle(ink, face, e.angle, e.length);
            e.length = ray_length(ink, face, e.angle);
            e.thickness_score = ray_width(ink, face, e.angle, e.length);
            if (e.length < kMinHandLength * face.radius) continue;
            hands.push_back(e);
        }
    }
    std::sort(hands.begin(), hands.end(), [](const auto& a, const auto& b) { return a.length > b.length; });
    std::vector<HandEstimate> distinct;
    for (const auto& h : hands) {
        if (std::none_of(distinct.begin(), distinct.end(), [&](const auto& d) { return contained(h, d); })) {
            distinct.push_back(h);
        }
    }
    hands = std::move(distinct);
    if (hands.empty()) throw InsufficientHands("no hand-like ray from the center");

    while (hands.size() > 2) {
        hands.erase(std::min_element(hands.begin(), hands.end(), [](const auto& a, const auto& b) {
            return a.thickness_score < b.thickness_score;
        }));
    }
    if (hands.size() == 2) {
        const bool first_longer = hands[0].length >= hands[1].length;
        return {first_longer ? hands[1] : hands[0], first_longer ? hands[0] : hands[1], false};
    }

    // Both hands along one ray: the class whose hands best align with it.
    const double a = hands[0].angle;
    int best = 0;
    double best_res = 1e9;
    for (int i = 0; i < kMinutesPerCycle; ++i) {
        const HandAngles ideal = hand_angles(decode_class(TimeClass(i)));
        const double res = std::abs(angle_difference(ideal.hour_angle, a)) + std::abs(angle_difference(ideal.minute_angle, a));
        if (res < best_res) {
            best_res = res;
            best = i;
        }
    }
    const HandAngles ideal = hand_angles(decode_class(TimeClass(best)));
    HandPair pair{hands[0], hands[0], true};
    pair.hour.angle = ideal.hour_angle;
    pair.minute.angle = ideal.minute_angle;
    return pair;
}

std::vector<Candidate> rank_candidates(const HandPair& hands) {
    const double h = hands.hour.angle, m = hands.minute.angle;
    auto residual = [](TimeClass c, double hour, double minute) {
        const HandAngles ideal = hand_angles(decode_class(c));
        return std::abs(angle_difference(ideal.hour_angle, hour)) + std::abs(angle_difference(ideal.minute_angle, minute));
    };
    const auto [direct, swapped] = angles_to_time({h, m});
    const int minute = decode_class(direct).minute();
    const int nudge = angle_difference(m, 6.0 * minute) >= 0.0 ? 1 : -1;
    const TimeClass near(positive_mod(direct.index() + nudge, kMinutesPerCycle));

    const std::array<std::pair<TimeClass, double>, 3> raw{{
        {direct, residual(direct, h, m)},
        {swapped, residual(swapped, m, h)},
        {near, residual(near, h, m)},
    }};
    std::vector<Candidate> out;
    double ceiling = 1.0;
    for (const auto& [c, res] : raw) {
        if (std::any_of(out.begin(), out.end(), [&](const Candidate& k) { return k.time == c; })) continue;
        ceiling = std::min(ceiling, std::exp(-res / 30.0));
        out.push_back({c, ceiling});
    }
    return out;
}

ReadResult read_time(const Image& img) {
    ReadResult result;
    const EdgeMap edges = sobel_edges(img);
    const Circle face = locate_face(edges);
    result.face = face;
    const int votes = std::max(8, static_cast<int>(std::lround(kVoteFraction * face.radius)));
    try {
        const HandPair hands = extract_hands(hough_lines(edges, votes), face, img);
        result.hands = hands;
        result.candidates = rank_candidates(hands);
    } catch (const InsufficientHands&) {
    }
    return result;
}

}  // namespace clockforge
