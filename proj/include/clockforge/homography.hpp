#pragma once

#include "clockforge/image.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

namespace clockforge {

class SingularHomography : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegeneratePoint : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateConfiguration : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * Plane projective transform with 8 degrees of freedom.
 *
 * The matrix is kept canonical with h33 == 1 and is always invertible
 * (|det| > 1e-9 after canonicalization); constructing anything else throws
 * SingularHomography.
 *
 * Image-space convention used throughout the library: pixel (i, j) covers
 * [i, i+1) x [j, j+1), so its center sits at (i + 0.5, j + 0.5).
 */
template <typename Scalar>
class BasicHomography {
public:
    using Matrix = Eigen::Matrix<Scalar, 3, 3>;
    using Point = Eigen::Matrix<Scalar, 2, 1>;

    static constexpr Scalar kDetEpsilon = Scalar(1e-9);
    static constexpr Scalar kDenominatorEpsilon = Scalar(1e-9);

    BasicHomography() : m_(Matrix::Identity()) {}

    explicit BasicHomography(const Matrix& m) : m_(m) {
        using std::abs;
        const Scalar h33 = m(2, 2);
        if (!(abs(h33) > Scalar(1e-12))) {
            throw SingularHomography("homography has h33 == 0; cannot canonicalize");
        }
        if (h33 != Scalar(1)) m_ /= h33;
        const Scalar det = m_.determinant();
        if (!(abs(det) > kDetEpsilon)) {
            throw SingularHomography("homography is singular");
        }
    }

    static BasicHomography identity() { return BasicHomography(); }

    static BasicHomography translation(Scalar tx, Scalar ty) {
        Matrix m = Matrix::Identity();
        m(0, 2) = tx;
        m(1, 2) = ty;
        return BasicHomography(m);
    }

    static BasicHomography scaling(Scalar sx, Scalar sy) {
        Matrix m = Matrix::Identity();
        m(0, 0) = sx;
        m(1, 1) = sy;
        return BasicHomography(m);
    }

    /// Rotation by `degrees` (clockwise on screen, since y points down) about `center`.
    static BasicHomography rotation(Scalar degrees, const Point& center) {
        using std::cos;
        using std::sin;
        const Scalar rad = degrees * Scalar(M_PI / 180.0);
        const Scalar c = cos(rad);
        const Scalar s = sin(rad);
        Matrix m = Matrix::Identity();
        m(0, 0) = c;
        m(0, 1) = -s;
        m(1, 0) = s;
        m(1, 1) = c;
        m(0, 2) = center.x() - c * center.x() + s * center.y();
        m(1, 2) = center.y() - s * center.x() - c * center.y();
        return BasicHomography(m);
    }

    [[nodiscard]] const Matrix& matrix() const noexcept { return m_; }
    Scalar operator()(int r, int c) const { return m_(r, c); }

    [[nodiscard]] BasicHomography inverse() const { return BasicHomography(m_.inverse()); }

    friend BasicHomography operator*(const BasicHomography& a, const BasicHomography& b) {
        return BasicHomography(Matrix(a.m_ * b.m_));
    }

    [[nodiscard]] std::array<Scalar, 9> row_major() const {
        std::array<Scalar, 9> out{};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out[r * 3 + c] = m_(r, c);
        return out;
    }

    static BasicHomography from_row_major(std::span<const Scalar> values) {
        if (values.size() != 9) {
            throw std::invalid_argument("homography needs exactly 9 values");
        }
        Matrix m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = values[r * 3 + c];
        return BasicHomography(m);
    }

private:
    Matrix m_;
};

using Homography = BasicHomography<double>;
using Point2d = Eigen::Vector2d;

template <typename Scalar>
typename BasicHomography<Scalar>::Point warp_point(const BasicHomography<Scalar>& h,
                                                   const typename BasicHomography<Scalar>::Point& p) {
    using std::abs;
    const auto& m = h.matrix();
    const Scalar den = m(2, 0) * p.x() + m(2, 1) * p.y() + m(2, 2);
    if (!(abs(den) >= BasicHomography<Scalar>::kDenominatorEpsilon)) {
        throw DegeneratePoint("point maps to infinity under homography");
    }
    return {(m(0, 0) * p.x() + m(0, 1) * p.y() + m(0, 2)) / den,
            (m(1, 0) * p.x() + m(1, 1) * p.y() + m(1, 2)) / den};
}

/// Left conjugating factor that takes the [-1, 1] grid onto a square image of
/// side `image_size`: scale s = size / 2, translation t = 1.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> unit_grid_to_pixels(Scalar image_size) {
    const Scalar s = image_size / Scalar(2);
    const Scalar t = Scalar(1);
    Eigen::Matrix<Scalar, 3, 3> m;
    m << s, 0, s * t,
         0, s, s * t,
         0, 0, 1;
    return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> pixels_to_unit_grid(Scalar image_size) {
    const Scalar s = image_size / Scalar(2);
    const Scalar t = Scalar(1);
    Eigen::Matrix<Scalar, 3, 3> m;
    m << 1 / s, 0, -t,
         0, 1 / s, -t,
         0, 0, 1;
    return m;
}

/// Re-expresses a homography acting on the [-1, 1] grid as one acting on
/// pixels: diag-scale/translate on the left, its inverse on the right.
template <typename Scalar>
BasicHomography<Scalar> normalize_to_unit_grid(const BasicHomography<Scalar>& h, Scalar image_size) {
    if (!(image_size >= Scalar(2))) {
        throw std::invalid_argument("image size must be at least 2");
    }
    using Matrix = typename BasicHomography<Scalar>::Matrix;
    return BasicHomography<Scalar>(
        Matrix(unit_grid_to_pixels(image_size) * h.matrix() * pixels_to_unit_grid(image_size)));
}

template <typename Scalar>
BasicHomography<Scalar> denormalize_from_unit_grid(const BasicHomography<Scalar>& h, Scalar image_size) {
    if (!(image_size >= Scalar(2))) {
        throw std::invalid_argument("image size must be at least 2");
    }
    using Matrix = typename BasicHomography<Scalar>::Matrix;
    return BasicHomography<Scalar>(
        Matrix(pixels_to_unit_grid(image_size) * h.matrix() * unit_grid_to_pixels(image_size)));
}

/**
 * Exact four-point homography, src[i] -> dst[i].
 *
 * Both point sets are first mapped onto the unit square by their bounding
 * boxes; the 8x8 system is solved there and the result conjugated back.
 * Throws DegenerateConfiguration when three points of either set are
 * collinear.
 */
template <typename Scalar>
BasicHomography<Scalar> solve_dlt(std::span<const Eigen::Matrix<Scalar, 2, 1>, 4> src,
                                  std::span<const Eigen::Matrix<Scalar, 2, 1>, 4> dst) {
    using Matrix = Eigen::Matrix<Scalar, 3, 3>;
    using Point = Eigen::Matrix<Scalar, 2, 1>;
    using std::abs;
    using std::max;

    auto conditioning = [](std::span<const Point, 4> pts) {
        Point lo = pts[0];
        Point hi = pts[0];
        for (const auto& p : pts) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        const Scalar extent = max((hi - lo).maxCoeff(), Scalar(1e-300));
        Matrix t = Matrix::Identity();
        t(0, 0) = t(1, 1) = 1 / extent;
        t(0, 2) = -lo.x() / extent;
        t(1, 2) = -lo.y() / extent;
        return t;
    };

    auto check_general_position = [](std::span<const Point, 4> pts, const Matrix& t) {
        std::array<Point, 4> q;
        for (int i = 0; i < 4; ++i) q[i] = (t * pts[i].homogeneous()).hnormalized();
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) {
                for (int c = b + 1; c < 4; ++c) {
                    const Point u = q[b] - q[a];
                    const Point v = q[c] - q[a];
                    if (abs(u.x() * v.y() - u.y() * v.x()) < Scalar(1e-9)) {
                        throw DegenerateConfiguration("three of the four points are collinear");
                    }
                }
            }
        }
        return q;
    };

    const Matrix ts = conditioning(src);
    const Matrix td = conditioning(dst);
    const auto s = check_general_position(src, ts);
    const auto d = check_general_position(dst, td);

    Eigen::Matrix<Scalar, 8, 8> a;
    Eigen::Matrix<Scalar, 8, 1> b;
    for (int i = 0; i < 4; ++i) {
        const Scalar x = s[i].x(), y = s[i].y(), u = d[i].x(), v = d[i].y();
        a.row(2 * i) << x, y, 1, 0, 0, 0, -u * x, -u * y;
        a.row(2 * i + 1) << 0, 0, 0, x, y, 1, -v * x, -v * y;
        b(2 * i) = u;
        b(2 * i + 1) = v;
    }
    const Eigen::FullPivLU<Eigen::Matrix<Scalar, 8, 8>> lu(a);
    if (!lu.isInvertible()) {
        throw DegenerateConfiguration("point correspondence does not determine a homography");
    }
    const Eigen::Matrix<Scalar, 8, 1> h = lu.solve(b);
    Matrix hn;
    hn << h(0), h(1), h(2),
          h(3), h(4), h(5),
          h(6), h(7), 1;
    const Matrix full = td.inverse() * hn * ts;
    if (!full.allFinite()) {
        throw DegenerateConfiguration("homography solve produced non-finite values");
    }
    return BasicHomography<Scalar>(full);
}

template <typename Scalar>
BasicHomography<Scalar> solve_dlt(const std::array<Eigen::Matrix<Scalar, 2, 1>, 4>& src,
                                  const std::array<Eigen::Matrix<Scalar, 2, 1>, 4>& dst) {
    return solve_dlt<Scalar>(std::span<const Eigen::Matrix<Scalar, 2, 1>, 4>(src),
                             std::span<const Eigen::Matrix<Scalar, 2, 1>, 4>(dst));
}

/// Conjugates a homography on the unit square [0, 1]^2 into pixel space.
Homography unit_square_to_pixels(const Homography& h, int width, int height);

/// Destination-sampled warp: dst(p) = src(H^-1 p), bilinear, `fill` outside
/// the source.
Image warp_image(const Image& src, const Homography& h, int out_width, int out_height,
                 Rgb fill = {});

struct PerspectiveParams {
    double max_corner_shift = 0.15;  // fraction of the image side
    double max_rotation_deg = 30.0;
};

/// Random projective distortion on the unit square: each corner displaced by
/// an i.i.d. uniform offset, then a global rotation about (0.5, 0.5).
Homography random_homography(std::uint64_t seed, const PerspectiveParams& params = {});

}  // namespace clockforge
