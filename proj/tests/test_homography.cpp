#include "clockforge/homography.hpp"
#include "clockforge/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace clockforge;

namespace {

Homography random_general(Rng& rng) {
    Eigen::Matrix3d m;
    m << rng.uniform(0.7, 1.3), rng.uniform(-0.3, 0.3), rng.uniform(-20, 20),
         rng.uniform(-0.3, 0.3), rng.uniform(0.7, 1.3), rng.uniform(-20, 20),
         rng.uniform(-1e-3, 1e-3), rng.uniform(-1e-3, 1e-3), 1.0;
    return Homography(m);
}

double max_abs_diff(const Homography& a, const Homography& b) {
    return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

// Asymmetric test pattern: smooth ramps plus a bright block off-center.
Image test_pattern(int w, int h) {
    Image img(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const bool block = x > w / 5 && x < w / 2 && y > h / 6 && y < h / 3;
            img.set_pixel(x, y, Rgb{static_cast<std::uint8_t>(x * 255 / (w - 1)),
                                    static_cast<std::uint8_t>(y * 255 / (h - 1)),
                                    static_cast<std::uint8_t>(block ? 250 : 20)});
        }
    }
    return img;
}

}  // namespace

TEST_CASE("canonical form and invertibility") {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity() * 2.0;
    const Homography h(m);
    CHECK(h(2, 2) == 1.0);
    CHECK(h(0, 0) == 1.0);
    CHECK_THROWS_AS(Homography(Eigen::Matrix3d::Zero()), SingularHomography);
    Eigen::Matrix3d rank2 = Eigen::Matrix3d::Identity();
    rank2(1, 1) = 0.0;
    CHECK_THROWS_AS(Homography{rank2}, SingularHomography);
}

TEST_CASE("warp_point") {
    CHECK(warp_point(Homography::identity(), Point2d(5, 7)) == Point2d(5, 7));
    CHECK(warp_point(Homography::translation(3, -2), Point2d(0, 0)) == Point2d(3, -2));
    CHECK(warp_point(Homography::scaling(2, 2), Point2d(1, 1)) == Point2d(2, 2));

    const Homography h(Eigen::Matrix3d{{1, 0, 0}, {0, 1, 0}, {1, 0, 1}});
    CHECK_THROWS_AS(warp_point(h, Point2d(-1, 3)), DegeneratePoint);
}

TEST_CASE("warp_point inverse property") {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Homography h = random_general(rng);
        const Point2d p(rng.uniform(-100, 300), rng.uniform(-100, 300));
        const Point2d q = warp_point(h, warp_point(h.inverse(), p));
        REQUIRE((q - p).cwiseAbs().maxCoeff() < 1e-6);
    }
}

TEST_CASE("normalize_to_unit_grid") {
    const Homography id = normalize_to_unit_grid(Homography::identity(), 224.0);
    CHECK(id.matrix() == Eigen::Matrix3d::Identity());

    // The left factor sends the grid corner (-1, -1) to pixel (0, 0).
    const Eigen::Vector3d corner = unit_grid_to_pixels(224.0) * Eigen::Vector3d(-1, -1, 1);
    CHECK(corner == Eigen::Vector3d(0, 0, 1));
    const Eigen::Vector3d far = unit_grid_to_pixels(224.0) * Eigen::Vector3d(1, 1, 1);
    CHECK(far == Eigen::Vector3d(224, 224, 1));

    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        Eigen::Matrix3d m;
        m << rng.uniform(0.8, 1.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2),
             rng.uniform(-0.2, 0.2), rng.uniform(0.8, 1.2), rng.uniform(-0.2, 0.2),
             rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1), 1.0;
        const Homography h1(m);
        const Homography h2 = random_homography(rng.next());
        const Homography back = denormalize_from_unit_grid(normalize_to_unit_grid(h1, 224.0), 224.0);
        REQUIRE(max_abs_diff(back, h1) < 1e-9);
        // Conjugation respects composition.
        const Homography lhs = normalize_to_unit_grid(h1 * h2, 224.0);
        const Homography rhs = normalize_to_unit_grid(h1, 224.0) * normalize_to_unit_grid(h2, 224.0);
        REQUIRE(max_abs_diff(lhs, rhs) < 1e-9 * std::max(1.0, lhs.matrix().cwiseAbs().maxCoeff()));
    }
    CHECK_THROWS(normalize_to_unit_grid(Homography::identity(), 1.0));
}

TEST_CASE("solve_dlt") {
    const std::array<Point2d, 4> square = {Point2d(0, 0), Point2d(1, 0), Point2d(1, 1), Point2d(0, 1)};
    const Homography id = solve_dlt(square, square);
    CHECK(max_abs_diff(id, Homography::identity()) < 1e-12);

    std::array<Point2d, 4> shifted = square;
    for (auto& p : shifted) p += Point2d(3, -2);
    CHECK(max_abs_diff(solve_dlt(square, shifted), Homography::translation(3, -2)) < 1e-12);

    Rng rng(99);
    for (int i = 0; i < 200; ++i) {
        std::array<Point2d, 4> src, dst;
        for (int k = 0; k < 4; ++k) {
            src[k] = square[k] * 200 + Point2d(rng.uniform(-30, 30), rng.uniform(-30, 30));
            dst[k] = square[k] * 150 + Point2d(rng.uniform(-30, 30), rng.uniform(-30, 30));
        }
        const Homography h = solve_dlt(src, dst);
        for (int k = 0; k < 4; ++k) {
            REQUIRE((warp_point(h, src[k]) - dst[k]).cwiseAbs().maxCoeff() < 1e-6);
        }
    }

    std::array<Point2d, 4> collinear = {Point2d(0, 0), Point2d(1, 1), Point2d(2, 2), Point2d(0, 1)};
    CHECK_THROWS_AS(solve_dlt(collinear, square), DegenerateConfiguration);
    CHECK_THROWS_AS(solve_dlt(square, collinear), DegenerateConfiguration);
}

TEST_CASE("solve_dlt recovers a homography from its action on a square") {
    Rng rng(3);
    const std::array<Point2d, 4> square = {Point2d(0, 0), Point2d(64, 0), Point2d(64, 64), Point2d(0, 64)};
    for (int i = 0; i < 100; ++i) {
        const Homography h = random_general(rng);
        std::array<Point2d, 4> image;
        for (int k = 0; k < 4; ++k) image[k] = warp_point(h, square[k]);
        REQUIRE(max_abs_diff(solve_dlt(square, image), h) < 1e-6);
    }
}

TEST_CASE("random_homography") {
    const std::array<Point2d, 4> square = {Point2d(0, 0), Point2d(1, 0), Point2d(1, 1), Point2d(0, 1)};
    const Homography none = random_homography(42, PerspectiveParams{0.0, 0.0});
    CHECK(none.matrix() == Eigen::Matrix3d::Identity());

    CHECK(random_homography(42).matrix() == random_homography(42).matrix());
    CHECK(random_homography(42).matrix() != random_homography(43).matrix());

    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const Homography h = random_homography(seed, PerspectiveParams{0.15, 0.0});
        for (const auto& c : square) {
            REQUIRE((warp_point(h, c) - c).cwiseAbs().maxCoeff() <= 0.15 + 1e-9);
        }
    }
    CHECK_THROWS(random_homography(1, PerspectiveParams{0.6, 0.0}));
}

TEST_CASE("warp_image identity is bit exact") {
    const Image img = test_pattern(37, 29);
    CHECK(warp_image(img, Homography::identity(), 37, 29) == img);
}

TEST_CASE("warp_image 90 degree rotation matches a direct pixel rotation") {
    const int n = 64;
    const Image img = test_pattern(n, n);
    const Homography rot = Homography::rotation(90.0, Point2d(n / 2.0, n / 2.0));
    const Image warped = warp_image(img, rot, n, n);
    // Rotating 90 deg clockwise on screen: dst(x, y) = src(y, n - 1 - x).
    int worst = 0;
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            for (int c = 0; c < 3; ++c) {
                worst = std::max(worst, std::abs(int(warped.at(x, y, c)) - int(img.at(y, n - 1 - x, c))));
            }
        }
    }
    CHECK(worst <= 1);
}

TEST_CASE("warp_image fills reads outside the source") {
    const Image img(16, 16, Rgb{200, 200, 200});
    const Image shifted = warp_image(img, Homography::translation(8, 0), 16, 16, Rgb{1, 2, 3});
    CHECK(shifted.pixel(2, 5) == Rgb{1, 2, 3});
    CHECK(shifted.pixel(12, 5) == Rgb{200, 200, 200});
}

TEST_CASE("warp round trip keeps the interior") {
    const int n = 96;
    Image img = test_pattern(n, n);
    Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        const Homography h = unit_square_to_pixels(random_homography(rng.next(), {0.04, 5.0}), n, n);
        const Image there = warp_image(img, h, n, n);
        const Image back = warp_image(there, h.inverse(), n, n);
        CHECK(psnr(img, back, 20, 20, n - 20, n - 20) >= 30.0);
    }
}
