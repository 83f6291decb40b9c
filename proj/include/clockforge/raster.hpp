#pragma once

#include "clockforge/image.hpp"

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace clockforge {

/**
 * Signed distance bound for a filled shape: negative inside, positive
 * outside, and |value| never exceeds the true distance to the boundary.
 * Coordinates are relative to the canvas origin.
 */
struct Shape {
    std::function<double(double, double)> distance;
    // Bounding box in origin-relative coordinates.
    double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
};

Shape disk(Eigen::Vector2d center, double radius);
Shape ellipse(Eigen::Vector2d center, double rx, double ry);
Shape rounded_box(Eigen::Vector2d center, double half_w, double half_h, double corner_radius);
// Segment with round caps.
Shape capsule(Eigen::Vector2d a, Eigen::Vector2d b, double half_width);
// Segment with flat ends, extended from a to b.
Shape bar(Eigen::Vector2d a, Eigen::Vector2d b, double half_width);
// Convex polygon, either winding.
Shape convex_polygon(std::vector<Eigen::Vector2d> vertices);

Shape shape_union(std::vector<Shape> parts);
// Band of the given thickness just inside the boundary of `outer`.
Shape inner_band(Shape outer, double thickness);
Shape translated(Shape s, Eigen::Vector2d offset);

/// Fraction of a pixel covered by a shape, estimated with a 4x4 grid of
/// sub-samples; pixels whose center is farther than 0.75 px from the
/// boundary are classified without sampling.
double pixel_coverage(const Shape& s, int px, int py, Eigen::Vector2d origin);

/**
 * Floating-point RGB canvas that composites anti-aliased shapes.
 *
 * Shape coordinates are relative to `origin`, which keeps geometry that is
 * mirror-symmetric about the origin bit-exactly symmetric on the grid.
 */
class Canvas {
public:
    Canvas(int width, int height, Rgb background, Eigen::Vector2d origin);

    void fill(const Shape& s, Rgb color, double opacity = 1.0);

    [[nodiscard]] Image to_image() const;
    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] Eigen::Vector2d origin() const noexcept { return origin_; }

private:
    int width_;
    int height_;
    Eigen::Vector2d origin_;
    std::vector<double> rgb_;
};

/// Composites a shape directly onto an 8-bit image.
void fill_shape(Image& img, const Shape& s, Rgb color, Eigen::Vector2d origin, double opacity = 1.0);

/// Aliased segment: sets every pixel whose center lies within
/// thickness / 2 of the segment [a, b] (absolute pixel coordinates).
void draw_hard_segment(Image& img, Eigen::Vector2d a, Eigen::Vector2d b, double thickness, Rgb color);

// Euclidean distance from p to segment [a, b].
double segment_distance(Eigen::Vector2d p, Eigen::Vector2d a, Eigen::Vector2d b);

}  // namespace clockforge
