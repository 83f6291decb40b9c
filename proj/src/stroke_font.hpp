#pragma once

#include <Eigen/Core>

#include <string_view>
#include <vector>

namespace clockforge::font {

// Glyph outline as polylines in a box of the glyph's width by 1.0 (y down).
struct Glyph {
    double width;
    std::vector<std::vector<Eigen::Vector2d>> strokes;
};

const Glyph& glyph(char c);

// Advance between glyphs, in units of the font height.
inline constexpr double kSpacing = 0.18;

double text_width(std::string_view text);

}  // namespace clockforge::font
