#include "stroke_font.hpp"

#include <map>
#include <stdexcept>

namespace clockforge::font {

namespace {

using P = Eigen::Vector2d;

std::map<char, Glyph> build() {
    std::map<char, Glyph> g;
    g['0'] = {0.6, {{P(0.15, 0), P(0.45, 0), P(0.6, 0.15), P(0.6, 0.85), P(0.45, 1), P(0.15, 1), P(0, 0.85),
                     P(0, 0.15), P(0.15, 0)}}};
    g['1'] = {0.6, {{P(0.12, 0.22), P(0.35, 0), P(0.35, 1)}, {P(0.12, 1), P(0.58, 1)}}};
    g['2'] = {0.6, {{P(0, 0.15), P(0.15, 0), P(0.45, 0), P(0.6, 0.15), P(0.6, 0.4), P(0, 1), P(0.6, 1)}}};
    g['3'] = {0.6, {{P(0, 0), P(0.6, 0), P(0.28, 0.42), P(0.45, 0.42), P(0.6, 0.57), P(0.6, 0.85), P(0.45, 1),
                     P(0.15, 1), P(0, 0.85)}}};
    g['4'] = {0.6, {{P(0.45, 1), P(0.45, 0), P(0, 0.7), P(0.6, 0.7)}}};
    g['5'] = {0.6, {{P(0.6, 0), P(0, 0), P(0, 0.45), P(0.45, 0.45), P(0.6, 0.6), P(0.6, 0.85), P(0.45, 1),
                     P(0, 1)}}};
    g['6'] = {0.6, {{P(0.5, 0), P(0.15, 0), P(0, 0.15), P(0, 0.85), P(0.15, 1), P(0.45, 1), P(0.6, 0.85),
                     P(0.6, 0.6), P(0.45, 0.45), P(0, 0.45)}}};
    g['7'] = {0.6, {{P(0, 0), P(0.6, 0), P(0.2, 1)}}};
    g['8'] = {0.6, {{P(0.15, 0), P(0.45, 0), P(0.6, 0.12), P(0.6, 0.35), P(0.45, 0.47), P(0.15, 0.47),
                     P(0, 0.35), P(0, 0.12), P(0.15, 0)},
                    {P(0.15, 0.47), P(0, 0.6), P(0, 0.87), P(0.15, 1), P(0.45, 1), P(0.6, 0.87), P(0.6, 0.6),
                     P(0.45, 0.47)}}};
    g['9'] = {0.6, {{P(0.6, 0.55), P(0.15, 0.55), P(0, 0.4), P(0, 0.15), P(0.15, 0), P(0.45, 0), P(0.6, 0.15),
                     P(0.6, 0.85), P(0.45, 1), P(0.1, 1)}}};
    g['I'] = {0.2, {{P(0.1, 0), P(0.1, 1)}}};
    g['V'] = {0.6, {{P(0, 0), P(0.3, 1), P(0.6, 0)}}};
    g['X'] = {0.6, {{P(0, 0), P(0.6, 1)}, {P(0.6, 0), P(0, 1)}}};
    return g;
}

}  // namespace

const Glyph& glyph(char c) {
    static const std::map<char, Glyph> table = build();
    const auto it = table.find(c);
    if (it == table.end()) throw std::invalid_argument(std::string("no glyph for '") + c + "'");
    return it->second;
}

double text_width(std::string_view text) {
    double w = 0.0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        w += glyph(text[i]).width;
        if (i + 1 < text.size()) w += kSpacing;
    }
    return w;
}

}  // namespace clockforge::font
