#include "clockforge/image.hpp"

#include <cmath>
#include <limits>

namespace clockforge {

Image::Image(int width, int height, Rgb fill) : width_(width), height_(height) {
    if (width < 1 || height < 1) {
        throw std::invalid_argument("image dimensions must be positive");
    }
    data_.resize(static_cast<std::size_t>(width) * height * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

ScalarMap luminance(const Image& img) {
    ScalarMap out(img.height(), img.width());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            out(y, x) = 0.299 * img.at(x, y, 0) + 0.587 * img.at(x, y, 1) + 0.114 * img.at(x, y, 2);
        }
    }
    return out;
}

double psnr(const Image& a, const Image& b, int x0, int y0, int x1, int y1) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw std::invalid_argument("psnr: size mismatch");
    }
    double sse = 0.0;
    long count = 0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            for (int c = 0; c < 3; ++c) {
                const double d = double(a.at(x, y, c)) - double(b.at(x, y, c));
                sse += d * d;
                ++count;
            }
        }
    }
    if (count == 0) throw std::invalid_argument("psnr: empty region");
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / (sse / count));
}

}  // namespace clockforge
