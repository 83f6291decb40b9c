#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace clockforge {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Interleaved 8-bit RGB raster, row-major.
class Image {
public:
    Image() = default;
    Image(int width, int height, Rgb fill = {});

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

    [[nodiscard]] bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    std::uint8_t& at(int x, int y, int c) {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }
    [[nodiscard]] std::uint8_t at(int x, int y, int c) const {
        return data_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }

    [[nodiscard]] Rgb pixel(int x, int y) const {
        const std::uint8_t* p = &data_[(static_cast<std::size_t>(y) * width_ + x) * 3];
        return {p[0], p[1], p[2]};
    }
    void set_pixel(int x, int y, Rgb v) {
        std::uint8_t* p = &data_[(static_cast<std::size_t>(y) * width_ + x) * 3];
        p[0] = v.r;
        p[1] = v.g;
        p[2] = v.b;
    }

    std::vector<std::uint8_t>& bytes() noexcept { return data_; }
    [[nodiscard]] const std::vector<std::uint8_t>& bytes() const noexcept { return data_; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Scalar map indexed (row = y, col = x).
using ScalarMap = Eigen::ArrayXXd;

// Luma with weights 0.299 / 0.587 / 0.114.
ScalarMap luminance(const Image& img);

inline std::uint8_t clamp_to_byte(double v) noexcept {
    if (!(v > 0.0)) return 0;
    if (v >= 255.0) return 255;
    return static_cast<std::uint8_t>(v + 0.5);
}

// Peak signal-to-noise ratio over a rectangle [x0, x1) x [y0, y1), all channels.
double psnr(const Image& a, const Image& b, int x0, int y0, int x1, int y1);

}  // namespace clockforge
