#ifndef GLODET_IMAGE_HPP
#define GLODET_IMAGE_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace glodet {

/// 8-bit grayscale image, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t at(int x, int y) const {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    std::uint8_t& at(int x, int y) {
        return data[static_cast<std::size_t>(y) * width + x];
    }
    /// Clamped access; reads outside the image return the nearest border pixel.
    std::uint8_t at_clamped(int x, int y) const;

    /// Bilinear intensity sample with border clamping.
    double sample(double x, double y) const;

    bool contains(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height;
    }
};

/// Loads an 8-bit grayscale image. PGM (P5/P2) and PNG are recognized by
/// magic bytes; color PNGs are converted with the Rec.601 luma weights.
GrayImage load_image(const std::string& path);

void save_pgm(const GrayImage& img, const std::string& path);

}  // namespace glodet

#endif
