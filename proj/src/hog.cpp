#include "glodet/hog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace glodet::hog {

namespace {

constexpr double kPi = std::numbers::pi;

/// Unsigned gradient orientation folded to [0, pi); pi maps back to 0.
double folded_theta(double gx, double gy) {
    double theta = std::atan2(gy, gx);
    if (theta < 0) theta += kPi;
    if (theta >= kPi) theta -= kPi;
    return theta;
}

int theta_bin(double theta, int bins) {
    const int b = static_cast<int>(theta / (kPi / bins));
    return (b >= bins) ? 0 : b;
}

int orientation_bin(double gx, double gy, int bins) {
    return theta_bin(folded_theta(gx, gy), bins);
}

void l2_normalize_block(std::span<double> block) {
    constexpr double eps = 1e-6;
    double sq = 0.0;
    for (double v : block) sq += v * v;
    const double norm = std::sqrt(sq + eps * eps);
    for (double& v : block) v /= norm;
}

}  // namespace

int descriptor_dim(DescriptorKind kind) {
    switch (kind) {
        case DescriptorKind::Rhog: return kRhogDim;
        case DescriptorKind::Boundary: return kBoundaryDim;
        case DescriptorKind::Shog: return kShogDim;
    }
    return 0;
}

GradientField gradient_field(const GrayImage& img) {
    if (img.width < 3 || img.height < 3)
        throw std::invalid_argument("gradient field requires an image of at least 3x3");
    GradientField field;
    field.width = img.width;
    field.height = img.height;
    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    field.magnitude.resize(count);
    field.theta.resize(count);
    field.bin.resize(count);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double gx =
                (img.at_clamped(x + 1, y) - static_cast<double>(img.at_clamped(x - 1, y))) / 2.0;
            const double gy =
                (img.at_clamped(x, y + 1) - static_cast<double>(img.at_clamped(x, y - 1))) / 2.0;
            const std::size_t idx = static_cast<std::size_t>(y) * img.width + x;
            const double theta = folded_theta(gx, gy);
            field.magnitude[idx] = static_cast<float>(std::sqrt(gx * gx + gy * gy));
            field.theta[idx] = static_cast<float>(theta);
            field.bin[idx] = static_cast<std::uint8_t>(theta_bin(theta, kOrientationBins));
        }
    }
    return field;
}

Descriptor rhog(const GradientField& field, int x0, int y0) {
    if (x0 < 0 || y0 < 0 || x0 + kWindowSize > field.width || y0 + kWindowSize > field.height)
        throw std::invalid_argument("R-HOG window out of image bounds");
    constexpr int block_px = kWindowSize / kRhogGrid;  // 25

    Descriptor d{DescriptorKind::Rhog, std::vector<double>(kRhogDim, 0.0)};
    for (int by = 0; by < kRhogGrid; ++by) {
        for (int bx = 0; bx < kRhogGrid; ++bx) {
            const int base = (by * kRhogGrid + bx) * kRhogBins;
            for (int dy = 0; dy < block_px; ++dy) {
                const int y = y0 + by * block_px + dy;
                const std::size_t row = static_cast<std::size_t>(y) * field.width;
                for (int dx = 0; dx < block_px; ++dx) {
                    const int x = x0 + bx * block_px + dx;
                    const float mag = field.magnitude[row + x];
                    if (mag == 0.0f) continue;
                    d.values[base + theta_bin(field.theta[row + x], kRhogBins)] += mag;
                }
            }
            l2_normalize_block(std::span<double>(d.values).subspan(base, kRhogBins));
        }
    }
    return d;
}

Descriptor rhog(const GrayImage& img, int x0, int y0) {
    return rhog(gradient_field(img), x0, y0);
}

Descriptor boundary_descriptor(const GrayImage& img, double cx, double cy, double angle,
                               double radius) {
    constexpr int along = 30;       // window extent along the ray
    constexpr int across = 15;      // tangential extent
    constexpr int block_len = 10;   // three blocks stacked along the ray

    const double dir_x = std::cos(angle);
    const double dir_y = std::sin(angle);
    const double tan_x = -dir_y;
    const double tan_y = dir_x;

    // Bounds check on the window corners (1 px slack for the gradient stencil).
    const double reach = std::hypot(along / 2.0 + 1, across / 2.0 + 1);
    if (cx + radius * dir_x - reach < 0 || cx + radius * dir_x + reach >= img.width ||
        cy + radius * dir_y - reach < 0 || cy + radius * dir_y + reach >= img.height)
        throw std::invalid_argument("boundary window exits the image");

    // Resample the window (plus a 1 px apron) into ray-aligned coordinates;
    // gradients computed on the resampled patch are automatically expressed
    // relative to the ray direction.
    constexpr int pw = along + 2;
    constexpr int ph = across + 2;
    double patch[ph][pw];
    for (int v = 0; v < ph; ++v) {
        const double t = v - 1 - (across - 1) / 2.0;
        for (int u = 0; u < pw; ++u) {
            const double s = u - 1 - (along - 1) / 2.0;
            const double x = cx + (radius + s) * dir_x + t * tan_x;
            const double y = cy + (radius + s) * dir_y + t * tan_y;
            patch[v][u] = img.sample(x, y);
        }
    }

    Descriptor d{DescriptorKind::Boundary, std::vector<double>(kBoundaryDim, 0.0)};
    for (int v = 1; v <= across; ++v) {
        for (int u = 1; u <= along; ++u) {
            const double gs = (patch[v][u + 1] - patch[v][u - 1]) / 2.0;
            const double gt = (patch[v + 1][u] - patch[v - 1][u]) / 2.0;
            const double mag = std::sqrt(gs * gs + gt * gt);
            if (mag == 0.0) continue;
            const int block = (u - 1) / block_len;  // inner, capsule, outer
            const int bin = orientation_bin(gs, gt, kOrientationBins);
            d.values[block * kOrientationBins + bin] += mag;
        }
    }
    for (int block = 0; block < 3; ++block)
        l2_normalize_block(
            std::span<double>(d.values).subspan(block * kOrientationBins, kOrientationBins));
    return d;
}

Descriptor shog(const GradientField& field, double cx, double cy, std::span<const double> radii) {
    const int m = static_cast<int>(radii.size());
    if (m < 3) throw std::invalid_argument("S-HOG needs at least 3 boundary radii");
    double r_max = 0.0;
    for (double r : radii) {
        if (r <= 0.0) throw std::invalid_argument("S-HOG boundary radius must be positive");
        r_max = std::max(r_max, r);
    }

    Descriptor d{DescriptorKind::Shog, std::vector<double>(kShogDim, 0.0)};
    const double extent = kShogOuterFraction * r_max;
    const int x_lo = std::max(0, static_cast<int>(std::floor(cx - extent)));
    const int x_hi = std::min(field.width - 1, static_cast<int>(std::ceil(cx + extent)));
    const int y_lo = std::max(0, static_cast<int>(std::floor(cy - extent)));
    const int y_hi = std::min(field.height - 1, static_cast<int>(std::ceil(cy + extent)));

    for (int y = y_lo; y <= y_hi; ++y) {
        for (int x = x_lo; x <= x_hi; ++x) {
            const double dx = x - cx;
            const double dy = y - cy;
            const double rho = std::hypot(dx, dy);
            double phi = std::atan2(dy, dx);
            if (phi < 0) phi += 2 * kPi;
            // Boundary radius at phi: linear interpolation between the two
            // neighboring polygon vertices.
            const double pos = phi / (2 * kPi) * m;
            const int v0 = static_cast<int>(pos) % m;
            const int v1 = (v0 + 1) % m;
            const double frac = pos - std::floor(pos);
            const double r_phi = (1 - frac) * radii[v0] + frac * radii[v1];

            int zone;
            if (rho < kShogInnerFraction * r_phi) zone = 0;
            else if (rho < kShogMiddleFraction * r_phi) zone = 1;
            else if (rho < kShogOuterFraction * r_phi) zone = 2;
            else continue;

            const int sector = std::min(kShogSectors - 1,
                                        static_cast<int>(phi / (2 * kPi / kShogSectors)));
            const std::size_t idx = static_cast<std::size_t>(y) * field.width + x;
            const int block = zone * kShogSectors + sector;
            d.values[block * kOrientationBins + field.bin[idx]] += field.magnitude[idx];
        }
    }
    for (int block = 0; block < kShogZones * kShogSectors; ++block)
        l2_normalize_block(
            std::span<double>(d.values).subspan(block * kOrientationBins, kOrientationBins));
    return d;
}

}  // namespace glodet::hog
