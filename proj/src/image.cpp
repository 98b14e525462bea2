#include "glodet/image.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace glodet {

std::uint8_t GrayImage::at_clamped(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return at(x, y);
}

double GrayImage::sample(double x, double y) const {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0;
    const double fy = y - y0;
    const double v00 = at_clamped(x0, y0);
    const double v10 = at_clamped(x0 + 1, y0);
    const double v01 = at_clamped(x0, y0 + 1);
    const double v11 = at_clamped(x0 + 1, y0 + 1);
    return (1 - fy) * ((1 - fx) * v00 + fx * v10) + fy * ((1 - fx) * v01 + fx * v11);
}

namespace {

void skip_pnm_whitespace(std::istream& in) {
    for (;;) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            return;
        }
    }
}

GrayImage load_pgm(std::istream& in, bool binary) {
    int w = 0, h = 0, maxval = 0;
    skip_pnm_whitespace(in);
    in >> w;
    skip_pnm_whitespace(in);
    in >> h;
    skip_pnm_whitespace(in);
    in >> maxval;
    if (!in || w <= 0 || h <= 0 || maxval <= 0 || maxval > 255)
        throw std::runtime_error("malformed PGM header");
    GrayImage img(w, h);
    if (binary) {
        in.get();  // single whitespace after maxval
        in.read(reinterpret_cast<char*>(img.data.data()),
                static_cast<std::streamsize>(img.data.size()));
        if (in.gcount() != static_cast<std::streamsize>(img.data.size()))
            throw std::runtime_error("truncated PGM pixel data");
    } else {
        for (auto& px : img.data) {
            int v;
            in >> v;
            if (!in) throw std::runtime_error("truncated PGM pixel data");
            px = static_cast<std::uint8_t>(std::clamp(v, 0, 255));
        }
    }
    if (maxval != 255) {
        for (auto& px : img.data)
            px = static_cast<std::uint8_t>(px * 255 / maxval);
    }
    return img;
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    std::FILE* fp = nullptr;
    ~PngReadCloser() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

GrayImage load_png(const std::string& path) {
    PngReadCloser ctx;
    ctx.fp = std::fopen(path.c_str(), "rb");
    if (!ctx.fp) throw std::runtime_error("cannot open " + path);
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.png || !ctx.info) throw std::runtime_error("libpng init failed");
    if (setjmp(png_jmpbuf(ctx.png)))
        throw std::runtime_error("PNG decode failed: " + path);
    png_init_io(ctx.png, ctx.fp);
    png_read_info(ctx.png, ctx.info);

    png_set_strip_16(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_set_expand(ctx.png);
    const int color = png_get_color_type(ctx.png, ctx.info);
    if (color & PNG_COLOR_MASK_COLOR)
        png_set_rgb_to_gray(ctx.png, 1, -1, -1);  // Rec.601 defaults
    png_read_update_info(ctx.png, ctx.info);

    const int w = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    const int h = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    GrayImage img(w, h);
    std::vector<png_bytep> rows(h);
    for (int y = 0; y < h; ++y)
        rows[y] = img.data.data() + static_cast<std::size_t>(y) * w;
    png_read_image(ctx.png, rows.data());
    return img;
}

}  // namespace

GrayImage load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    if (magic[0] == 'P' && (magic[1] == '5' || magic[1] == '2'))
        return load_pgm(in, magic[1] == '5');
    if (static_cast<unsigned char>(magic[0]) == 0x89 && magic[1] == 'P') {
        in.close();
        return load_png(path);
    }
    throw std::runtime_error("unrecognized image format: " + path);
}

void save_pgm(const GrayImage& img, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.data.data()),
              static_cast<std::streamsize>(img.data.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace glodet
