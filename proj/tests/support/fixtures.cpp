#include "fixtures.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace shapetone::testsupport {

filter::ImageRaster make_canvas(int width, int height) {
    return {width, height,
            std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, 255)};
}

namespace {

void ink(filter::ImageRaster& img, int x, int y) {
    if (x >= 0 && x < img.width && y >= 0 && y < img.height)
        img.pixels[static_cast<std::size_t>(y) * img.width + x] = 0;
}

}  // namespace

void paint_disc(filter::ImageRaster& img, double cx, double cy, double r) {
    for (int y = static_cast<int>(cy - r) - 1; y <= static_cast<int>(cy + r) + 1; ++y)
        for (int x = static_cast<int>(cx - r) - 1; x <= static_cast<int>(cx + r) + 1; ++x)
            if (std::hypot(x - cx, y - cy) <= r) ink(img, x, y);
}

void paint_capsule(filter::ImageRaster& img, double x0, double y0, double x1, double y1,
                   double width) {
    const double dx = x1 - x0, dy = y1 - y0;
    const double len2 = dx * dx + dy * dy;
    const double hw = width / 2.0;
    const int lo_x = static_cast<int>(std::min(x0, x1) - hw) - 1;
    const int hi_x = static_cast<int>(std::max(x0, x1) + hw) + 1;
    const int lo_y = static_cast<int>(std::min(y0, y1) - hw) - 1;
    const int hi_y = static_cast<int>(std::max(y0, y1) + hw) + 1;
    for (int y = lo_y; y <= hi_y; ++y) {
        for (int x = lo_x; x <= hi_x; ++x) {
            double t = len2 > 0 ? ((x - x0) * dx + (y - y0) * dy) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            if (std::hypot(x - (x0 + t * dx), y - (y0 + t * dy)) <= hw) ink(img, x, y);
        }
    }
}

void paint_ring(filter::ImageRaster& img, double cx, double cy, double r, double width) {
    for (int y = static_cast<int>(cy - r - width) - 1; y <= static_cast<int>(cy + r + width) + 1;
         ++y)
        for (int x = static_cast<int>(cx - r - width) - 1;
             x <= static_cast<int>(cx + r + width) + 1; ++x)
            if (std::abs(std::hypot(x - cx, y - cy) - r) <= width / 2.0) ink(img, x, y);
}

void paint_arc_band(filter::ImageRaster& img, double cx, double cy, double r, double a0,
                    double sweep, double width) {
    const double two_pi = 2.0 * 3.14159265358979323846;
    for (int y = static_cast<int>(cy - r - width) - 1; y <= static_cast<int>(cy + r + width) + 1;
         ++y) {
        for (int x = static_cast<int>(cx - r - width) - 1;
             x <= static_cast<int>(cx + r + width) + 1; ++x) {
            if (std::abs(std::hypot(x - cx, y - cy) - r) > width / 2.0) continue;
            double rel = std::fmod(std::atan2(y - cy, x - cx) - a0, two_pi);
            if (rel < 0) rel += two_pi;
            if (rel <= sweep) ink(img, x, y);
        }
    }
}

void write_pgm(const std::string& path, const filter::ImageRaster& img) {
    std::ofstream out(path, std::ios::binary);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(img.pixels.data()),
              static_cast<std::streamsize>(img.pixels.size()));
    if (!out) throw std::runtime_error("cannot write " + path);
}

namespace {

void write_png(const std::string& path, int width, int height, int color_type,
               const std::vector<std::uint8_t>& data) {
    std::FILE* fp = std::fopen(path.c_str(), "wb");
    if (!fp) throw std::runtime_error("cannot open " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw std::runtime_error("png write failed for " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const int channels = color_type == PNG_COLOR_TYPE_GRAY   ? 1
                         : color_type == PNG_COLOR_TYPE_RGB  ? 3
                         : color_type == PNG_COLOR_TYPE_RGBA ? 4
                                                             : 1;
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(data.data() +
                                                 static_cast<std::size_t>(y) * width * channels));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

}  // namespace

void write_png_gray(const std::string& path, const filter::ImageRaster& img) {
    write_png(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, img.pixels);
}

void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb) {
    write_png(path, width, height, PNG_COLOR_TYPE_RGB, rgb);
}

void write_png_rgba(const std::string& path, int width, int height,
                    const std::vector<std::uint8_t>& rgba) {
    write_png(path, width, height, PNG_COLOR_TYPE_RGBA, rgba);
}

kets::VisualDecomposition random_decomposition(std::mt19937& rng, std::size_t min_terms,
                                               std::size_t max_terms) {
    std::uniform_int_distribution<std::size_t> count_dist(min_terms, max_terms);
    std::uniform_int_distribution<int> kind_dist(0, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    kets::VisualDecomposition d;
    const std::size_t count = count_dist(rng);
    for (std::size_t i = 0; i < count; ++i) {
        kets::DecompositionTerm term;
        const int kind = kind_dist(rng);
        term.ket.kind = static_cast<kets::VisualKetKind>(kind);
        if (term.ket.kind == kets::VisualKetKind::Arc)
            term.ket.sweep = 0.2 + unit(rng) * (3.14 - 0.2);
        term.placement.x = 0.1 + 0.8 * unit(rng);
        term.placement.y = 0.1 + 0.8 * unit(rng);
        term.placement.scale = term.ket.kind == kets::VisualKetKind::Dot
                                   ? 0.004 + 0.004 * unit(rng)
                                   : 0.05 + 0.3 * unit(rng);
        term.placement.rotation = unit(rng) * 2.0 * 3.14159265358979;
        term.placement.thickness = 0.003 + 0.02 * unit(rng);
        d.terms.push_back(term);
    }
    d.envelope_count = std::uniform_int_distribution<std::size_t>(0, d.terms.size())(rng);
    return d;
}

std::vector<CorpusImage> make_corpus(unsigned seed, int per_class) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<CorpusImage> corpus;
    const int side = 512;

    for (int variant = 0; variant < per_class; ++variant) {
        {  // class 0: a dotted row
            auto img = make_canvas(side, side);
            const int dots = 5 + static_cast<int>(unit(rng) * 4);
            const double y = 120 + unit(rng) * 280;
            const double x0 = 40 + unit(rng) * 60;
            const double dx = (side - 2 * x0) / (dots - 1);
            for (int i = 0; i < dots; ++i) paint_disc(img, x0 + i * dx, y, 2.5);
            corpus.push_back({std::move(img), 0});
        }
        {  // class 1: one smooth curved stroke
            auto img = make_canvas(side, side);
            const double r = 100 + unit(rng) * 120;
            const double cx = 200 + unit(rng) * 120;
            const double cy = 200 + unit(rng) * 120;
            const double a0 = unit(rng) * 6.28;
            paint_arc_band(img, cx, cy, r, a0, 1.6 + unit(rng) * 1.2, 3.0);
            corpus.push_back({std::move(img), 1});
        }
        {  // class 2: a zigzag of straight strokes
            auto img = make_canvas(side, side);
            const int strokes = 4 + static_cast<int>(unit(rng) * 2);
            const double y_hi = 140 + unit(rng) * 60;
            const double y_lo = 320 + unit(rng) * 60;
            double x = 40 + unit(rng) * 40;
            const double dx = (side - 80 - x) / strokes;
            for (int i = 0; i < strokes; ++i) {
                const double y_a = i % 2 == 0 ? y_lo : y_hi;
                const double y_b = i % 2 == 0 ? y_hi : y_lo;
                paint_capsule(img, x, y_a, x + dx, y_b, 3.0);
                x += dx;
            }
            corpus.push_back({std::move(img), 2});
        }
        {  // class 3: a ring
            auto img = make_canvas(side, side);
            const double r = 80 + unit(rng) * 120;
            paint_ring(img, 180 + unit(rng) * 150, 180 + unit(rng) * 150, r, 3.0);
            corpus.push_back({std::move(img), 3});
        }
        {  // class 4: a bar with two dots
            auto img = make_canvas(side, side);
            const double y = 150 + unit(rng) * 200;
            const double x0 = 60 + unit(rng) * 60;
            paint_capsule(img, x0, y, x0 + 180 + unit(rng) * 120, y - 40 - unit(rng) * 60, 4.0);
            paint_disc(img, x0 + 40, y + 80 + unit(rng) * 40, 2.5);
            paint_disc(img, x0 + 160, y + 80 + unit(rng) * 40, 2.5);
            corpus.push_back({std::move(img), 4});
        }
    }
    return corpus;
}

}  // namespace shapetone::testsupport
