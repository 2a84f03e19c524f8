#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "shapetone/filter.hpp"
#include "shapetone/kets.hpp"

namespace shapetone::testsupport {

// Blank white canvas.
filter::ImageRaster make_canvas(int width, int height);

// Ink painters, independent of kets::render: they write 0 (ink) into a
// grayscale canvas using direct distance predicates.
void paint_disc(filter::ImageRaster& img, double cx, double cy, double r);
void paint_capsule(filter::ImageRaster& img, double x0, double y0, double x1, double y1,
                   double width);
void paint_ring(filter::ImageRaster& img, double cx, double cy, double r, double width);
// Arc band between screen angles a0 and a0+sweep (clockwise, y down).
void paint_arc_band(filter::ImageRaster& img, double cx, double cy, double r, double a0,
                    double sweep, double width);

void write_pgm(const std::string& path, const filter::ImageRaster& img);
void write_png_gray(const std::string& path, const filter::ImageRaster& img);
// rgb / rgba are row-major with 3 / 4 bytes per pixel.
void write_png_rgb(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& rgb);
void write_png_rgba(const std::string& path, int width, int height,
                    const std::vector<std::uint8_t>& rgba);

// Random but valid decompositions for property tests. Dots stay small so
// a rendered decomposition could plausibly be re-filtered.
kets::VisualDecomposition random_decomposition(std::mt19937& rng, std::size_t min_terms = 1,
                                               std::size_t max_terms = 8);

// The synthetic corpus used by the acceptance suite: `classes` kinds of
// drawings, `per_class` seeded variations of each.
struct CorpusImage {
    filter::ImageRaster image;
    int image_class = 0;
};
std::vector<CorpusImage> make_corpus(unsigned seed, int per_class = 10);

}  // namespace shapetone::testsupport
