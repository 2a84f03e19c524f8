#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "shapetone/geometry.hpp"

namespace shapetone::kets {

// The three elementary shape primitives an image is decomposed into.
enum class VisualKetKind { Dot, Segment, Arc };

struct VisualKet {
    VisualKetKind kind = VisualKetKind::Dot;
    // Subtended angle in (0, 2*pi], meaningful for Arc only; 0 otherwise.
    double sweep = 0.0;
};

// The coefficient attached to a primitive: where it sits, how big it is,
// which way it points and how wide the stroke is. x/y are normalized image
// coordinates in [0,1] (origin top-left, y grows downward); scale is a
// fraction of the image diagonal in (0,1]; rotation is in [0, 2*pi);
// thickness is a normalized stroke width in (0,1].
struct KetPlacement {
    double x = 0.5;
    double y = 0.5;
    double scale = 0.1;
    double rotation = 0.0;
    double thickness = 0.01;
};

struct DecompositionTerm {
    KetPlacement placement;
    VisualKet ket;
};

// An ordered, weighted superposition of primitives. The first
// envelope_count terms trace the dominant outer shape, the rest are
// interior detail. An empty term list is the blank image.
struct VisualDecomposition {
    std::vector<DecompositionTerm> terms;
    std::size_t envelope_count = 0;
};

// Histogram over (kind x grid cell) bins used by the cosine distance.
struct FeatureVector {
    static constexpr int kGrid = 8;
    static constexpr int kBins = 3 * kGrid * kGrid;
    std::array<double, kBins> bins{};
};

struct BinaryRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // row-major, 0 = background, 1 = foreground

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { pixels[static_cast<std::size_t>(y) * width + x] = v; }
};

inline BinaryRaster make_binary_raster(int width, int height) {
    return {width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, 0)};
}

// Gestural similarity of two primitives: 1 on identical kinds (arcs also
// need equal sweep within 1e-9), 0 across unrelated kinds. The only graded
// case is a near-flat arc against a segment, which decays linearly and
// vanishes for sweeps of 0.2 rad or more.
double ket_inner_product(const VisualKet& a, const VisualKet& b);

// Each term adds its scale to the (kind, cell containing (x,y)) bin.
FeatureVector feature_vector(const VisualDecomposition& d);

// Cosine similarity of the two feature vectors: 1 for identical
// decompositions, 0 for unrelated ones. Two blank images compare as 1,
// blank against non-blank as 0.
double distance(const VisualDecomposition& a, const VisualDecomposition& b);

// Draws the decomposition: dots as filled discs, segments as strokes, arcs
// as circular arc strokes; overlapping terms union together.
BinaryRaster render(const VisualDecomposition& d, int width, int height);

// Reverses the drawing direction: term order flips within the envelope and
// pattern blocks (each term keeps its membership) and every rotation gains
// pi.
VisualDecomposition time_reverse(const VisualDecomposition& d);

double intersection_over_union(const BinaryRaster& a, const BinaryRaster& b);

}  // namespace shapetone::kets
