#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapetone/kets.hpp"

namespace shapetone::filter {

// Raised when an input file cannot be decoded as an image.
class DecodeError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

// Raised when a raster contains nothing to decompose.
class NoObjectsError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct ImageRaster {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // grayscale 0..255, row-major

    std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double diag() const { return std::hypot(static_cast<double>(width), static_cast<double>(height)); }
};

struct Polyline {
    std::vector<Vec2> points;  // pixel coordinates
    bool closed = false;
};

struct FitResult {
    kets::KetPlacement placement;
    kets::VisualKet ket;
    double residual = 0.0;  // px RMS
};

// Analysis resolution. Higher levels tighten the simplification and fit
// tolerances, producing more, smaller primitives.
struct DiscretizationLevel {
    int level = 1;

    int clamped() const { return level < 1 ? 1 : level; }
    double rdp_tol(double diag) const { return diag / (32.0 * clamped()); }
    double fit_tol(double diag) const { return diag / (64.0 * clamped()); }
    double dot_extent(double diag) const { return diag / 100.0; }
};

struct CircleFit {
    Vec2 center;
    double radius = 0.0;
};

struct MinimalKetResult {
    int n_star = 0;
    bool threshold_reached = false;
    // (term count, reconstruction error), ascending in count, non-increasing
    // in error.
    std::vector<std::pair<int, double>> curve;
};

// Decodes a PNG or binary PGM (P5) file to grayscale; color converts by
// 0.299 R + 0.587 G + 0.114 B luminance, alpha composites over white.
ImageRaster load_image(const std::string& path);

// Otsu threshold; the darker class becomes foreground (ink on paper).
kets::BinaryRaster binarize(const ImageRaster& img);

// Otsu threshold value for a raster (max between-class variance; the lowest
// maximizing value wins). Foreground is intensity <= threshold.
int otsu_threshold(const ImageRaster& img);

// Moore-neighbor boundary tracing: one closed polyline per connected
// foreground component boundary, hole boundaries included, ordered by
// descending enclosed area. Components under 3 boundary pixels are treated
// as noise.
std::vector<Polyline> extract_contours(const kets::BinaryRaster& bin);

// Ramer-Douglas-Peucker simplification; every discarded point stays within
// tol of the simplified chain.
Polyline simplify(const Polyline& p, double tol);

// Total-least-squares line through the points (principal axis of the
// covariance). Coincident points degrade to a Dot result.
FitResult fit_segment(const std::vector<Vec2>& points, int width, int height,
                      double stroke_width_px = 1.0);

// Kasa algebraic circle fit, reduced to chord + sweep. Near-collinear point
// sets (radius above 10x the diagonal) are rejected so the caller can fall
// back to a segment.
std::optional<FitResult> fit_arc(const std::vector<Vec2>& points, int width, int height,
                                 double stroke_width_px = 1.0);

std::optional<CircleFit> fit_circle_kasa(const std::vector<Vec2>& points);

// Recursive split of a polyline into Dot/Segment/Arc primitives: the
// simplest kind whose residual beats fit_tol wins, otherwise the piece is
// split at the point of maximum deviation.
std::vector<FitResult> segment_primitives(const Polyline& p, const DiscretizationLevel& level,
                                          int width, int height, double stroke_width_px = 1.0);

// The full filter: binarize, trace, recover stroke midlines, simplify and
// fit. Terms of the largest outer contour form the envelope prefix; all
// other contours contribute pattern terms. Throws NoObjectsError on blank
// input.
kets::VisualDecomposition decompose(const ImageRaster& img, const DiscretizationLevel& level);

// Sweeps levels 1..16, measuring 1 - IoU between the binarized input and
// the rendered decomposition, and reports the smallest term count whose
// error reaches recog_threshold.
MinimalKetResult minimal_ket_count(const ImageRaster& img, double recog_threshold);

}  // namespace shapetone::filter
