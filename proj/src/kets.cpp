#include "shapetone/kets.hpp"

#include <algorithm>
#include <cmath>

namespace shapetone::kets {

namespace {

constexpr double kArcSweepTolerance = 1e-9;
// Below this subtended angle an arc is visually indistinguishable from a
// straight segment.
constexpr double kFlatArcSweep = 0.2;

int kind_index(VisualKetKind k) {
    switch (k) {
        case VisualKetKind::Dot: return 0;
        case VisualKetKind::Segment: return 1;
        case VisualKetKind::Arc: return 2;
    }
    return 0;
}

int grid_cell(double v) {
    const int g = FeatureVector::kGrid;
    const int c = static_cast<int>(v * g);
    return std::clamp(c, 0, g - 1);
}

double flat_arc_similarity(double sweep) {
    return std::max(0.0, 1.0 - sweep / kFlatArcSweep);
}

}  // namespace

double ket_inner_product(const VisualKet& a, const VisualKet& b) {
    if (a.kind == b.kind) {
        if (a.kind != VisualKetKind::Arc) return 1.0;
        return std::abs(a.sweep - b.sweep) <= kArcSweepTolerance ? 1.0 : 0.0;
    }
    if (a.kind == VisualKetKind::Arc && b.kind == VisualKetKind::Segment)
        return flat_arc_similarity(a.sweep);
    if (a.kind == VisualKetKind::Segment && b.kind == VisualKetKind::Arc)
        return flat_arc_similarity(b.sweep);
    return 0.0;
}

FeatureVector feature_vector(const VisualDecomposition& d) {
    FeatureVector fv;
    for (const auto& term : d.terms) {
        const int cell = grid_cell(term.placement.y) * FeatureVector::kGrid +
                         grid_cell(term.placement.x);
        const int bin = kind_index(term.ket.kind) * FeatureVector::kGrid * FeatureVector::kGrid +
                        cell;
        fv.bins[static_cast<std::size_t>(bin)] += term.placement.scale;
    }
    return fv;
}

double distance(const VisualDecomposition& a, const VisualDecomposition& b) {
    if (a.terms.empty() && b.terms.empty()) return 1.0;
    if (a.terms.empty() || b.terms.empty()) return 0.0;
    const FeatureVector fa = feature_vector(a);
    const FeatureVector fb = feature_vector(b);
    double dp = 0.0, na = 0.0, nb = 0.0;
    for (int i = 0; i < FeatureVector::kBins; ++i) {
        dp += fa.bins[i] * fb.bins[i];
        na += fa.bins[i] * fa.bins[i];
        nb += fb.bins[i] * fb.bins[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dp / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

struct PixelFrame {
    int width;
    int height;
    double diag;
};

void paint_if(BinaryRaster& out, const PixelFrame& f, const Vec2& lo, const Vec2& hi,
              const auto& inside) {
    const int x0 = std::max(0, static_cast<int>(std::floor(lo.x)));
    const int y0 = std::max(0, static_cast<int>(std::floor(lo.y)));
    const int x1 = std::min(f.width - 1, static_cast<int>(std::ceil(hi.x)));
    const int y1 = std::min(f.height - 1, static_cast<int>(std::ceil(hi.y)));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (inside(Vec2{static_cast<double>(x), static_cast<double>(y)})) out.set(x, y, 1);
}

void paint_term(BinaryRaster& out, const PixelFrame& f, const DecompositionTerm& term) {
    const KetPlacement& p = term.placement;
    const Vec2 c{p.x * f.width, p.y * f.height};
    switch (term.ket.kind) {
        case VisualKetKind::Dot: {
            const double r = p.scale * f.diag / 2.0;
            paint_if(out, f, c - Vec2{r, r}, c + Vec2{r, r},
                     [&](const Vec2& q) { return dist(q, c) <= r; });
            break;
        }
        case VisualKetKind::Segment: {
            const double half = p.scale * f.diag / 2.0;
            const double hw = p.thickness * f.diag / 2.0;
            const Vec2 u{std::cos(p.rotation), std::sin(p.rotation)};
            const Vec2 a = c - u * half;
            const Vec2 b = c + u * half;
            const Vec2 lo{std::min(a.x, b.x) - hw, std::min(a.y, b.y) - hw};
            const Vec2 hi{std::max(a.x, b.x) + hw, std::max(a.y, b.y) + hw};
            paint_if(out, f, lo, hi,
                     [&](const Vec2& q) { return point_segment_distance(q, a, b) <= hw; });
            break;
        }
        case VisualKetKind::Arc: {
            const double hw = p.thickness * f.diag / 2.0;
            const ArcGeometry g = make_arc(c, p.scale * f.diag, p.rotation, term.ket.sweep);
            const double reach = g.radius + hw;
            const Vec2 lo{g.center.x - reach, g.center.y - reach};
            const Vec2 hi{g.center.x + reach, g.center.y + reach};
            paint_if(out, f, lo, hi,
                     [&](const Vec2& q) { return point_arc_distance(q, g) <= hw; });
            break;
        }
    }
}

}  // namespace

BinaryRaster render(const VisualDecomposition& d, int width, int height) {
    BinaryRaster out = make_binary_raster(width, height);
    const PixelFrame f{width, height, std::hypot(width, height)};
    for (const auto& term : d.terms) paint_term(out, f, term);
    return out;
}

VisualDecomposition time_reverse(const VisualDecomposition& d) {
    VisualDecomposition out = d;
    const auto mid = out.terms.begin() + static_cast<std::ptrdiff_t>(out.envelope_count);
    std::reverse(out.terms.begin(), mid);
    std::reverse(mid, out.terms.end());
    for (auto& term : out.terms)
        term.placement.rotation = normalize_angle(term.placement.rotation + kPi);
    return out;
}

double intersection_over_union(const BinaryRaster& a, const BinaryRaster& b) {
    std::size_t inter = 0, uni = 0;
    const std::size_t n = std::min(a.pixels.size(), b.pixels.size());
    for (std::size_t i = 0; i < n; ++i) {
        inter += a.pixels[i] & b.pixels[i];
        uni += a.pixels[i] | b.pixels[i];
    }
    for (std::size_t i = n; i < a.pixels.size(); ++i) uni += a.pixels[i];
    for (std::size_t i = n; i < b.pixels.size(); ++i) uni += b.pixels[i];
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace shapetone::kets
