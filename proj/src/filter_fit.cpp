#include <algorithm>
#include <cmath>

#include "filter_internal.hpp"
#include "shapetone/filter.hpp"

namespace shapetone::filter {

namespace {

double clamp_unit(double v, double lo = 1e-9) { return std::clamp(v, lo, 1.0); }

void rdp_keep(const std::vector<Vec2>& pts, std::size_t lo, std::size_t hi, double tol,
              std::vector<char>& keep) {
    if (hi <= lo + 1) return;
    double max_d = -1.0;
    std::size_t max_i = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
        if (d > max_d) {
            max_d = d;
            max_i = i;
        }
    }
    if (max_d > tol) {
        keep[max_i] = 1;
        rdp_keep(pts, lo, max_i, tol, keep);
        rdp_keep(pts, max_i, hi, tol, keep);
    }
}

std::vector<Vec2> rdp(const std::vector<Vec2>& pts, double tol) {
    if (pts.size() < 3) return pts;
    std::vector<char> keep(pts.size(), 0);
    keep.front() = keep.back() = 1;
    rdp_keep(pts, 0, pts.size() - 1, tol, keep);
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (keep[i]) out.push_back(pts[i]);
    return out;
}

struct Covariance {
    Vec2 centroid;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
};

Covariance covariance(const std::vector<Vec2>& pts) {
    Covariance c;
    for (const auto& p : pts) c.centroid = c.centroid + p;
    c.centroid = c.centroid * (1.0 / static_cast<double>(pts.size()));
    for (const auto& p : pts) {
        const Vec2 d = p - c.centroid;
        c.sxx += d.x * d.x;
        c.sxy += d.x * d.y;
        c.syy += d.y * d.y;
    }
    return c;
}

}  // namespace

Polyline simplify(const Polyline& p, double tol) {
    if (p.points.size() < 3) return p;
    if (!p.closed) return {rdp(p.points, tol), false};

    // Closed chain: anchor the split at the point farthest from points[0].
    std::size_t far_i = 1;
    double far_d = -1.0;
    for (std::size_t i = 1; i < p.points.size(); ++i) {
        const double d = dist(p.points[i], p.points[0]);
        if (d > far_d) {
            far_d = d;
            far_i = i;
        }
    }
    std::vector<Vec2> half1(p.points.begin(), p.points.begin() + static_cast<std::ptrdiff_t>(far_i) + 1);
    std::vector<Vec2> half2(p.points.begin() + static_cast<std::ptrdiff_t>(far_i), p.points.end());
    half2.push_back(p.points.front());

    std::vector<Vec2> out = rdp(half1, tol);
    const std::vector<Vec2> second = rdp(half2, tol);
    out.insert(out.end(), second.begin() + 1, second.end() - 1);
    if (out.size() < 3) return {{p.points[0], p.points[far_i]}, false};
    return {std::move(out), true};
}

FitResult fit_segment(const std::vector<Vec2>& points, int width, int height,
                      double stroke_width_px) {
    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
    const Covariance c = covariance(points);

    FitResult fit;
    fit.placement.x = std::clamp(c.centroid.x / width, 0.0, 1.0);
    fit.placement.y = std::clamp(c.centroid.y / height, 0.0, 1.0);
    fit.placement.thickness = clamp_unit(std::max(stroke_width_px, 0.5) / diag);

    if (c.sxx + c.syy <= 1e-12) {
        // All points coincide; signal a Dot instead of a direction-less line.
        fit.ket.kind = kets::VisualKetKind::Dot;
        fit.placement.scale = clamp_unit(1.0 / diag);
        fit.placement.thickness = fit.placement.scale;
        return fit;
    }

    // Principal axis of the covariance (total least squares direction).
    const double theta = 0.5 * std::atan2(2.0 * c.sxy, c.sxx - c.syy);
    Vec2 axis{std::cos(theta), std::sin(theta)};
    // Orient along the traversal so the term keeps its local time direction.
    if (dot(axis, points.back() - points.front()) < 0.0) axis = axis * -1.0;

    double lo = 0.0, hi = 0.0, sq = 0.0;
    for (const auto& p : points) {
        const Vec2 d = p - c.centroid;
        lo = std::min(lo, dot(d, axis));
        hi = std::max(hi, dot(d, axis));
        const double perp = cross(axis, d);
        sq += perp * perp;
    }

    fit.ket.kind = kets::VisualKetKind::Segment;
    fit.placement.scale = clamp_unit((hi - lo) / diag);
    fit.placement.rotation = normalize_angle(std::atan2(axis.y, axis.x));
    fit.residual = std::sqrt(sq / static_cast<double>(points.size()));
    return fit;
}

std::optional<CircleFit> fit_circle_kasa(const std::vector<Vec2>& points) {
    if (points.size() < 3) return std::nullopt;
    Vec2 mean;
    for (const auto& p : points) mean = mean + p;
    mean = mean * (1.0 / static_cast<double>(points.size()));

    // Kasa fit: minimizes the algebraic error of x^2 + y^2 + a x + b y + c.
    // In centered coordinates the first moments vanish and the normal
    // equations reduce to a 2x2 system plus c = -Sz/n.
    double sxx = 0, sxy = 0, syy = 0;
    double sxz = 0, syz = 0, sz = 0;
    for (const auto& p : points) {
        const double x = p.x - mean.x;
        const double y = p.y - mean.y;
        const double z = x * x + y * y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        sxz += x * z;
        syz += y * z;
        sz += z;
    }
    const double n = static_cast<double>(points.size());
    const double det = sxx * syy - sxy * sxy;
    if (std::abs(det) < 1e-12) return std::nullopt;
    const double a = (-sxz * syy + syz * sxy) / det;
    const double b = (-syz * sxx + sxz * sxy) / det;
    const double c = -sz / n;

    const double cx = -a / 2.0;
    const double cy = -b / 2.0;
    const double r2 = cx * cx + cy * cy - c;
    if (r2 <= 0.0 || !std::isfinite(r2)) return std::nullopt;
    return CircleFit{{cx + mean.x, cy + mean.y}, std::sqrt(r2)};
}

std::optional<FitResult> fit_arc(const std::vector<Vec2>& points, int width, int height,
                                 double stroke_width_px) {
    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
    const auto circle = fit_circle_kasa(points);
    if (!circle || circle->radius > 10.0 * diag) return std::nullopt;  // degenerate arc

    // Unwrapped angular travel around the fitted center.
    double travel = 0.0;
    double prev = std::atan2(points.front().y - circle->center.y,
                             points.front().x - circle->center.x);
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double ang = std::atan2(points[i].y - circle->center.y,
                                      points[i].x - circle->center.x);
        double d = ang - prev;
        while (d > kPi) d -= kTwoPi;
        while (d < -kPi) d += kTwoPi;
        travel += d;
        prev = ang;
    }
    double sweep = std::abs(travel);
    if (sweep < 1e-6) return std::nullopt;
    sweep = std::min(sweep, kTwoPi - 1e-9);

    // Normalize to the clockwise-around-center traversal the arc geometry
    // assumes; a counterclockwise chain just swaps its endpoints.
    const Vec2 s = travel >= 0.0 ? points.front() : points.back();
    const Vec2 e = travel >= 0.0 ? points.back() : points.front();

    double sq = 0.0;
    for (const auto& p : points) {
        const double d = dist(p, circle->center) - circle->radius;
        sq += d * d;
    }

    FitResult fit;
    fit.ket.kind = kets::VisualKetKind::Arc;
    fit.ket.sweep = sweep;
    const Vec2 mid = (s + e) * 0.5;
    fit.placement.x = std::clamp(mid.x / width, 0.0, 1.0);
    fit.placement.y = std::clamp(mid.y / height, 0.0, 1.0);
    fit.placement.scale = clamp_unit(dist(s, e) / diag);
    fit.placement.rotation = normalize_angle(std::atan2(e.y - s.y, e.x - s.x));
    fit.placement.thickness = clamp_unit(std::max(stroke_width_px, 0.5) / diag);
    fit.residual = std::sqrt(sq / static_cast<double>(points.size()));
    return fit;
}

namespace {

// Arches beyond this subtended angle are split further, so a full circle
// always decomposes into a pair of opposing arcs.
constexpr double kMaxArcSweep = 1.25 * kPi;

double max_pairwise_extent(const std::vector<Vec2>& pts) {
    double best = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, dist(pts[i], pts[j]));
    return best;
}

FitResult make_dot(const std::vector<Vec2>& pts, double extent, int width, int height) {
    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
    Vec2 centroid;
    for (const auto& p : pts) centroid = centroid + p;
    centroid = centroid * (1.0 / static_cast<double>(pts.size()));

    FitResult fit;
    fit.ket.kind = kets::VisualKetKind::Dot;
    fit.placement.x = std::clamp(centroid.x / width, 0.0, 1.0);
    fit.placement.y = std::clamp(centroid.y / height, 0.0, 1.0);
    // Pixel centers understate the ink footprint by one pixel.
    fit.placement.scale = clamp_unit((extent + 1.0) / diag);
    fit.placement.thickness = fit.placement.scale;
    return fit;
}

void fit_recursive(const std::vector<Vec2>& pts, const DiscretizationLevel& level, int width,
                   int height, double stroke_width_px, std::vector<FitResult>& out) {
    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));

    const double bbox_extent = [&] {
        double lo_x = pts[0].x, hi_x = pts[0].x, lo_y = pts[0].y, hi_y = pts[0].y;
        for (const auto& p : pts) {
            lo_x = std::min(lo_x, p.x);
            hi_x = std::max(hi_x, p.x);
            lo_y = std::min(lo_y, p.y);
            hi_y = std::max(hi_y, p.y);
        }
        return std::max(hi_x - lo_x, hi_y - lo_y);
    }();
    if (bbox_extent < level.dot_extent(diag)) {
        out.push_back(make_dot(pts, max_pairwise_extent(pts), width, height));
        return;
    }

    const double fit_tol = level.fit_tol(diag);
    FitResult seg = fit_segment(pts, width, height, stroke_width_px);
    if (seg.ket.kind == kets::VisualKetKind::Dot || seg.residual < fit_tol) {
        out.push_back(std::move(seg));
        return;
    }
    if (pts.size() >= 3) {
        auto arc = fit_arc(pts, width, height, stroke_width_px);
        if (arc && arc->residual < fit_tol && arc->ket.sweep <= kMaxArcSweep) {
            out.push_back(std::move(*arc));
            return;
        }
    }

    // Split at the point of maximum deviation from the chord.
    std::size_t split = 0;
    double max_d = -1.0;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double d = point_segment_distance(pts[i], pts.front(), pts.back());
        if (d > max_d) {
            max_d = d;
            split = i;
        }
    }
    if (split == 0) split = pts.size() / 2;
    if (split == 0 || split + 1 >= pts.size()) {
        out.push_back(std::move(seg));  // cannot split further
        return;
    }
    const std::vector<Vec2> left(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(split) + 1);
    const std::vector<Vec2> right(pts.begin() + static_cast<std::ptrdiff_t>(split), pts.end());
    fit_recursive(left, level, width, height, stroke_width_px, out);
    fit_recursive(right, level, width, height, stroke_width_px, out);
}

}  // namespace

std::vector<FitResult> segment_primitives(const Polyline& p, const DiscretizationLevel& level,
                                          int width, int height, double stroke_width_px) {
    std::vector<FitResult> out;
    if (p.points.empty()) return out;
    std::vector<Vec2> pts = p.points;
    if (p.closed && pts.size() > 2) pts.push_back(pts.front());
    if (pts.size() == 1) {
        out.push_back(make_dot(pts, 0.0, width, height));
        return out;
    }
    fit_recursive(pts, level, width, height, stroke_width_px, out);
    return out;
}

}  // namespace shapetone::filter
