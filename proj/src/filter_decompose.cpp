#include <algorithm>
#include <cmath>
#include <optional>

#include "filter_internal.hpp"
#include "shapetone/filter.hpp"

namespace shapetone::filter {

namespace {

constexpr const char* kNoObjectsMessage =
    "no objects have been recognized. Please, upload a different image";

using detail::TracedComponent;

struct Midline {
    Polyline line;
    double stroke_width = 1.0;
};

int clamp_samples(double len, int lo, int hi) {
    return std::clamp(static_cast<int>(std::lround(len / 4.0)), lo, hi);
}

// Distance from p to the closed polyline `rim`, and the nearest point.
Vec2 nearest_on_rim(const Vec2& p, const std::vector<Vec2>& rim) {
    Vec2 best = rim.front();
    double best_d = dist(p, best);
    for (std::size_t i = 0; i < rim.size(); ++i) {
        const Vec2& a = rim[i];
        const Vec2& b = rim[(i + 1) % rim.size()];
        const Vec2 ab = b - a;
        const double len2 = dot(ab, ab);
        const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
        const Vec2 q = a + ab * t;
        const double d = dist(p, q);
        if (d < best_d) {
            best_d = d;
            best = q;
        }
    }
    return best;
}

void dedupe_consecutive(std::vector<Vec2>& pts) {
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) { return dist(a, b) < 1e-9; }),
              pts.end());
}

// A thin outline (a ring, an ellipse border, ...) traces two nearly
// parallel rims. Averaging each outer sample with its nearest inner point
// recovers the stroke centerline.
Midline pair_closed_rims(const std::vector<Vec2>& outer, const std::vector<Vec2>& rim) {
    const int m = clamp_samples(detail::polyline_length(outer, true), 16, 600);
    const std::vector<Vec2> samples = detail::resample(outer, true, m);

    Midline mid;
    mid.line.closed = true;
    double width_sum = 0.0;
    for (const auto& p : samples) {
        const Vec2 q = nearest_on_rim(p, rim);
        mid.line.points.push_back((p + q) * 0.5);
        width_sum += dist(p, q);
    }
    dedupe_consecutive(mid.line.points);
    // Rims sit on the outermost pixels of either edge, one pixel short of
    // the full ink width.
    mid.stroke_width = width_sum / std::max<std::size_t>(samples.size(), 1) + 1.0;
    return mid;
}

// An open stroke traces a single loop that runs up one side and back down
// the other. The two end caps show up as loop positions whose k-ahead and
// k-behind neighbors nearly coincide; folding the halves between the caps
// onto each other recovers the centerline.
std::optional<Midline> fold_open_stroke(const std::vector<Vec2>& outer, double w_est) {
    const int n = static_cast<int>(outer.size());
    const int k = std::min(std::max(2, static_cast<int>(std::lround(w_est))), n / 4);
    if (n < 8 || k < 1) return std::nullopt;

    auto fold_metric = [&](int i) {
        return dist(outer[static_cast<std::size_t>((i - k + n) % n)],
                    outer[static_cast<std::size_t>((i + k) % n)]);
    };
    const double cap_limit = w_est + 2.0;

    int cap1 = 0;
    double best = fold_metric(0);
    for (int i = 1; i < n; ++i) {
        const double m = fold_metric(i);
        if (m < best) {
            best = m;
            cap1 = i;
        }
    }
    if (best > cap_limit) return std::nullopt;

    int cap2 = -1;
    double best2 = 1e300;
    for (int i = 0; i < n; ++i) {
        const int loop_d = std::min((i - cap1 + n) % n, (cap1 - i + n) % n);
        if (loop_d < n / 4) continue;
        const double m = fold_metric(i);
        if (m < best2) {
            best2 = m;
            cap2 = i;
        }
    }
    if (cap2 < 0 || best2 > cap_limit) return std::nullopt;

    std::vector<Vec2> side_a, side_b;
    for (int i = cap1;; i = (i + 1) % n) {
        side_a.push_back(outer[static_cast<std::size_t>(i)]);
        if (i == cap2) break;
    }
    for (int i = cap2;; i = (i + 1) % n) {
        side_b.push_back(outer[static_cast<std::size_t>(i)]);
        if (i == cap1) break;
    }
    std::reverse(side_b.begin(), side_b.end());  // now runs cap1 -> cap2
    if (side_a.size() < 2 || side_b.size() < 2) return std::nullopt;

    const double len = std::max(detail::polyline_length(side_a, false),
                                detail::polyline_length(side_b, false));
    const int m = clamp_samples(len, 8, 600);
    const std::vector<Vec2> ra = detail::resample(side_a, false, m);
    const std::vector<Vec2> rb = detail::resample(side_b, false, m);
    if (ra.size() != rb.size()) return std::nullopt;

    Midline mid;
    mid.line.closed = false;
    for (std::size_t j = 0; j < ra.size(); ++j)
        mid.line.points.push_back((ra[j] + rb[j]) * 0.5);
    dedupe_consecutive(mid.line.points);
    if (mid.line.points.size() < 2) return std::nullopt;
    // The area-based estimate stays calibrated around corners, where
    // side-to-side pairing overshoots.
    mid.stroke_width = w_est;
    return mid;
}

std::vector<FitResult> component_terms(const TracedComponent& comp,
                                       const DiscretizationLevel& level, int width, int height) {
    std::vector<FitResult> terms;
    if (comp.outer.size() < 3) return terms;

    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
    double perim = detail::polyline_length(comp.outer, true);
    for (const auto& rim : comp.hole_rims) perim += detail::polyline_length(rim, true);
    const double w_est = 2.0 * static_cast<double>(comp.area_px) / std::max(perim, 1.0);
    const double extent = comp.extent();

    auto fit_line = [&](const Polyline& line, double stroke_w) {
        const Polyline slim = simplify(line, level.rdp_tol(diag));
        return segment_primitives(slim, level, width, height, stroke_w);
    };

    if (extent < level.dot_extent(diag))
        return segment_primitives({comp.outer, true}, level, width, height, w_est);

    if (extent >= 4.0 * w_est) {
        // Stroke-like component: recover the centerline instead of fitting
        // both edges of the ink.
        const std::vector<Vec2>* best_rim = nullptr;
        for (const auto& rim : comp.hole_rims) {
            if (detail::polyline_length(rim, true) < 0.5 * detail::polyline_length(comp.outer, true))
                continue;
            if (!best_rim || rim.size() > best_rim->size()) best_rim = &rim;
        }
        if (best_rim) {
            const Midline mid = pair_closed_rims(comp.outer, *best_rim);
            if (mid.line.points.size() >= 3) return fit_line(mid.line, mid.stroke_width);
        } else if (auto mid = fold_open_stroke(comp.outer, w_est)) {
            return fit_line(mid->line, mid->stroke_width);
        }
    }

    // Filled region: the outer boundary plus every hole rim.
    terms = fit_line({comp.outer, true}, w_est);
    for (const auto& rim : comp.hole_rims) {
        if (rim.size() < 3) continue;
        const auto hole_terms = fit_line({rim, true}, w_est);
        terms.insert(terms.end(), hole_terms.begin(), hole_terms.end());
    }
    return terms;
}

}  // namespace

kets::VisualDecomposition decompose(const ImageRaster& img, const DiscretizationLevel& level) {
    const kets::BinaryRaster bin = binarize(img);
    const std::vector<TracedComponent> comps = detail::trace_components(bin);

    struct CompResult {
        double outer_area;
        std::vector<FitResult> terms;
    };
    std::vector<CompResult> fitted;
    for (const auto& comp : comps) {
        auto terms = component_terms(comp, level, img.width, img.height);
        if (!terms.empty()) fitted.push_back({comp.outer_area, std::move(terms)});
    }
    if (fitted.empty()) throw NoObjectsError(kNoObjectsMessage);

    std::size_t envelope_idx = 0;
    for (std::size_t i = 1; i < fitted.size(); ++i)
        if (fitted[i].outer_area > fitted[envelope_idx].outer_area) envelope_idx = i;

    auto by_x = [](const FitResult& a, const FitResult& b) {
        return a.placement.x < b.placement.x;
    };
    std::stable_sort(fitted[envelope_idx].terms.begin(), fitted[envelope_idx].terms.end(), by_x);

    std::vector<FitResult> patterns;
    for (std::size_t i = 0; i < fitted.size(); ++i) {
        if (i == envelope_idx) continue;
        patterns.insert(patterns.end(), fitted[i].terms.begin(), fitted[i].terms.end());
    }
    std::stable_sort(patterns.begin(), patterns.end(), by_x);

    kets::VisualDecomposition d;
    d.envelope_count = fitted[envelope_idx].terms.size();
    for (const auto& fit : fitted[envelope_idx].terms) d.terms.push_back({fit.placement, fit.ket});
    for (const auto& fit : patterns) d.terms.push_back({fit.placement, fit.ket});
    return d;
}

MinimalKetResult minimal_ket_count(const ImageRaster& img, double recog_threshold) {
    constexpr int kLevelCap = 16;
    const kets::BinaryRaster bin = binarize(img);

    std::vector<std::pair<int, double>> samples;
    int count_at_cap = 0;
    for (int lvl = 1; lvl <= kLevelCap; ++lvl) {
        const kets::VisualDecomposition d = decompose(img, {lvl});
        const kets::BinaryRaster approx = kets::render(d, img.width, img.height);
        const double error = 1.0 - kets::intersection_over_union(bin, approx);
        count_at_cap = static_cast<int>(d.terms.size());
        samples.emplace_back(count_at_cap, error);
    }

    MinimalKetResult result;
    std::sort(samples.begin(), samples.end());
    for (const auto& [n, err] : samples) {
        if (!result.curve.empty() && result.curve.back().first == n) {
            result.curve.back().second = std::min(result.curve.back().second, err);
        } else {
            result.curve.emplace_back(n, err);
        }
    }
    double running = 1.0;
    for (auto& [n, err] : result.curve) {
        running = std::min(running, err);
        err = running;
    }

    for (const auto& [n, err] : result.curve) {
        if (err <= recog_threshold) {
            result.n_star = n;
            result.threshold_reached = true;
            break;
        }
    }
    if (!result.threshold_reached) result.n_star = count_at_cap;
    return result;
}

}  // namespace shapetone::filter
