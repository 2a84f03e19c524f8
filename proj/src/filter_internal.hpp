#pragma once

#include <vector>

#include "shapetone/filter.hpp"

namespace shapetone::filter::detail {

// One traced foreground component: its outer boundary plus the inner rims
// of any holes it encloses, all in pixel coordinates.
struct TracedComponent {
    std::vector<Vec2> outer;
    std::vector<std::vector<Vec2>> hole_rims;
    long long area_px = 0;
    double outer_area = 0.0;  // shoelace area of the outer boundary
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;

    double extent() const { return std::max(max_x - min_x, max_y - min_y) + 1.0; }
};

std::vector<TracedComponent> trace_components(const kets::BinaryRaster& bin);

double polyline_length(const std::vector<Vec2>& pts, bool closed);

double shoelace_area(const std::vector<Vec2>& pts);

// Resamples a point chain to n points uniformly spaced by arc length.
std::vector<Vec2> resample(const std::vector<Vec2>& pts, bool closed, int n);

}  // namespace shapetone::filter::detail
