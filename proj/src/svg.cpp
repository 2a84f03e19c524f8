#include <cmath>
#include <cstdio>
#include <string>

#include "shapetone/score.hpp"

namespace shapetone::score {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

}  // namespace

std::string to_svg(const kets::VisualDecomposition& d, int width, int height) {
    const double diag = std::hypot(static_cast<double>(width), static_cast<double>(height));
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
           std::to_string(width) + " " + std::to_string(height) + "\">\n";

    for (std::size_t i = 0; i < d.terms.size(); ++i) {
        const auto& [p, ket] = d.terms[i];
        const bool envelope = i < d.envelope_count;
        const std::string stroke = envelope ? "#1f77b4" : "#d62728";
        const double cx = p.x * width;
        const double cy = p.y * height;
        const double stroke_w = std::max(1.0, p.thickness * diag);

        switch (ket.kind) {
            case kets::VisualKetKind::Dot: {
                svg += "  <circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"" +
                       fmt(p.scale * diag / 2.0) + "\" fill=\"" + stroke + "\"/>\n";
                break;
            }
            case kets::VisualKetKind::Segment: {
                const double half = p.scale * diag / 2.0;
                const Vec2 u{std::cos(p.rotation), std::sin(p.rotation)};
                svg += "  <line x1=\"" + fmt(cx - half * u.x) + "\" y1=\"" + fmt(cy - half * u.y) +
                       "\" x2=\"" + fmt(cx + half * u.x) + "\" y2=\"" + fmt(cy + half * u.y) +
                       "\" stroke=\"" + stroke + "\" stroke-width=\"" + fmt(stroke_w) +
                       "\" stroke-linecap=\"round\"/>\n";
                break;
            }
            case kets::VisualKetKind::Arc: {
                const ArcGeometry g = make_arc({cx, cy}, p.scale * diag, p.rotation, ket.sweep);
                const int large_arc = g.sweep > kPi ? 1 : 0;
                // sweep-flag 1 is clockwise in SVG's y-down coordinates,
                // matching the arc convention.
                svg += "  <path d=\"M " + fmt(g.start.x) + " " + fmt(g.start.y) + " A " +
                       fmt(g.radius) + " " + fmt(g.radius) + " 0 " + std::to_string(large_arc) +
                       " 1 " + fmt(g.end.x) + " " + fmt(g.end.y) + "\" fill=\"none\" stroke=\"" +
                       stroke + "\" stroke-width=\"" + fmt(stroke_w) +
                       "\" stroke-linecap=\"round\"/>\n";
                break;
            }
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace shapetone::score
