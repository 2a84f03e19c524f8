#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

namespace shapetone {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    bool operator==(const Vec2& o) const = default;
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }

// Angles follow screen coordinates: x right, y down, so increasing angle
// turns clockwise on screen.
inline double normalize_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0) a += kTwoPi;
    return a;
}

// Absolute deviation from the horizontal axis, folded into [0, pi/2].
inline double angle_from_horizontal(double rotation) {
    double a = std::fmod(rotation, kPi);
    if (a < 0) a += kPi;
    return std::min(a, kPi - a);
}

// Distance from p to the segment [a, b]; degenerates to point distance.
inline double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 <= 0.0) return dist(p, a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return dist(p, a + ab * t);
}

// Circular-arc geometry shared by rendering, fitting, and SVG emission.
// Convention: an arc runs from chord start S to chord end E turning
// clockwise on screen around its center; the center sits on the right-hand
// normal of the chord direction, so the arc bulges to the left of travel.
struct ArcGeometry {
    Vec2 start;
    Vec2 end;
    Vec2 center;
    double radius = 0.0;
    double start_angle = 0.0;  // atan2(start - center)
    double sweep = 0.0;        // clockwise extent in (0, 2*pi)
};

// chord_mid/chord_len/rotation describe the chord, sweep the subtended angle.
inline ArcGeometry make_arc(const Vec2& chord_mid, double chord_len, double rotation,
                            double sweep) {
    ArcGeometry g;
    g.sweep = std::clamp(sweep, 1e-9, kTwoPi - 1e-9);
    const Vec2 u{std::cos(rotation), std::sin(rotation)};
    const Vec2 n{-u.y, u.x};  // right of travel on screen
    g.start = chord_mid - u * (chord_len / 2.0);
    g.end = chord_mid + u * (chord_len / 2.0);
    g.radius = chord_len / (2.0 * std::sin(g.sweep / 2.0));
    g.center = chord_mid + n * (g.radius * std::cos(g.sweep / 2.0));
    g.start_angle = std::atan2(g.start.y - g.center.y, g.start.x - g.center.x);
    return g;
}

inline Vec2 arc_point(const ArcGeometry& g, double t) {
    const double phi = g.start_angle + t * g.sweep;
    return {g.center.x + g.radius * std::cos(phi), g.center.y + g.radius * std::sin(phi)};
}

inline double point_arc_distance(const Vec2& p, const ArcGeometry& g) {
    const Vec2 d = p - g.center;
    const double ang = normalize_angle(std::atan2(d.y, d.x) - g.start_angle);
    if (ang <= g.sweep) return std::abs(norm(d) - g.radius);
    return std::min(dist(p, g.start), dist(p, g.end));
}

}  // namespace shapetone
