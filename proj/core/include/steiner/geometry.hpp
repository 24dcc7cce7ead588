#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

namespace steiner {

inline constexpr double kPi = 3.14159265358979323846;
// Interior angles at or above this are treated as degenerate Fermat cases.
inline constexpr double kDegenerateAngle = 2.0 * kPi / 3.0 - 1e-12;

struct Point {
    double x{0.0};
    double y{0.0};

    constexpr Point() = default;
    constexpr Point(double px, double py) : x(px), y(py) {}

    constexpr Point operator+(const Point& r) const { return {x + r.x, y + r.y}; }
    constexpr Point operator-(const Point& r) const { return {x - r.x, y - r.y}; }
    constexpr Point operator*(double s) const { return {x * s, y * s}; }
    constexpr Point operator/(double s) const { return {x / s, y / s}; }
    constexpr bool operator==(const Point& r) const { return x == r.x && y == r.y; }

    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }
};

inline constexpr Point operator*(double s, const Point& p) { return p * s; }

inline constexpr double dot(const Point& a, const Point& b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }
inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

inline bool is_finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

void require_finite(const Point& p, const char* what);

/// Rotate `p` by `angle` radians counterclockwise about the origin.
inline Point rotate(const Point& p, double angle) {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

struct Segment {
    Point a;
    Point b;

    Segment(Point pa, Point pb);
    double length() const { return distance(a, b); }
    Point midpoint() const { return (a + b) * 0.5; }
};

/// A line given by a point and a unit direction.
struct Line {
    Point origin;
    Point direction;  // unit norm, validated on construction

    Line(Point o, Point dir);
    static Line through(const Point& p, const Point& q);
};

struct FermatResult {
    Point point;
    bool degenerate{false};
    double tripod_length{0.0};
    std::optional<int> attained_at_vertex;  // 0, 1 or 2 when degenerate
};

/// Fermat--Torricelli point of triangle abc: the minimizer of |pa|+|pb|+|pc|.
/// Uses the equilateral-third-point (Torricelli/Simpson line) construction;
/// when an interior angle reaches 2pi/3 the minimum sits at that vertex.
FermatResult fermat_point(const Point& a, const Point& b, const Point& c);

/// Unsigned angle in [0, pi] between rays vertex->p and vertex->q.
double angle_at(const Point& vertex, const Point& p, const Point& q);

/// Mirror image of p across the axis.
Point reflect(const Point& p, const Line& axis);

/// Exact sign of the orientation test: +1 if a,b,c counterclockwise,
/// -1 if clockwise, 0 if collinear. Robust: falls back to error-free
/// expansion arithmetic when the double-precision result is not trustworthy.
int orient2d(const Point& a, const Point& b, const Point& c);

/// True iff the closed segments share a point other than a shared declared
/// endpoint (segments that are adjacent through a common endpoint do not
/// count as intersecting; interior touching and overlap do).
bool segments_intersect(const Segment& s1, const Segment& s2);

/// Sum of distances from p to the three side lines of the equilateral
/// triangle abc. By Viviani's theorem this equals the triangle height for
/// every p inside or on the boundary.
double distance_sum_to_sides(const Point& p, const Point& a, const Point& b, const Point& c);

/// Distance from p to the closed segment s.
double point_segment_distance(const Point& p, const Segment& s);

/// Distance from p to the infinite line through the axis.
double point_line_distance(const Point& p, const Line& line);

/// Intersection point of two lines; empty when (numerically) parallel.
std::optional<Point> line_intersection(const Line& l1, const Line& l2);

}  // namespace steiner
