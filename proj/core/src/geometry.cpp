#include "steiner/geometry.hpp"

#include <algorithm>
#include <array>
#include <string>

namespace steiner {

void require_finite(const Point& p, const char* what) {
    if (!is_finite(p)) {
        throw std::invalid_argument(std::string(what) + ": coordinates must be finite");
    }
}

Segment::Segment(Point pa, Point pb) : a(pa), b(pb) {
    require_finite(a, "Segment");
    require_finite(b, "Segment");
    if (a == b) throw std::invalid_argument("Segment: endpoints must be distinct");
}

Line::Line(Point o, Point dir) : origin(o), direction(dir) {
    require_finite(origin, "Line");
    require_finite(direction, "Line");
    const double n = direction.norm();
    if (n == 0.0) throw std::invalid_argument("Line: zero direction");
    if (std::abs(n - 1.0) > 1e-12) {
        direction = direction / n;
    }
}

Line Line::through(const Point& p, const Point& q) {
    const Point d = q - p;
    const double n = d.norm();
    if (n == 0.0) throw std::invalid_argument("Line::through: coincident points");
    return Line(p, d / n);
}

double angle_at(const Point& vertex, const Point& p, const Point& q) {
    require_finite(vertex, "angle_at");
    require_finite(p, "angle_at");
    require_finite(q, "angle_at");
    const Point u = p - vertex;
    const Point v = q - vertex;
    if (u.norm2() == 0.0 || v.norm2() == 0.0) {
        throw std::invalid_argument("angle_at: zero-length ray");
    }
    return std::atan2(std::abs(cross(u, v)), dot(u, v));
}

Point reflect(const Point& p, const Line& axis) {
    require_finite(p, "reflect");
    const Point v = p - axis.origin;
    const Point par = axis.direction * dot(v, axis.direction);
    const Point perp = v - par;
    return axis.origin + par - perp;
}

double point_line_distance(const Point& p, const Line& line) {
    require_finite(p, "point_line_distance");
    return std::abs(cross(line.direction, p - line.origin));
}

double point_segment_distance(const Point& p, const Segment& s) {
    require_finite(p, "point_segment_distance");
    const Point d = s.b - s.a;
    const double t = std::clamp(dot(p - s.a, d) / d.norm2(), 0.0, 1.0);
    return distance(p, s.a + d * t);
}

std::optional<Point> line_intersection(const Line& l1, const Line& l2) {
    const double denom = cross(l1.direction, l2.direction);
    if (denom == 0.0) return std::nullopt;
    const double t = cross(l2.origin - l1.origin, l2.direction) / denom;
    return l1.origin + l1.direction * t;
}

// --- exact orientation -------------------------------------------------

namespace {

// Error-free transforms (Dekker/Knuth); products rely on fma.
inline void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    const double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
}

inline void two_product(double a, double b, double& p, double& e) {
    p = a * b;
    e = std::fma(a, b, -p);
}

// Nonoverlapping expansion kept sorted by increasing magnitude.
// Sizes here stay tiny (<= 12 terms) so the quadratic growth is irrelevant.
struct Expansion {
    std::array<double, 24> c{};
    int n = 0;

    void add(double b) {
        double q = b;
        int m = 0;
        for (int i = 0; i < n; ++i) {
            double s, e;
            two_sum(q, c[i], s, e);
            if (e != 0.0) c[m++] = e;
            q = s;
        }
        c[m++] = q;
        n = m;
    }

    int sign() const {
        for (int i = n - 1; i >= 0; --i) {
            if (c[i] != 0.0) return c[i] > 0.0 ? 1 : -1;
        }
        return 0;
    }
};

int orient2d_exact(const Point& a, const Point& b, const Point& c) {
    // det = ax*by - ax*cy + ay*cx - ay*bx + bx*cy - by*cx
    const double terms[6][2] = {{a.x, b.y}, {-a.x, c.y}, {a.y, c.x},
                                {-a.y, b.x}, {b.x, c.y}, {-b.y, c.x}};
    Expansion exp;
    for (const auto& t : terms) {
        double p, e;
        two_product(t[0], t[1], p, e);
        if (e != 0.0) exp.add(e);
        if (p != 0.0) exp.add(p);
    }
    return exp.sign();
}

}  // namespace

int orient2d(const Point& a, const Point& b, const Point& c) {
    const double detleft = (a.x - c.x) * (b.y - c.y);
    const double detright = (a.y - c.y) * (b.x - c.x);
    const double det = detleft - detright;

    double detsum;
    if (detleft > 0.0) {
        if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
        detsum = detleft + detright;
    } else if (detleft < 0.0) {
        if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
        detsum = -detleft - detright;
    } else {
        return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    }

    // Shewchuk's static filter for the two-product difference.
    constexpr double kErrBound = 3.3306690738754716e-16;
    if (std::abs(det) >= kErrBound * detsum) {
        return det > 0.0 ? 1 : -1;
    }
    return orient2d_exact(a, b, c);
}

// --- segment intersection ----------------------------------------------

namespace {

bool on_segment_collinear(const Point& p, const Segment& s) {
    // assumes p collinear with s
    return std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
           std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

}  // namespace

bool segments_intersect(const Segment& s1, const Segment& s2) {
    // Shared declared endpoints are adjacency, not intersection.
    int shared = 0;
    Point e{}, u{}, v{};
    if (s1.a == s2.a) { ++shared; e = s1.a; u = s1.b; v = s2.b; }
    if (s1.a == s2.b) { ++shared; e = s1.a; u = s1.b; v = s2.a; }
    if (s1.b == s2.a) { ++shared; e = s1.b; u = s1.a; v = s2.b; }
    if (s1.b == s2.b) { ++shared; e = s1.b; u = s1.a; v = s2.a; }

    if (shared >= 2) return true;  // identical segments
    if (shared == 1) {
        if (orient2d(e, u, v) != 0) return false;  // touch only at the endpoint
        return dot(u - e, v - e) > 0.0;            // collinear: overlap beyond e?
    }

    const int d1 = orient2d(s2.a, s2.b, s1.a);
    const int d2 = orient2d(s2.a, s2.b, s1.b);
    const int d3 = orient2d(s1.a, s1.b, s2.a);
    const int d4 = orient2d(s1.a, s1.b, s2.b);

    if (d1 * d2 < 0 && d3 * d4 < 0) return true;

    if (d1 == 0 && on_segment_collinear(s1.a, s2)) return true;
    if (d2 == 0 && on_segment_collinear(s1.b, s2)) return true;
    if (d3 == 0 && on_segment_collinear(s2.a, s1)) return true;
    if (d4 == 0 && on_segment_collinear(s2.b, s1)) return true;
    return false;
}

// --- Fermat point -------------------------------------------------------

namespace {

// Apex of the equilateral triangle erected on [p,q] on the side away from r.
Point equilateral_apex(const Point& p, const Point& q, const Point& r) {
    const Point mid = (p + q) * 0.5;
    const Point d = q - p;
    const Point perp{-d.y, d.x};
    const Point apex1 = mid + perp * (std::sqrt(3.0) / 2.0);
    const Point apex2 = mid - perp * (std::sqrt(3.0) / 2.0);
    // pick the apex on the opposite side of pq from r
    const int side_r = orient2d(p, q, r);
    const int side_1 = orient2d(p, q, apex1);
    return (side_1 == side_r) ? apex2 : apex1;
}

// Intersection of lines through (p1,p2) and (q1,q2).
Point line_intersection(const Point& p1, const Point& p2, const Point& q1, const Point& q2) {
    const Point dp = p2 - p1;
    const Point dq = q2 - q1;
    const double denom = cross(dp, dq);
    const double t = cross(q1 - p1, dq) / denom;
    return p1 + dp * t;
}

}  // namespace

FermatResult fermat_point(const Point& a, const Point& b, const Point& c) {
    require_finite(a, "fermat_point");
    require_finite(b, "fermat_point");
    require_finite(c, "fermat_point");
    if (a == b || b == c || a == c) {
        throw std::invalid_argument("fermat_point: input points must be pairwise distinct");
    }

    const double alpha = angle_at(a, b, c);
    const double beta = angle_at(b, a, c);
    const double gamma = angle_at(c, a, b);

    FermatResult res;
    if (alpha >= kDegenerateAngle || beta >= kDegenerateAngle || gamma >= kDegenerateAngle) {
        res.degenerate = true;
        if (alpha >= beta && alpha >= gamma) {
            res.point = a;
            res.attained_at_vertex = 0;
            res.tripod_length = distance(a, b) + distance(a, c);
        } else if (beta >= gamma) {
            res.point = b;
            res.attained_at_vertex = 1;
            res.tripod_length = distance(b, a) + distance(b, c);
        } else {
            res.point = c;
            res.attained_at_vertex = 2;
            res.tripod_length = distance(c, a) + distance(c, b);
        }
        return res;
    }

    // Torricelli: the Simpson segments a--a* and b--b* meet at the Fermat
    // point and each has length equal to the minimal tripod.
    const Point apex_a = equilateral_apex(b, c, a);
    const Point apex_b = equilateral_apex(a, c, b);
    res.point = line_intersection(a, apex_a, b, apex_b);
    res.tripod_length = distance(a, apex_a);
    return res;
}

double distance_sum_to_sides(const Point& p, const Point& a, const Point& b, const Point& c) {
    require_finite(p, "distance_sum_to_sides");
    const double lab = distance(a, b);
    const double lbc = distance(b, c);
    const double lca = distance(c, a);
    const double scale = std::max({lab, lbc, lca});
    if (scale == 0.0) throw std::invalid_argument("distance_sum_to_sides: degenerate triangle");
    if (std::abs(lab - lbc) > 1e-9 * scale || std::abs(lbc - lca) > 1e-9 * scale ||
        std::abs(lab - lca) > 1e-9 * scale) {
        throw std::invalid_argument("distance_sum_to_sides: triangle not equilateral");
    }

    const int s1 = orient2d(a, b, p);
    const int s2 = orient2d(b, c, p);
    const int s3 = orient2d(c, a, p);
    const bool inside = (s1 >= 0 && s2 >= 0 && s3 >= 0) || (s1 <= 0 && s2 <= 0 && s3 <= 0);
    if (!inside) throw std::invalid_argument("distance_sum_to_sides: point outside triangle");

    return point_line_distance(p, Line::through(a, b)) +
           point_line_distance(p, Line::through(b, c)) +
           point_line_distance(p, Line::through(c, a));
}

}  // namespace steiner
