#include "steiner/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

namespace steiner {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

double golden_minimize(double lo, double hi, const std::function<double(double)>& f,
                       double tol) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// min over t in [0,1] of f(t): coarse grid bracket plus golden refinement
double grid_golden_minimize(const std::function<double(double)>& f, int grid, double tol) {
    int best = 0;
    double best_val = f(0.0);
    for (int i = 1; i < grid; ++i) {
        const double t = static_cast<double>(i) / (grid - 1);
        const double v = f(t);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = std::max(0.0, (best - 1.0) / (grid - 1));
    const double hi = std::min(1.0, (best + 1.0) / (grid - 1));
    const double t_star = golden_minimize(lo, hi, f, tol);
    return std::min(best_val, f(t_star));
}

}  // namespace

// --- Lemma 0 ---------------------------------------------------------------

namespace {

LemmaZeroItem lemma0_item(double base, double lambda, double eps) {
    LemmaZeroItem item;
    item.tripod_upper = base + 2.0 * lambda + 20.0 * eps;
    item.two_seg_lower =
        std::sqrt(base * base + base * lambda + lambda * lambda) + kSqrt3 * lambda - 30.0 * eps;
    item.relaxed_lower = base + (0.5 + kSqrt3) * lambda - 30.0 * eps;
    item.margin_exact = item.two_seg_lower - item.tripod_upper;
    item.margin_relaxed = item.relaxed_lower - item.tripod_upper;
    item.pass = item.margin_relaxed > 0.0;
    return item;
}

}  // namespace

LemmaZeroBounds check_lemma0(double lambda) {
    LemmaZeroBounds out;
    out.lambda = lambda;
    out.epsilon = epsilon_of(lambda);  // validates the range
    out.item_i = lemma0_item(1.0, lambda, out.epsilon);
    out.item_ii = lemma0_item(0.25, lambda, out.epsilon);

    out.surgery_gain = (9.0 - 2.0 * kPi) * out.epsilon;
    out.surgery_pass = out.surgery_gain > 0.0;

    // Worst-case perturbations of B, C on the 10*eps circles: the combined
    // tripod-length change obeys the triangle-inequality bound 20*eps.
    const Point t1{1.0, 0.0};
    const Point b1{1.0 + lambda / 2.0, kSqrt3 * lambda / 2.0};
    const Point c1{1.0 + lambda / 2.0, -kSqrt3 * lambda / 2.0};
    const double rho = 10.0 * out.epsilon;
    const double base_len = distance(t1, b1) + distance(t1, c1);
    double max_delta = 0.0;
    constexpr int kDirs = 64;
    for (int i = 0; i < kDirs; ++i) {
        const double phi = 2.0 * kPi * i / kDirs;
        const Point db{rho * std::cos(phi), rho * std::sin(phi)};
        for (int j = 0; j < kDirs; ++j) {
            const double psi = 2.0 * kPi * j / kDirs;
            const Point dc{rho * std::cos(psi), rho * std::sin(psi)};
            const double len = distance(t1, b1 + db) + distance(t1, c1 + dc);
            max_delta = std::max(max_delta, std::abs(len - base_len));
        }
    }
    // radial extremes, where the bound is attained
    const Point ub = (b1 - t1) / distance(b1, t1);
    const Point uc = (c1 - t1) / distance(c1, t1);
    max_delta = std::max(max_delta, std::abs(distance(t1, b1 + ub * rho) +
                                             distance(t1, c1 + uc * rho) - base_len));
    out.perturbation_max_delta = max_delta;
    out.perturbation_bound = 20.0 * out.epsilon;
    out.perturbation_pass = max_delta <= out.perturbation_bound * (1.0 + 1e-9);

    out.pass = out.item_i.pass && out.item_ii.pass && out.surgery_pass && out.perturbation_pass;
    return out;
}

LemmaReport LemmaZeroBounds::report() const {
    LemmaReport r;
    r.name = "lemma0_bounds";
    r.inputs = {{"lambda", lambda}, {"epsilon", epsilon}};
    r.computed_values = {{"item_i_tripod_upper", item_i.tripod_upper},
                         {"item_i_two_seg_lower", item_i.two_seg_lower},
                         {"item_i_relaxed_lower", item_i.relaxed_lower},
                         {"item_ii_tripod_upper", item_ii.tripod_upper},
                         {"item_ii_two_seg_lower", item_ii.two_seg_lower},
                         {"item_ii_relaxed_lower", item_ii.relaxed_lower},
                         {"surgery_gain", surgery_gain},
                         {"perturbation_max_delta", perturbation_max_delta},
                         {"perturbation_bound", perturbation_bound}};
    r.margins = {{"item_i_relaxed", item_i.margin_relaxed},
                 {"item_i_exact", item_i.margin_exact},
                 {"item_ii_relaxed", item_ii.margin_relaxed},
                 {"item_ii_exact", item_ii.margin_exact},
                 {"surgery", surgery_gain},
                 {"perturbation", perturbation_bound - perturbation_max_delta}};
    r.tolerances = {{"margin_positive", 0.0}};
    r.pass = pass;
    return r;
}

double lemma0_margin_zero(double lo, double hi, double tol) {
    const auto margin = [](double l) { return check_lemma0(l).item_i.margin_relaxed; };
    double flo = margin(lo), fhi = margin(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw std::invalid_argument("lemma0_margin_zero: no sign change on interval");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = margin(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// --- Lemma 1 -----------------------------------------------------------------

LemmaOneConstruction build_lemma1(double lambda) {
    if (!(lambda > 0.0 && lambda < 0.25)) {
        throw std::invalid_argument("build_lemma1: lambda must lie in (0, 1/4)");
    }
    LemmaOneConstruction c;
    c.lambda = lambda;
    c.Y1 = {0.0, 0.0};
    c.T1 = {1.0, 0.0};
    c.B1 = {1.0 + lambda / 2.0, kSqrt3 * lambda / 2.0};
    c.C1 = {1.0 + lambda / 2.0, -kSqrt3 * lambda / 2.0};
    c.axis = Line({0.0, 0.0}, {1.0, 0.0});

    c.F = {1.0 + 1.5 * lambda, 0.0};
    const double half_side = (1.0 + 1.5 * lambda) / kSqrt3;  // |DE| / 2
    c.D = {0.0, half_side};
    c.E = {0.0, -half_side};

    c.Z = {1.0 + 3.0 * lambda / 8.0, 3.0 * kSqrt3 * lambda / 8.0};
    const Point df_dir{kSqrt3 / 2.0, -0.5};  // unit direction D -> F
    c.Zl = c.Z - df_dir * (lambda / 2.0);
    c.Zr = c.Z + df_dir * (lambda / 2.0);
    c.V = reflect(c.Z, c.axis);
    c.Vl = reflect(c.Zl, c.axis);
    c.Vr = reflect(c.Zr, c.axis);

    // the closed form must agree with the DF x T1B1 intersection
    const Point z_int = c.intersection_z();
    if (distance(z_int, c.Z) > 1e-12 * (1.0 + c.Z.norm())) {
        throw std::logic_error("build_lemma1: closed-form Z disagrees with intersection");
    }
    return c;
}

Point LemmaOneConstruction::intersection_z() const {
    const auto z = line_intersection(Line::through(D, F), Line::through(T1, B1));
    if (!z) throw std::logic_error("intersection_z: parallel lines");
    return *z;
}

// --- Lemma 1 decomposition ----------------------------------------------------

namespace {

// Minimal network connecting a finite point set to a segment whose interior
// is free of cost (the segment is part of the terminal set A). Each part of
// a partition attaches at one optimized contact point; parts of size one
// attach along the perpendicular.
double part_attach_cost(const Segment& seg, const std::vector<Point>& pts,
                        const std::vector<int>& part) {
    if (part.size() == 1) return point_segment_distance(pts[part[0]], seg);

    const Point d = seg.b - seg.a;
    const auto cost_at = [&](double t) {
        const Point x = seg.a + d * t;
        if (part.size() == 2) return melzak3(pts[part[0]], pts[part[1]], x).length;
        std::vector<Point> terminals;
        for (int idx : part) terminals.push_back(pts[idx]);
        terminals.push_back(x);
        return solve_steiner(terminals).length;
    };
    return grid_golden_minimize(cost_at, 65, 1e-13);
}

double segment_steiner(const Segment& seg, const std::vector<Point>& pts) {
    const int k = static_cast<int>(pts.size());
    std::vector<std::vector<std::vector<int>>> partitions;
    if (k == 1) {
        partitions = {{{0}}};
    } else if (k == 2) {
        partitions = {{{0, 1}}, {{0}, {1}}};
    } else if (k == 3) {
        partitions = {{{0, 1, 2}}, {{0}, {1, 2}}, {{1}, {0, 2}}, {{2}, {0, 1}},
                      {{0}, {1}, {2}}};
    } else {
        throw std::invalid_argument("segment_steiner: at most three points supported");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& partition : partitions) {
        double total = 0.0;
        for (const auto& part : partition) total += part_attach_cost(seg, pts, part);
        best = std::min(best, total);
    }
    return best;
}

}  // namespace

LemmaOneDecomposition check_lemma1_decomposition(double lambda, int samples_per_ball) {
    if (samples_per_ball < 1 || samples_per_ball > 3) {
        throw std::invalid_argument("check_lemma1_decomposition: samples_per_ball in {1,2,3}");
    }
    const LemmaOneConstruction frame = build_lemma1(lambda);
    const double eps = epsilon_of(lambda);

    LemmaOneDecomposition out;
    out.lambda = lambda;
    out.samples_per_ball = samples_per_ball;

    // deterministic, asymmetric-within-ball placements, mirror-paired below
    const double radii[3] = {0.0, 0.45 * eps, 0.8 * eps};
    const double phis[3] = {0.0, 0.7, 3.5};
    out.b_points.push_back(frame.B1);
    for (int i = 1; i < samples_per_ball; ++i) {
        out.b_points.push_back(frame.B1 +
                               Point{radii[i] * std::cos(phis[i]), radii[i] * std::sin(phis[i])});
    }
    for (const Point& p : out.b_points) out.c_points.push_back(reflect(p, frame.axis));

    std::vector<Point> terminals = {frame.Y1};
    terminals.insert(terminals.end(), out.b_points.begin(), out.b_points.end());
    terminals.insert(terminals.end(), out.c_points.begin(), out.c_points.end());
    const SteinerSolution full = solve_steiner(terminals);
    out.full_length = full.length;

    // tripod family through the segments: constant length by Viviani
    {
        const Point d = frame.Zr - frame.Zl;
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double mid_val = 0.0;
        constexpr int kGrid = 11;
        for (int i = 0; i < kGrid; ++i) {
            const double t = static_cast<double>(i) / (kGrid - 1);
            const Point x = frame.Zl + d * t;
            const double len = melzak3(frame.Y1, x, reflect(x, frame.axis)).length;
            lo = std::min(lo, len);
            hi = std::max(hi, len);
            if (i == kGrid / 2) mid_val = len;
        }
        out.mid_length = mid_val;
        out.mid_constancy = hi - lo;
    }

    out.up_length = segment_steiner(Segment(frame.Zl, frame.Zr), out.b_points);
    out.down_length = segment_steiner(Segment(frame.Vl, frame.Vr), out.c_points);

    out.decomposition_gap =
        std::abs(out.full_length - (out.mid_length + out.up_length + out.down_length));

    // the mirrored optimum is feasible for the same terminal set
    {
        std::vector<Point> pos(full.topology.node_count());
        for (std::size_t i = 0; i < terminals.size(); ++i) pos[i] = terminals[i];
        for (std::size_t s = 0; s < full.steiner_points.size(); ++s) {
            pos[terminals.size() + s] = full.steiner_points[s];
        }
        double reflected_len = 0.0;
        for (const auto& [u, v] : full.topology.adjacency) {
            reflected_len += distance(reflect(pos[u], frame.axis), reflect(pos[v], frame.axis));
        }
        out.reflected_gap = std::abs(reflected_len - full.length);
    }

    out.pass = out.decomposition_gap <= 1e-8 && out.reflected_gap <= 1e-10;
    return out;
}

LemmaReport LemmaOneDecomposition::report() const {
    LemmaReport r;
    r.name = "lemma1_decomposition";
    r.inputs = {{"lambda", lambda}, {"samples_per_ball", static_cast<double>(samples_per_ball)}};
    r.computed_values = {{"full_length", full_length},
                         {"mid_length", mid_length},
                         {"up_length", up_length},
                         {"down_length", down_length},
                         {"mid_constancy", mid_constancy}};
    r.margins = {{"decomposition_gap", decomposition_gap}, {"reflected_gap", reflected_gap}};
    r.tolerances = {{"decomposition_gap", 1e-8}, {"reflected_gap", 1e-10}};
    r.pass = pass;
    return r;
}

// --- Lemma 2 -------------------------------------------------------------------

namespace {

struct Lemma2Frame {
    Point Y2{0.0, 0.0};
    Point T2{0.25, 0.0};
    Point B2, C2, Y_up{0.0, 0.5}, Y_down{0.0, -0.5};
};

Lemma2Frame lemma2_frame(double lambda) {
    if (!(lambda > 0.0 && lambda < 0.25)) {
        throw std::invalid_argument("lemma2: lambda must lie in (0, 1/4)");
    }
    Lemma2Frame f;
    f.B2 = {0.25 + lambda / 2.0, kSqrt3 * lambda / 2.0};
    f.C2 = {0.25 + lambda / 2.0, -kSqrt3 * lambda / 2.0};
    return f;
}

}  // namespace

LemmaTwoScenario check_lemma2_shift(double lambda, double h) {
    const Lemma2Frame f = lemma2_frame(lambda);
    if (std::abs(h) > lambda) {
        throw std::invalid_argument("check_lemma2_shift: |h| must not exceed lambda");
    }

    LemmaTwoScenario out;
    out.lambda = lambda;
    out.h = h;
    out.Y2 = f.Y2;
    out.T2 = f.T2;
    out.B2 = f.B2;
    out.C2 = f.C2;
    out.Y_up = f.Y_up;
    out.Y_down = f.Y_down;

    // Perpendicular-stem tripod through contact (0, h): stem to J, exact
    // +-2pi/3 legs up to the cut line through L = S intersect l2, then
    // straight pieces to the terminals. All lengths are mirror-symmetric
    // in h, so work with |h|.
    const double ha = std::abs(h);
    const double xj = 0.25;
    const double xl = xj + ha / kSqrt3;
    out.stem_part = xj + 4.0 * ha / kSqrt3;  // H(S_Y)

    const Point l_point{xl, 0.0};
    const Point q_up{xl, 2.0 * ha};
    const Point q_down{xl, -2.0 * ha};
    out.ell_b = distance(q_up, f.B2);
    out.ell_c = distance(l_point, f.C2);

    out.H_S = out.stem_part + out.ell_b + out.ell_c;
    out.H_S1 = xl + 2.0 * out.ell_c;
    const double t_len = (ha == 0.0) ? xl : melzak3(f.Y2, q_up, q_down).length;
    out.H_S2 = t_len + 2.0 * out.ell_b;

    out.competitor1_gap =
        std::abs(out.H_S1 - (out.stem_part - kSqrt3 * ha + 2.0 * out.ell_c));
    out.competitor2_gap =
        std::abs(out.H_S2 - (out.stem_part + kSqrt3 * ha + 2.0 * out.ell_b));
    out.averaging_gap = std::abs(out.H_S - 0.5 * (out.H_S1 + out.H_S2));
    out.strict_improvement = std::min(out.H_S1, out.H_S2) < out.H_S;

    const bool improvement_consistent =
        (ha == 0.0) ? std::abs(out.H_S1 - out.H_S2) <= 1e-12
                    : (out.strict_improvement || std::abs(out.H_S1 - out.H_S2) <= 1e-12);
    out.pass = out.averaging_gap <= 1e-10 && out.competitor1_gap <= 1e-10 &&
               out.competitor2_gap <= 1e-10 && improvement_consistent;
    return out;
}

LemmaReport LemmaTwoScenario::report() const {
    LemmaReport r;
    r.name = "lemma2_shift";
    r.inputs = {{"lambda", lambda}, {"h", h}};
    r.computed_values = {{"H_S", H_S},       {"H_S1", H_S1},   {"H_S2", H_S2},
                         {"S_Y", stem_part}, {"ell_b", ell_b}, {"ell_c", ell_c}};
    r.margins = {{"averaging_gap", averaging_gap},
                 {"competitor1_gap", competitor1_gap},
                 {"competitor2_gap", competitor2_gap}};
    r.tolerances = {{"averaging_gap", 1e-10},
                    {"competitor1_gap", 1e-10},
                    {"competitor2_gap", 1e-10}};
    r.pass = pass;
    return r;
}

double lemma2_contact_length(double lambda, double h) {
    const Lemma2Frame f = lemma2_frame(lambda);
    if (std::abs(h) > 0.5) {
        throw std::invalid_argument("lemma2_contact_length: contact must lie on [Y_up Y_down]");
    }
    return melzak3(Point{0.0, h}, f.B2, f.C2).length;
}

double lemma2_optimal_contact(double lambda, int grid_points) {
    if (grid_points < 3) throw std::invalid_argument("lemma2_optimal_contact: grid too small");
    const auto f = [&](double t) {
        const double h = -lambda + 2.0 * lambda * t;
        return lemma2_contact_length(lambda, h);
    };
    int best = 0;
    double best_val = f(0.0);
    for (int i = 1; i < grid_points; ++i) {
        const double t = static_cast<double>(i) / (grid_points - 1);
        const double v = f(t);
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }
    const double lo = std::max(0.0, (best - 1.0) / (grid_points - 1));
    const double hi = std::min(1.0, (best + 1.0) / (grid_points - 1));
    const double t_star = golden_minimize(lo, hi, f, 1e-13);
    return -lambda + 2.0 * lambda * t_star;
}

// --- theorem check ---------------------------------------------------------------

TheoremReport check_theorem(double lambda, int depth, const SolveOptions& opts) {
    if (!(lambda > 0.0 && lambda < 0.5)) {
        throw std::invalid_argument("check_theorem: lambda must lie in (0, 1/2)");
    }
    if (depth < 2 || depth > 4) {
        throw std::invalid_argument(
            "check_theorem: depth must lie in [2, 4]; deeper truncations blow up the "
            "topology enumeration");
    }

    const LambdaSequence seq = LambdaSequence::constant(lambda);
    const EmbeddedTree tree = build_sigma(seq, depth);

    std::vector<Point> terminals = {tree.vertices[0]};
    for (int k : tree.leaf_indices()) terminals.push_back(tree.vertices[k]);

    TheoremReport out;
    out.lambda = lambda;
    out.depth = depth;
    out.truncation_length = total_length(seq, depth);
    out.solution = (terminals.size() == 3)
                       ? melzak3(terminals[0], terminals[1], terminals[2])
                       : solve_steiner(terminals, opts);
    out.oracle_length = out.solution.length;
    out.relative_gap =
        std::abs(out.truncation_length - out.oracle_length) / out.oracle_length;

    double sum = 0.0, term = 1.0;
    for (int k = 0; k < depth; ++k) {
        sum += term;
        out.per_step_lower_bounds.push_back(sum);
        term *= 2.0 * lambda;
    }
    return out;
}

LemmaReport TheoremReport::report() const {
    LemmaReport r;
    r.name = "theorem_truncation";
    r.inputs = {{"lambda", lambda}, {"depth", static_cast<double>(depth)}};
    r.computed_values = {{"truncation_length", truncation_length},
                         {"oracle_length", oracle_length}};
    r.margins = {{"relative_gap", relative_gap}};
    r.tolerances = {{"relative_gap", 1e-9}};
    r.pass = relative_gap < 1e-9;
    return r;
}

// --- box counting -------------------------------------------------------------------

double estimate_dimension(std::span<const Point> points, std::span<const double> scales) {
    if (points.empty()) throw std::invalid_argument("estimate_dimension: no points");
    std::set<double> distinct(scales.begin(), scales.end());
    if (distinct.size() < 2) {
        throw std::invalid_argument("estimate_dimension: need at least two distinct scales");
    }
    for (double s : scales) {
        if (!(s > 0.0)) throw std::invalid_argument("estimate_dimension: scales must be positive");
    }

    std::vector<double> xs, ys;
    for (double s : scales) {
        std::set<std::pair<long long, long long>> cells;
        for (const Point& p : points) {
            cells.emplace(static_cast<long long>(std::floor(p.x / s)),
                          static_cast<long long>(std::floor(p.y / s)));
        }
        xs.push_back(std::log(1.0 / s));
        ys.push_back(std::log(static_cast<double>(cells.size())));
    }

    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

}  // namespace steiner
