#pragma once

#include <map>
#include <string>
#include <vector>

#include "steiner/fractal.hpp"
#include "steiner/geometry.hpp"
#include "steiner/solver.hpp"

namespace steiner {

/// Named inequality/identity results with signed margins and pass flags.
struct LemmaReport {
    std::string name;
    std::map<std::string, double> inputs;
    std::map<std::string, double> computed_values;
    std::map<std::string, double> margins;
    std::map<std::string, double> tolerances;
    bool pass = false;
};

// --- Lemma 0: tripod vs two-segment bounds and circle surgery -------------

struct LemmaZeroItem {
    double tripod_upper = 0.0;     // base + 2*lambda + 20*eps
    double two_seg_lower = 0.0;    // exact two-segment bound - 30*eps
    double relaxed_lower = 0.0;    // base + (1/2 + sqrt(3))*lambda - 30*eps
    double margin_exact = 0.0;     // two_seg_lower - tripod_upper
    double margin_relaxed = 0.0;   // relaxed_lower - tripod_upper
    bool pass = false;             // margin_relaxed > 0
};

struct LemmaZeroBounds {
    double lambda = 0.0;
    double epsilon = 0.0;
    LemmaZeroItem item_i;   // base |Y1 T1| = 1
    LemmaZeroItem item_ii;  // base |Y2 T2| = 1/4
    double surgery_gain = 0.0;  // 2*9*eps - (2*pi + 9)*eps = (9 - 2*pi)*eps
    bool surgery_pass = false;  // 2*pi < 9, parameter-free
    double perturbation_max_delta = 0.0;  // worst |Delta| over 10*eps perturbations
    double perturbation_bound = 0.0;      // 20*eps
    bool perturbation_pass = false;
    bool pass = false;

    LemmaReport report() const;
};

LemmaZeroBounds check_lemma0(double lambda);

/// Bisection for the ratio where the relaxed item margin changes sign.
double lemma0_margin_zero(double lo, double hi, double tol = 1e-12);

// --- Lemma 1: the DEF frame ------------------------------------------------

struct LemmaOneConstruction {
    double lambda = 0.0;
    Point Y1, T1, B1, C1;
    Point D, E, F;
    Point Z, Zl, Zr;  // on side DF, |Zl Zr| = lambda, Z at the center
    Point V, Vl, Vr;  // mirror images on side EF
    Line axis{Point{0.0, 0.0}, Point{1.0, 0.0}};  // l1, through Y1 and T1

    /// Z recomputed as the DF/T1B1 line intersection (the paper closed form
    /// is what the struct stores; this is the independent route).
    Point intersection_z() const;
};

LemmaOneConstruction build_lemma1(double lambda);

struct LemmaOneDecomposition {
    double lambda = 0.0;
    int samples_per_ball = 0;
    std::vector<Point> b_points, c_points;
    double full_length = 0.0;  // oracle on {Y1} + b + c
    double mid_length = 0.0;   // tripod family through the Z/V segments
    double up_length = 0.0;    // segment + b
    double down_length = 0.0;  // segment + c
    double decomposition_gap = 0.0;  // |full - (mid + up + down)|
    double reflected_gap = 0.0;      // |length(S) - length(mirror S)|
    double mid_constancy = 0.0;      // max spread of the tripod family lengths
    bool pass = false;

    LemmaReport report() const;
};

LemmaOneDecomposition check_lemma1_decomposition(double lambda, int samples_per_ball);

// --- Lemma 2: contact-shift competitors ------------------------------------

struct LemmaTwoScenario {
    double lambda = 0.0;
    double h = 0.0;
    Point Y2, T2, B2, C2, Y_up, Y_down;
    double H_S = 0.0;   // constructed network through contact offset h
    double H_S1 = 0.0;  // straight [Y2 L] competitor
    double H_S2 = 0.0;  // tripod-T competitor
    double stem_part = 0.0;  // H(S_Y), the part left of the cut line
    double ell_b = 0.0, ell_c = 0.0;
    double averaging_gap = 0.0;    // |H_S - (H_S1 + H_S2)/2|
    double competitor1_gap = 0.0;  // |H_S1 - (H(S_Y) - sqrt(3) h + 2 ell_c)|
    double competitor2_gap = 0.0;  // |H_S2 - (H(S_Y) + sqrt(3) h + 2 ell_b)|
    bool strict_improvement = false;  // min(H_S1, H_S2) < H_S (expected iff h != 0)
    bool pass = false;

    LemmaReport report() const;
};

LemmaTwoScenario check_lemma2_shift(double lambda, double h);

/// Length of the minimal network connecting the contact point (0, h) on
/// [Y_up Y_down] with {B2, C2}; used to locate the optimal contact offset.
double lemma2_contact_length(double lambda, double h);

/// Grid + golden-section minimizer of lemma2_contact_length over [-lambda, lambda].
double lemma2_optimal_contact(double lambda, int grid_points = 201);

// --- Theorem check ----------------------------------------------------------

struct TheoremReport {
    double lambda = 0.0;
    int depth = 0;
    double truncation_length = 0.0;
    double oracle_length = 0.0;
    double relative_gap = 0.0;
    std::vector<double> per_step_lower_bounds;  // partial sums of (2 lambda)^i
    SteinerSolution solution;

    LemmaReport report() const;
};

TheoremReport check_theorem(double lambda, int depth, const SolveOptions& opts = {});

// --- box-counting dimension --------------------------------------------------

/// Least-squares slope of log N(s) against log(1/s) on grids anchored at the
/// origin, where N(s) counts occupied cells of size s.
double estimate_dimension(std::span<const Point> points, std::span<const double> scales);

}  // namespace steiner
