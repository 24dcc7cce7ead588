#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "steiner/geometry.hpp"

namespace steiner {

/// The sequence of edge-length ratios between consecutive levels of the
/// embedded binary tree. Either a single constant ratio or an explicit
/// finite list.
class LambdaSequence {
public:
    static LambdaSequence constant(double lambda);
    static LambdaSequence explicit_values(std::vector<double> values);

    /// lambda_i, the ratio between level-(i+1) and level-i edges.
    double effective(std::size_t i) const;

    bool is_constant() const { return constant_; }
    double constant_value() const;
    std::size_t available() const;  // number of ratios on hand

    /// Constant-ratio regime lambda < 1/300.
    bool satisfies_constant_regime() const;
    /// Summable regime: every ratio < 1/5000 and the series sum < pi/5040.
    /// A constant sequence never satisfies it (the series diverges).
    bool satisfies_summable_regime() const;

private:
    LambdaSequence() = default;
    bool constant_ = false;
    double lambda_ = 0.0;
    std::vector<double> values_;
};

/// Finite-depth embedding of the infinite binary tree: root y0 = (0,0),
/// first vertex y1 = (1,0), children of y_k at indices 2k and 2k+1.
struct EmbeddedTree {
    std::vector<Point> vertices;  // index k; size 2^depth, vertices[0] = y0
    std::vector<std::pair<int, int>> edges;  // (parent, child), child >= 1
    int depth = 0;

    /// Level of vertex k: 0 for y0 and y1, floor(log2 k) otherwise.
    /// The edge into vertex k (k >= 1) has level floor(log2 k).
    static int level_of(int k);

    /// Length of a level-i edge: product of lambda_0 .. lambda_{i-1}.
    double edge_length(int level) const;

    std::vector<int> leaf_indices() const;  // indices 2^(depth-1) .. 2^depth - 1

    std::vector<double> level_lengths;  // level_lengths[i] = edge length at level i
};

/// Set of (truncated) terminal positions of the limit leaf set, with a
/// certified positional tolerance from the geometric tail bound.
struct TerminalSet {
    std::vector<Point> points;
    bool includes_root = false;
    double tolerance = 0.0;    // guaranteed max positional error
    int truncation_depth = 0;  // N: points are leaves of the depth-(N+1) tree
};

struct ValidationReport {
    std::vector<std::pair<std::size_t, std::size_t>> crossing_edges;  // indices into edges
    double max_angle_deviation = 0.0;
    double max_ratio_deviation = 0.0;
    bool valid = false;
};

/// Build the depth-`depth` realization. Child edges leave the parent edge
/// direction at +pi/3 (left child, even index) and -pi/3 (right child).
EmbeddedTree build_sigma(const LambdaSequence& seq, int depth);

/// Truncated terminal positions with tail below `tol`. The truncation depth
/// N is the smallest one whose residual series is below tol; the points are
/// the 2^N leaves of the depth-(N+1) tree.
TerminalSet terminal_set(const LambdaSequence& seq, double tol, bool include_root = false);

/// Total edge length of the depth-`depth` truncation:
/// sum over levels i < depth of 2^i * (level-i edge length).
double total_length(const LambdaSequence& seq, int depth);

/// Limit length for a constant ratio lambda < 1/2: 1 / (1 - 2 lambda).
double total_length(const LambdaSequence& seq);

/// lambda^2 / (1 - lambda), the radius bounding the distance from a level-2
/// vertex to all of its descendant terminals.
double epsilon_of(double lambda);

/// -ln 2 / ln lambda for 0 < lambda < 1/2.
double hausdorff_dimension_formula(double lambda);

/// Pairwise edge-intersection scan plus branching-angle and level-ratio
/// deviation report. Valid iff no crossings and both deviations below 1e-9.
ValidationReport validate_embedding(const EmbeddedTree& tree);

}  // namespace steiner
