#include "steiner/fractal.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace steiner {

// Ratios above 1/2 leave the Steiner regime (the total length series
// diverges) but still embed at finite depth; generate/render use that to
// exhibit self-crossing embeddings.
LambdaSequence LambdaSequence::constant(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("LambdaSequence: lambda must lie in (0, 1)");
    }
    LambdaSequence s;
    s.constant_ = true;
    s.lambda_ = lambda;
    return s;
}

LambdaSequence LambdaSequence::explicit_values(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("LambdaSequence: empty ratio list");
    for (double v : values) {
        if (!(v > 0.0 && v < 0.5)) {
            throw std::invalid_argument("LambdaSequence: every ratio must lie in (0, 1/2)");
        }
    }
    LambdaSequence s;
    s.values_ = std::move(values);
    return s;
}

double LambdaSequence::effective(std::size_t i) const {
    if (constant_) return lambda_;
    if (i >= values_.size()) {
        throw std::invalid_argument("LambdaSequence: ratio index beyond explicit list");
    }
    return values_[i];
}

double LambdaSequence::constant_value() const {
    if (!constant_) throw std::invalid_argument("LambdaSequence: not a constant sequence");
    return lambda_;
}

std::size_t LambdaSequence::available() const {
    return constant_ ? std::numeric_limits<std::size_t>::max() : values_.size();
}

bool LambdaSequence::satisfies_constant_regime() const {
    return constant_ && lambda_ < 1.0 / 300.0;
}

bool LambdaSequence::satisfies_summable_regime() const {
    if (constant_) return false;  // constant series diverges
    double sum = 0.0;
    for (double v : values_) {
        if (v >= 1.0 / 5000.0) return false;
        sum += v;
    }
    return sum < kPi / 5040.0;
}

int EmbeddedTree::level_of(int k) {
    if (k < 0) throw std::invalid_argument("level_of: negative index");
    if (k <= 1) return 0;
    return std::bit_width(static_cast<unsigned>(k)) - 1;
}

double EmbeddedTree::edge_length(int level) const {
    if (level < 0 || level >= static_cast<int>(level_lengths.size())) {
        throw std::invalid_argument("edge_length: level out of range");
    }
    return level_lengths[level];
}

std::vector<int> EmbeddedTree::leaf_indices() const {
    std::vector<int> out;
    const int lo = 1 << (depth - 1);
    const int hi = 1 << depth;
    out.reserve(hi - lo);
    for (int k = lo; k < hi; ++k) out.push_back(k);
    return out;
}

EmbeddedTree build_sigma(const LambdaSequence& seq, int depth) {
    if (depth < 1) throw std::invalid_argument("build_sigma: depth must be >= 1");
    if (!seq.is_constant() && seq.available() + 1 < static_cast<std::size_t>(depth)) {
        throw std::invalid_argument("build_sigma: explicit sequence too short for depth");
    }

    EmbeddedTree tree;
    tree.depth = depth;
    const int size = 1 << depth;
    tree.vertices.assign(size, Point{});
    tree.vertices[0] = Point{0.0, 0.0};
    tree.vertices[1] = Point{1.0, 0.0};
    tree.edges.emplace_back(0, 1);

    tree.level_lengths.resize(depth);
    tree.level_lengths[0] = 1.0;
    for (int i = 1; i < depth; ++i) {
        tree.level_lengths[i] = tree.level_lengths[i - 1] * seq.effective(i - 1);
    }

    // directions[k]: unit direction of the edge into vertex k
    std::vector<Point> directions(size);
    directions[1] = Point{1.0, 0.0};

    for (int k = 1; k < size / 2; ++k) {
        const int child_level = EmbeddedTree::level_of(2 * k);
        const double len = tree.level_lengths[child_level];
        const Point dir_left = rotate(directions[k], kPi / 3.0);
        const Point dir_right = rotate(directions[k], -kPi / 3.0);
        tree.vertices[2 * k] = tree.vertices[k] + dir_left * len;
        tree.vertices[2 * k + 1] = tree.vertices[k] + dir_right * len;
        directions[2 * k] = dir_left;
        directions[2 * k + 1] = dir_right;
        tree.edges.emplace_back(k, 2 * k);
        tree.edges.emplace_back(k, 2 * k + 1);
    }
    return tree;
}

TerminalSet terminal_set(const LambdaSequence& seq, double tol, bool include_root) {
    if (!(tol > 0.0)) throw std::invalid_argument("terminal_set: tolerance must be positive");

    // Find truncation depth N with tail sum_{i > N} prod_{j<i} lambda_j < tol.
    int n = 0;
    double tail;
    constexpr int kMaxDepth = 40;  // 2^40 points is far beyond desk scale anyway
    for (;; ++n) {
        if (n > kMaxDepth) {
            throw std::invalid_argument("terminal_set: tolerance requires unreasonable depth");
        }
        if (seq.is_constant()) {
            const double lambda = seq.constant_value();
            tail = std::pow(lambda, n + 1) / (1.0 - lambda);
        } else {
            if (static_cast<std::size_t>(n) + 1 > seq.available()) {
                throw std::invalid_argument(
                    "terminal_set: explicit sequence too short for requested tolerance");
            }
            // remaining edge lengths, bounded by a geometric tail with ratio 1/2
            double len = 1.0;
            for (int j = 0; j <= n; ++j) len *= seq.effective(j);
            tail = 2.0 * len;  // len * (1 + 1/2 + 1/4 + ...) upper bound
        }
        if (tail < tol) break;
    }

    const EmbeddedTree tree = build_sigma(seq, n + 1);
    TerminalSet out;
    out.truncation_depth = n;
    out.tolerance = tail;
    out.includes_root = include_root;
    if (include_root) out.points.push_back(tree.vertices[0]);
    for (int k : tree.leaf_indices()) out.points.push_back(tree.vertices[k]);
    return out;
}

double total_length(const LambdaSequence& seq, int depth) {
    if (depth < 1) throw std::invalid_argument("total_length: depth must be >= 1");
    double sum = 0.0;
    double len = 1.0;
    double count = 1.0;
    for (int i = 0; i < depth; ++i) {
        sum += count * len;
        if (i + 1 < depth) {
            len *= seq.effective(i);
            count *= 2.0;
        }
    }
    return sum;
}

double total_length(const LambdaSequence& seq) {
    if (!seq.is_constant()) {
        throw std::invalid_argument("total_length: limit requires a constant sequence");
    }
    const double lambda = seq.constant_value();
    if (!(2.0 * lambda < 1.0)) {
        throw std::domain_error("total_length: series diverges for 2*lambda >= 1");
    }
    return 1.0 / (1.0 - 2.0 * lambda);
}

double epsilon_of(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("epsilon_of: lambda must lie in (0, 1)");
    }
    return lambda * lambda / (1.0 - lambda);
}

double hausdorff_dimension_formula(double lambda) {
    if (!(lambda > 0.0 && lambda < 0.5)) {
        throw std::invalid_argument("hausdorff_dimension_formula: lambda must lie in (0, 1/2)");
    }
    return -std::log(2.0) / std::log(lambda);
}

ValidationReport validate_embedding(const EmbeddedTree& tree) {
    ValidationReport report;

    // (a) pairwise intersections; edges sharing a vertex are adjacent and the
    // shared endpoint is excluded by the predicate itself
    const auto& edges = tree.edges;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const Segment si(tree.vertices[edges[i].first], tree.vertices[edges[i].second]);
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            const Segment sj(tree.vertices[edges[j].first], tree.vertices[edges[j].second]);
            if (segments_intersect(si, sj)) {
                report.crossing_edges.emplace_back(i, j);
            }
        }
    }

    // (b) branching angles at internal vertices
    for (int k = 1; k < static_cast<int>(tree.vertices.size()) / 2; ++k) {
        const Point parent = tree.vertices[k / 2];  // k=1 -> y0
        const Point left = tree.vertices[2 * k];
        const Point right = tree.vertices[2 * k + 1];
        const Point at = tree.vertices[k];
        const double target = 2.0 * kPi / 3.0;
        report.max_angle_deviation =
            std::max({report.max_angle_deviation, std::abs(angle_at(at, parent, left) - target),
                      std::abs(angle_at(at, parent, right) - target),
                      std::abs(angle_at(at, left, right) - target)});
    }

    // (c) level-ratio deviations
    for (const auto& [parent, child] : tree.edges) {
        if (parent == 0) continue;  // root edge has no parent edge
        const int level = EmbeddedTree::level_of(child);
        const double child_len = distance(tree.vertices[parent], tree.vertices[child]);
        const double parent_len =
            distance(tree.vertices[parent / 2], tree.vertices[parent]);
        const double expected = tree.level_lengths[level] / tree.level_lengths[level - 1];
        const double ratio = child_len / parent_len;
        report.max_ratio_deviation =
            std::max(report.max_ratio_deviation, std::abs(ratio - expected) / expected);
    }

    report.valid = report.crossing_edges.empty() && report.max_angle_deviation < 1e-9 &&
                   report.max_ratio_deviation < 1e-9;
    return report;
}

}  // namespace steiner
