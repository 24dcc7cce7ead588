#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "steiner/geometry.hpp"

namespace steiner {

/// A full Steiner topology on n terminals: node ids 0..n-1 are terminals
/// (degree 1), ids n..2n-3 are Steiner nodes (degree 3).
struct Topology {
    int n = 0;
    std::vector<std::pair<int, int>> adjacency;
    std::int64_t canonical_id = 0;

    int steiner_count() const { return n - 2; }
    int node_count() const { return 2 * n - 2; }
    /// Neighbor lists indexed by node id; Steiner nodes have exactly three.
    std::vector<std::vector<int>> neighbor_lists() const;
};

struct SolveOptions {
    double convergence_tol = 1e-13;  // relative length change per sweep
    int max_iterations = 100000;     // sweeps per topology
    bool prune_with_mst = true;
    int parallelism = 0;  // degree hint; 0 = hardware concurrency
    double collapse_tol = 1e-9;  // absolute, on unit-diameter normalized input
    bool record_history = false;
};

struct SteinerSolution {
    Topology topology;
    std::vector<Point> steiner_points;  // indexed by steiner id - n
    double length = 0.0;
    bool converged = false;
    std::vector<std::pair<int, int>> collapsed_pairs;
    double min_angle = 0.0;  // min pairwise angle over positive edges at Steiner nodes
    /// Certified bound on length - optimum for this topology (convex
    /// subgradient certificate), in input units.
    double optimality_gap = 0.0;
    std::vector<std::int64_t> ties;     // topology ids tied with the winner
    std::vector<double> length_history;  // per sweep, when recorded
};

/// Number of full topologies: (2n-4)! / (2^(n-2) (n-2)!).
std::uint64_t full_topology_count(int n);

/// All full topologies on n terminals (3 <= n <= 10), duplicate-free, in a
/// deterministic order: terminal k is inserted into every edge of every
/// (k-1)-terminal topology, recursively.
std::vector<Topology> enumerate_full_topologies(int n);

/// Optimize Steiner point positions for a fixed topology by replacing each
/// Steiner point with the Fermat point of its neighbors until the relative
/// length change drops below tolerance and the subgradient certificate
/// confirms the remaining gap.
SteinerSolution optimize_topology(const Topology& t, std::span<const Point> terminals,
                                  const SolveOptions& opts = {});

/// Exact minimum over all full topologies. Deterministic, including under
/// parallel evaluation; ties are broken by smallest canonical_id and
/// reported in the `ties` field.
SteinerSolution solve_steiner(std::span<const Point> terminals, const SolveOptions& opts = {});

/// Euclidean minimum spanning tree length (n >= 2).
double mst_length(std::span<const Point> points);

/// Closed-form three-terminal solution via the equilateral-third-point
/// construction; degenerate triangles give the two-segment path.
SteinerSolution melzak3(const Point& a, const Point& b, const Point& c);

}  // namespace steiner
