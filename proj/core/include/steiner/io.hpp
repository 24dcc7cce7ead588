#pragma once

#include <span>
#include <string>
#include <vector>

#include "steiner/fractal.hpp"
#include "steiner/solver.hpp"
#include "steiner/verifier.hpp"

namespace steiner {

/// {"lambda": ..., "depth": ..., "vertices": [{"k", "x", "y"}], "edges": [[p, c]]}
std::string tree_to_json(const EmbeddedTree& tree, const LambdaSequence& seq);

/// Inverse of tree_to_json; level lengths are re-measured from the geometry.
EmbeddedTree tree_from_json(const std::string& text);

/// x,y per row, 17 significant digits, no header.
std::string terminals_to_csv(const TerminalSet& set);

/// Parse "x,y" rows; blank lines ignored.
std::vector<Point> points_from_csv(const std::string& text);

/// {"length", "terminals", "steiner_points", "edges", "topology_id",
///  "min_angle", "ties"}
std::string solution_to_json(const SteinerSolution& sol, std::span<const Point> terminals);

std::string report_to_json(const LemmaReport& report);

/// Aggregate several named reports for one lambda into a single document.
std::string report_bundle_to_json(double lambda, std::span<const LemmaReport> reports);

struct SvgOptions {
    double pixels_per_unit = 500.0;  // unit edge mapped to 500 px
    double margin_fraction = 0.05;
    bool draw_axis = false;  // symmetry axis through y0 and y1
};

/// Deterministic SVG: one line element per edge, one circle per terminal
/// (the root and the deepest-level leaves), coordinates with 6 decimals.
std::string render_svg(const EmbeddedTree& tree, const SvgOptions& opts = {});

}  // namespace steiner
