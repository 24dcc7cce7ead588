#include "steiner/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace steiner {

using nlohmann::json;

std::string tree_to_json(const EmbeddedTree& tree, const LambdaSequence& seq) {
    json doc;
    if (seq.is_constant()) {
        doc["lambda"] = seq.constant_value();
    } else {
        std::vector<double> values;
        for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(tree.depth); ++i) {
            values.push_back(seq.effective(i));
        }
        doc["lambda"] = values;
    }
    doc["depth"] = tree.depth;
    json vertices = json::array();
    for (std::size_t k = 0; k < tree.vertices.size(); ++k) {
        vertices.push_back({{"k", k}, {"x", tree.vertices[k].x}, {"y", tree.vertices[k].y}});
    }
    doc["vertices"] = std::move(vertices);
    json edges = json::array();
    for (const auto& [p, c] : tree.edges) edges.push_back({p, c});
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

EmbeddedTree tree_from_json(const std::string& text) {
    const json doc = json::parse(text);
    EmbeddedTree tree;
    tree.depth = doc.at("depth").get<int>();
    tree.vertices.assign(std::size_t{1} << tree.depth, Point{});
    for (const auto& v : doc.at("vertices")) {
        const std::size_t k = v.at("k").get<std::size_t>();
        if (k >= tree.vertices.size()) {
            throw std::invalid_argument("tree_from_json: vertex index beyond depth");
        }
        tree.vertices[k] = Point{v.at("x").get<double>(), v.at("y").get<double>()};
    }
    for (const auto& e : doc.at("edges")) {
        tree.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    // re-measure per-level edge lengths from the geometry
    tree.level_lengths.assign(tree.depth, 0.0);
    for (const auto& [p, c] : tree.edges) {
        const int level = EmbeddedTree::level_of(c);
        tree.level_lengths[level] = distance(tree.vertices[p], tree.vertices[c]);
    }
    return tree;
}

std::string terminals_to_csv(const TerminalSet& set) {
    std::string out;
    char buf[80];
    for (const Point& p : set.points) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", p.x, p.y);
        out += buf;
    }
    return out;
}

std::vector<Point> points_from_csv(const std::string& text) {
    std::vector<Point> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("points_from_csv: expected 'x,y' rows");
        }
        out.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
    }
    return out;
}

std::string solution_to_json(const SteinerSolution& sol, std::span<const Point> terminals) {
    json doc;
    doc["length"] = sol.length;
    json terms = json::array();
    for (const Point& p : terminals) terms.push_back({{"x", p.x}, {"y", p.y}});
    doc["terminals"] = std::move(terms);
    json steiner_pts = json::array();
    for (const Point& p : sol.steiner_points) steiner_pts.push_back({{"x", p.x}, {"y", p.y}});
    doc["steiner_points"] = std::move(steiner_pts);
    json edges = json::array();
    for (const auto& [u, v] : sol.topology.adjacency) edges.push_back({u, v});
    doc["edges"] = std::move(edges);
    doc["topology_id"] = sol.topology.canonical_id;
    doc["min_angle"] = sol.min_angle;
    doc["ties"] = sol.ties;
    doc["converged"] = sol.converged;
    return doc.dump(2) + "\n";
}

namespace {

json report_json(const LemmaReport& report) {
    json doc;
    doc["name"] = report.name;
    doc["inputs"] = report.inputs;
    doc["computed_values"] = report.computed_values;
    doc["margins"] = report.margins;
    doc["pass"] = report.pass;
    doc["tolerances"] = report.tolerances;
    return doc;
}

}  // namespace

std::string report_to_json(const LemmaReport& report) {
    return report_json(report).dump(2) + "\n";
}

std::string report_bundle_to_json(double lambda, std::span<const LemmaReport> reports) {
    json doc;
    doc["lambda"] = lambda;
    bool all_pass = true;
    json items = json::array();
    for (const LemmaReport& r : reports) {
        items.push_back(report_json(r));
        all_pass = all_pass && r.pass;
    }
    doc["checks"] = std::move(items);
    doc["pass"] = all_pass;
    return doc.dump(2) + "\n";
}

namespace {

std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string render_svg(const EmbeddedTree& tree, const SvgOptions& opts) {
    Point lo = tree.vertices[0], hi = tree.vertices[0];
    for (const Point& p : tree.vertices) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const double span_x = std::max(hi.x - lo.x, 1e-9);
    const double span_y = std::max(hi.y - lo.y, 1e-9);
    const double scale = opts.pixels_per_unit;
    const double margin = opts.margin_fraction * std::max(span_x, span_y) * scale;
    const double width = span_x * scale + 2.0 * margin;
    const double height = span_y * scale + 2.0 * margin;

    const auto px = [&](const Point& p) {
        return Point{(p.x - lo.x) * scale + margin, (hi.y - p.y) * scale + margin};
    };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt6(width) +
           "\" height=\"" + fmt6(height) + "\" viewBox=\"0 0 " + fmt6(width) + " " +
           fmt6(height) + "\">\n";

    if (opts.draw_axis) {
        const Point a = px({lo.x, 0.0});
        const Point b = px({hi.x, 0.0});
        svg += "  <line x1=\"" + fmt6(a.x) + "\" y1=\"" + fmt6(a.y) + "\" x2=\"" + fmt6(b.x) +
               "\" y2=\"" + fmt6(b.y) + "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 4\"/>\n";
    }
    for (const auto& [p, c] : tree.edges) {
        const Point a = px(tree.vertices[p]);
        const Point b = px(tree.vertices[c]);
        svg += "  <line x1=\"" + fmt6(a.x) + "\" y1=\"" + fmt6(a.y) + "\" x2=\"" + fmt6(b.x) +
               "\" y2=\"" + fmt6(b.y) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }
    const auto dot = [&](const Point& p) {
        const Point q = px(p);
        svg += "  <circle cx=\"" + fmt6(q.x) + "\" cy=\"" + fmt6(q.y) +
               "\" r=\"2\" fill=\"#cc3333\"/>\n";
    };
    dot(tree.vertices[0]);
    for (int k : tree.leaf_indices()) dot(tree.vertices[k]);
    svg += "</svg>\n";
    return svg;
}

}  // namespace steiner
