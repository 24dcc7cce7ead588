// steinerfractal: generate self-similar Steiner-tree fractals, solve small
// Euclidean Steiner instances exactly, and run the verification checks.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "steiner/fractal.hpp"
#include "steiner/geometry.hpp"
#include "steiner/io.hpp"
#include "steiner/solver.hpp"
#include "steiner/verifier.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerification = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double lambda = 1.0 / 301.0;
    int depth = 6;
    double tol = 1e-9;
    int jobs = 0;
    std::string output;
    std::string format;
    std::string input;
    std::string config_path;
    bool axis = false;
    bool include_root = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << content;
    if (!out) throw IoError("write failed for " + path);
}

// flags override config-file values override defaults
void apply_config_file(const RunConfig& cli_side, RunConfig& cfg, const CLI::App* cmd) {
    if (cfg.config_path.empty()) return;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(cfg.config_path));
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("config file: " + std::string(e.what()));
    }
    const auto take = [&](const char* flag, const char* key, auto member) {
        if (cmd->count(flag) == 0 && doc.contains(key)) {
            try {
                cfg.*member = doc.at(key).get<std::decay_t<decltype(cfg.*member)>>();
            } catch (const nlohmann::json::exception& e) {
                throw UsageError("config file key '" + std::string(key) + "': " + e.what());
            }
        }
    };
    (void)cli_side;
    take("--lambda", "lambda", &RunConfig::lambda);
    take("--depth", "depth", &RunConfig::depth);
    take("--tol", "tol", &RunConfig::tol);
    take("--jobs", "jobs", &RunConfig::jobs);
    take("--output", "output", &RunConfig::output);
    take("--format", "format", &RunConfig::format);
}

steiner::LambdaSequence lambda_or_usage(double lambda) {
    try {
        return steiner::LambdaSequence::constant(lambda);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

steiner::SolveOptions solve_options(const RunConfig& cfg) {
    steiner::SolveOptions opts;
    opts.parallelism = cfg.jobs;
    return opts;
}

int cmd_generate(const RunConfig& cfg) {
    const auto seq = lambda_or_usage(cfg.lambda);
    if (cfg.depth < 1) throw UsageError("depth must be >= 1");
    const auto tree = steiner::build_sigma(seq, cfg.depth);

    const auto validation = steiner::validate_embedding(tree);
    if (!validation.valid) {
        std::cerr << "warning: embedding invalid";
        if (!validation.crossing_edges.empty()) {
            const auto& [i, j] = validation.crossing_edges.front();
            std::cerr << " (crossing reported between edges " << i << " and " << j << ")";
        }
        std::cerr << "\n";
    }

    const std::string format = cfg.format.empty() ? "json" : cfg.format;
    std::string content;
    if (format == "json") {
        content = steiner::tree_to_json(tree, seq);
    } else if (format == "csv") {
        content = steiner::terminals_to_csv(
            steiner::terminal_set(seq, cfg.tol, cfg.include_root));
    } else {
        throw UsageError("generate supports --format json or csv");
    }
    if (cfg.output.empty()) {
        std::cout << content;
    } else {
        write_file(cfg.output, content);
    }

    std::printf("length %.17g\n", steiner::total_length(seq, cfg.depth));
    std::printf("epsilon %.17g\n", steiner::epsilon_of(cfg.lambda));
    return kExitOk;
}

int cmd_solve(const RunConfig& cfg) {
    if (cfg.input.empty()) throw UsageError("solve requires a points file");
    const std::string text = read_file(cfg.input);

    std::vector<steiner::Point> terminals;
    if (cfg.input.size() > 5 && cfg.input.substr(cfg.input.size() - 5) == ".json") {
        const auto doc = nlohmann::json::parse(text);
        for (const auto& p : doc.at("terminals")) {
            terminals.emplace_back(p.at("x").get<double>(), p.at("y").get<double>());
        }
    } else {
        terminals = steiner::points_from_csv(text);
    }

    steiner::SteinerSolution sol;
    try {
        sol = steiner::solve_steiner(terminals, solve_options(cfg));
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const std::string out = steiner::solution_to_json(sol, terminals);
    if (cfg.output.empty()) {
        std::cout << out;
    } else {
        write_file(cfg.output, out);
    }
    std::printf("length %.17g\n", sol.length);
    return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
    if (!(cfg.lambda > 0.0 && cfg.lambda < 0.25)) {
        throw UsageError("verify requires lambda in (0, 1/4)");
    }

    std::vector<steiner::LemmaReport> reports;
    reports.push_back(steiner::check_lemma0(cfg.lambda).report());

    {
        // coordinate consistency of the Lemma 1 frame
        const auto frame = steiner::build_lemma1(cfg.lambda);
        steiner::LemmaReport r;
        r.name = "lemma1_coordinates";
        r.inputs = {{"lambda", cfg.lambda}};
        const double dz = steiner::distance(frame.intersection_z(), frame.Z);
        const double dv = steiner::distance(steiner::reflect(frame.Zl, frame.axis), frame.Vl);
        r.computed_values = {{"Z_x", frame.Z.x}, {"Z_y", frame.Z.y},
                             {"Zl_x", frame.Zl.x}, {"Zl_y", frame.Zl.y}};
        r.margins = {{"intersection_deviation", dz}, {"mirror_deviation", dv}};
        r.tolerances = {{"intersection_deviation", 1e-12}, {"mirror_deviation", 1e-12}};
        r.pass = dz <= 1e-12 && dv <= 1e-12;
        reports.push_back(r);
    }

    reports.push_back(steiner::check_lemma1_decomposition(cfg.lambda, 1).report());
    for (double h : {0.0, cfg.lambda / 2.0, cfg.lambda}) {
        reports.push_back(steiner::check_lemma2_shift(cfg.lambda, h).report());
    }

    const std::string bundle = steiner::report_bundle_to_json(cfg.lambda, reports);
    if (cfg.output.empty()) {
        std::cout << bundle;
    } else {
        write_file(cfg.output, bundle);
    }

    for (const auto& r : reports) {
        if (!r.pass) {
            std::cerr << "verification failed: " << r.name << "\n";
            return kExitVerification;
        }
    }
    return kExitOk;
}

int cmd_theorem(const RunConfig& cfg) {
    if (cfg.depth < 2 || cfg.depth > 4) {
        throw UsageError(
            "theorem requires depth in [2, 4]: the exhaustive topology enumeration "
            "(135135 at depth 4) is the oracle, and depth 5 would need 17 terminals");
    }
    if (!(cfg.lambda > 0.0 && cfg.lambda < 0.5)) {
        throw UsageError("theorem requires lambda in (0, 1/2)");
    }

    const auto rep = steiner::check_theorem(cfg.lambda, cfg.depth, solve_options(cfg));
    std::printf("truncation_length %.17g\n", rep.truncation_length);
    std::printf("oracle_length %.17g\n", rep.oracle_length);
    std::printf("relative_gap %.3e\n", rep.relative_gap);
    for (std::size_t k = 0; k < rep.per_step_lower_bounds.size(); ++k) {
        std::printf("lower_bound_step_%zu %.17g\n", k + 1, rep.per_step_lower_bounds[k]);
    }
    if (!cfg.output.empty()) {
        write_file(cfg.output, steiner::report_to_json(rep.report()));
    }
    if (!(rep.relative_gap < cfg.tol)) {
        std::cerr << "verification failed: theorem_truncation (gap " << rep.relative_gap
                  << " >= " << cfg.tol << ")\n";
        return kExitVerification;
    }
    return kExitOk;
}

int cmd_dimension(const RunConfig& cfg) {
    const auto seq = lambda_or_usage(cfg.lambda);
    const double tol = cfg.tol;
    const auto set = steiner::terminal_set(seq, tol, cfg.include_root);

    std::vector<double> scales;
    double s = cfg.lambda;
    for (int i = 0; i < 6; ++i) {
        scales.push_back(s);
        s *= cfg.lambda;
    }
    const double estimate = steiner::estimate_dimension(set.points, scales);
    const double formula = steiner::hausdorff_dimension_formula(cfg.lambda);
    std::printf("points %zu\n", set.points.size());
    std::printf("estimate %.6f\n", estimate);
    std::printf("formula %.6f\n", formula);
    if (!cfg.output.empty()) {
        nlohmann::json doc;
        doc["lambda"] = cfg.lambda;
        doc["points"] = set.points.size();
        doc["estimate"] = estimate;
        doc["formula"] = formula;
        write_file(cfg.output, doc.dump(2) + "\n");
    }
    return kExitOk;
}

int cmd_render(const RunConfig& cfg) {
    steiner::EmbeddedTree tree;
    if (!cfg.input.empty()) {
        try {
            tree = steiner::tree_from_json(read_file(cfg.input));
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("tree file: " + std::string(e.what()));
        }
    } else {
        tree = steiner::build_sigma(lambda_or_usage(cfg.lambda), cfg.depth);
    }
    steiner::SvgOptions opts;
    opts.draw_axis = cfg.axis;
    const std::string svg = steiner::render_svg(tree, opts);
    if (cfg.output.empty()) {
        std::cout << svg;
    } else {
        write_file(cfg.output, svg);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"planar Steiner trees: self-similar fractal construction, exact small-n "
                 "solving, and verification checks"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<CLI::App*> cmds;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--lambda", cfg.lambda, "edge-length ratio between levels");
        cmd->add_option("--depth", cfg.depth, "tree depth (levels of edges)");
        cmd->add_option("--tol", cfg.tol, "tolerance (meaning depends on command)");
        cmd->add_option("--jobs", cfg.jobs, "parallelism hint for the solver");
        cmd->add_option("-o,--output", cfg.output, "output file (stdout if omitted)");
        cmd->add_option("--format", cfg.format, "output format: json|csv|svg");
        cmd->add_option("--config", cfg.config_path, "JSON config file (flags override)");
        cmds.push_back(cmd);
        return cmd;
    };

    auto* generate = add_common(app.add_subcommand("generate", "build a tree embedding"));
    generate->add_flag("--include-root", cfg.include_root, "include y0 in terminal CSV");

    auto* solve = add_common(app.add_subcommand("solve", "exact Steiner tree for a point set"));
    solve->add_option("input", cfg.input, "terminal file: csv rows or json with 'terminals'");

    add_common(app.add_subcommand("verify", "run the lemma checks for one lambda"));

    add_common(
        app.add_subcommand("theorem", "compare the truncated tree against the exact solver"));

    auto* dimension =
        add_common(app.add_subcommand("dimension", "box-counting dimension of the terminal set"));
    dimension->add_flag("--include-root", cfg.include_root, "include y0 in the point set");

    auto* render = add_common(app.add_subcommand("render", "write an SVG of a tree"));
    render->add_option("input", cfg.input, "tree json (generated when omitted)");
    render->add_flag("--axis", cfg.axis, "draw the symmetry axis");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        const std::string name = active->get_name();
        // per-command defaults, still below config-file precedence
        if (name == "theorem" && active->count("--depth") == 0) cfg.depth = 3;
        if (name == "dimension" && active->count("--tol") == 0) cfg.tol = 1e-12;
        apply_config_file(cfg, cfg, active);
        if (name == "generate") return cmd_generate(cfg);
        if (name == "solve") return cmd_solve(cfg);
        if (name == "verify") return cmd_verify(cfg);
        if (name == "theorem") return cmd_theorem(cfg);
        if (name == "dimension") return cmd_dimension(cfg);
        if (name == "render") return cmd_render(cfg);
        std::cerr << "unknown command\n";
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVerification;
    }
}
