#include "steiner/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <thread>

namespace steiner {

std::vector<std::vector<int>> Topology::neighbor_lists() const {
    std::vector<std::vector<int>> nbrs(node_count());
    for (const auto& [u, v] : adjacency) {
        nbrs[u].push_back(v);
        nbrs[v].push_back(u);
    }
    return nbrs;
}

std::uint64_t full_topology_count(int n) {
    if (n < 3 || n > 10) throw std::invalid_argument("full_topology_count: n must be in [3, 10]");
    std::uint64_t c = 1;
    for (int k = 3; k <= 2 * n - 5; k += 2) c *= static_cast<std::uint64_t>(k);
    return c;
}

namespace {

// Depth-first insertion enumeration. Terminal ids 0..n-1 are fixed up
// front; Steiner ids n, n+1, ... are assigned in creation order, so no
// relabeling is ever needed. Terminal k enters by splitting each existing
// edge in stored order, which fixes the canonical order.
void for_each_full_topology(int n, const std::function<void(const Topology&)>& fn) {
    if (n < 3 || n > 10) {
        throw std::invalid_argument("enumerate_full_topologies: n must be in [3, 10]");
    }
    Topology t;
    t.n = n;
    t.adjacency = {{0, n}, {1, n}, {2, n}};
    std::int64_t next_id = 0;

    std::function<void(int)> insert = [&](int k) {
        if (k == n) {
            t.canonical_id = next_id++;
            fn(t);
            return;
        }
        const int s = n + k - 2;  // new Steiner node for terminal k
        const std::size_t edge_count = t.adjacency.size();
        for (std::size_t e = 0; e < edge_count; ++e) {
            const auto [u, v] = t.adjacency[e];
            t.adjacency[e] = {u, s};
            t.adjacency.emplace_back(s, v);
            t.adjacency.emplace_back(k, s);
            insert(k + 1);
            t.adjacency.pop_back();
            t.adjacency.pop_back();
            t.adjacency[e] = {u, v};
        }
    };
    insert(3);
}

}  // namespace

std::vector<Topology> enumerate_full_topologies(int n) {
    std::vector<Topology> out;
    out.reserve(full_topology_count(n));
    for_each_full_topology(n, [&](const Topology& t) { out.push_back(t); });
    return out;
}

double mst_length(std::span<const Point> points) {
    const int n = static_cast<int>(points.size());
    if (n < 2) throw std::invalid_argument("mst_length: need at least two points");
    for (const Point& p : points) require_finite(p, "mst_length");

    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<bool> used(n, false);
    best[0] = 0.0;
    double total = 0.0;
    for (int it = 0; it < n; ++it) {
        int v = -1;
        for (int i = 0; i < n; ++i) {
            if (!used[i] && (v < 0 || best[i] < best[v])) v = i;
        }
        used[v] = true;
        total += best[v];
        for (int i = 0; i < n; ++i) {
            if (!used[i]) best[i] = std::min(best[i], distance(points[v], points[i]));
        }
    }
    return total;
}

// --- fixed-topology optimization -----------------------------------------

namespace {

// Fermat point for the optimizer's inner loop: no exceptions, handles
// coincident neighbors (the minimizer then sits on the duplicated point),
// and uses sign tests instead of inverse trig.
Point local_fermat(const Point& a, const Point& b, const Point& c) {
    if (a == b || a == c) return a;
    if (b == c) return b;

    // interior angle at v >= 2pi/3  <=>  dot <= 0 and 4 dot^2 >= |u|^2 |w|^2
    const auto obtuse120 = [](const Point& v, const Point& p, const Point& q) {
        const Point u = p - v, w = q - v;
        const double d = dot(u, w);
        return d <= 0.0 && 4.0 * d * d >= u.norm2() * w.norm2();
    };
    if (obtuse120(a, b, c)) return a;
    if (obtuse120(b, a, c)) return b;
    if (obtuse120(c, a, b)) return c;

    const auto apex = [](const Point& p, const Point& q, const Point& away) {
        const Point mid = (p + q) * 0.5;
        const Point d = q - p;
        const Point perp{-d.y, d.x};
        const double side = cross(d, away - p);
        const double f = std::sqrt(3.0) / 2.0;
        return (side > 0.0) ? mid - perp * f : mid + perp * f;
    };
    const Point ea = apex(b, c, a);
    const Point eb = apex(a, c, b);
    // intersect a--ea with b--eb
    const Point dp = ea - a, dq = eb - b;
    const double denom = cross(dp, dq);
    if (denom == 0.0) return (a + b + c) / 3.0;  // should not happen for valid triangles
    const double s = cross(b - a, dq) / denom;
    return a + dp * s;
}

struct NormalizedInstance {
    std::vector<Point> points;  // unit diameter
    Point center;
    double scale = 1.0;
};

NormalizedInstance normalize(std::span<const Point> terminals) {
    NormalizedInstance inst;
    double diameter = 0.0;
    for (std::size_t i = 0; i < terminals.size(); ++i) {
        for (std::size_t j = i + 1; j < terminals.size(); ++j) {
            diameter = std::max(diameter, distance(terminals[i], terminals[j]));
        }
    }
    Point lo = terminals[0], hi = terminals[0];
    for (const Point& p : terminals) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    inst.center = (lo + hi) * 0.5;
    inst.scale = diameter;
    inst.points.reserve(terminals.size());
    for (const Point& p : terminals) inst.points.push_back((p - inst.center) / inst.scale);
    return inst;
}

struct OptimizeResult {
    std::vector<Point> steiner;  // normalized coordinates
    double length = 0.0;         // normalized
    double gap = 0.0;            // certified length - optimum bound, normalized
    bool converged = false;
    bool pruned = false;
    int sweeps = 0;
    std::vector<double> history;  // normalized lengths per sweep
};

struct TopologyWork {
    const Topology* topo;
    std::vector<std::vector<int>> nbrs;
    std::vector<int> order;  // Steiner ids in BFS order

    explicit TopologyWork(const Topology& t) : topo(&t), nbrs(t.neighbor_lists()) {
        const int n = t.n;
        std::vector<bool> seen(t.node_count(), false);
        std::vector<int> queue;
        // start from the Steiner node attached to terminal 0
        for (int nb : nbrs[0]) {
            if (nb >= n) {
                queue.push_back(nb);
                seen[nb] = true;
            }
        }
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int s = queue[qi];
            order.push_back(s);
            for (int nb : nbrs[s]) {
                if (nb >= n && !seen[nb]) {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
    }
};

// Positions indexed by node id; terminals first, then Steiner nodes.
double total_edge_length(const Topology& t, const std::vector<Point>& pos) {
    double sum = 0.0;
    for (const auto& [u, v] : t.adjacency) sum += distance(pos[u], pos[v]);
    return sum;
}

struct Certificate {
    double gap = 0.0;    // sum of block subgradient norms, times D = 1
    double floor = 0.0;  // numerical resolution of the gap itself
};

// Convex subgradient certificate: optimum >= length - sum_i |gamma_i| * D
// with D the hull diameter (1 after normalization). Near-collapsed edges are
// snapped first (adding 3*delta per snap to keep the bound valid); a snapped
// Steiner-Steiner edge contributes a single paired (w, -w) subgradient, and
// each snapped Steiner-terminal edge grants that block an independent unit
// ball. The floor tracks the rounding noise of the unit vectors: an edge of
// length len computed from O(1) coordinates cannot resolve its direction
// better than ~eps/len, so the gap of an exact optimum stalls there.
Certificate certificate_gap(const Topology& t, const TopologyWork& work,
                            const std::vector<Point>& pos) {
    constexpr double kSnapTol = 1e-12;
    const int n = t.n;

    std::vector<Point> snapped(pos);
    double penalty = 0.0;
    std::vector<std::pair<int, int>> merged_pairs;
    for (const auto& [u, v] : t.adjacency) {
        if (u < n && v < n) continue;
        const double len = distance(snapped[u], snapped[v]);
        if (len > kSnapTol) continue;
        penalty += 3.0 * len;
        if (u >= n && v >= n) {
            snapped[v] = snapped[u];
            merged_pairs.emplace_back(u, v);
        } else {
            const int s = (u >= n) ? u : v;
            const int term = (u >= n) ? v : u;
            snapped[s] = snapped[term];
        }
    }

    // per-block gradients over positive edges, with terminal unit balls
    constexpr double kCoordEps = 1e-15;
    double fp_floor = 0.0;
    std::vector<Point> g(t.node_count(), Point{0.0, 0.0});
    std::vector<int> term_balls(t.node_count(), 0);
    for (const auto& [u, v] : t.adjacency) {
        const Point d = snapped[u] - snapped[v];
        const double len = d.norm();
        if (len == 0.0) {
            if (u >= n && v < n) ++term_balls[u];
            if (v >= n && u < n) ++term_balls[v];
            continue;
        }
        const Point unit = d / len;
        if (u >= n) g[u] = g[u] + unit;
        if (v >= n) g[v] = g[v] - unit;
        if (u >= n || v >= n) fp_floor += std::min(2.0, kCoordEps / len);
    }
    const auto shrink = [](const Point& v, int balls) {
        const double norm = v.norm();
        if (norm <= balls || norm == 0.0) return Point{0.0, 0.0};
        return v * ((norm - balls) / norm);
    };
    for (int s = n; s < t.node_count(); ++s) g[s] = shrink(g[s], term_balls[s]);

    std::vector<bool> paired(t.node_count(), false);
    double sum = penalty;
    for (const auto& [u, v] : merged_pairs) {
        if (paired[u] || paired[v]) continue;  // extra zero edges keep w = 0
        paired[u] = paired[v] = true;
        Point w = (g[v] - g[u]) * 0.5;
        const double wn = w.norm();
        if (wn > 1.0) w = w / wn;
        sum += (g[u] + w).norm() + (g[v] - w).norm();
    }
    for (int s = n; s < t.node_count(); ++s) {
        if (!paired[s]) sum += g[s].norm();
    }
    return Certificate{sum, fp_floor};
}

// Local Fermat updates freeze (nearly) merged adjacent Steiner nodes in
// place: each node sees a degenerate triangle with its merged partner.
// Contract near-zero Steiner-Steiner edges into clusters and apply two
// strictly improving escapes, both backtracked against the total length:
//   - split the cluster across one of its internal edges along the
//     first-order descent direction,
//   - move the whole cluster toward the geometric median of its outer
//     neighbors (one Weiszfeld step).
bool escape_collapsed_clusters(const Topology& t, const TopologyWork& work,
                               std::vector<Point>& pos, double current_length) {
    constexpr double kDetectTol = 1e-8;
    const int n = t.n;
    const int total = t.node_count();

    std::vector<int> root(total);
    for (int i = 0; i < total; ++i) root[i] = i;
    const auto find = [&](int x) {
        while (root[x] != x) x = root[x] = root[root[x]];
        return x;
    };
    bool any_merge = false;
    for (const auto& [u, v] : t.adjacency) {
        if (u < n || v < n) continue;
        if (distance(pos[u], pos[v]) > kDetectTol) continue;
        root[find(u)] = find(v);
        any_merge = true;
    }
    if (!any_merge) return false;

    bool improved = false;
    std::vector<int> members;
    for (int rep = n; rep < total; ++rep) {
        if (find(rep) != rep) continue;
        members.clear();
        for (int s = n; s < total; ++s) {
            if (find(s) == rep) members.push_back(s);
        }
        if (members.size() < 2) continue;

        Point m{0.0, 0.0};
        for (int s : members) m = m + pos[s];
        m = m / static_cast<double>(members.size());

        // outer pulls per member (edges leaving the cluster)
        bool degenerate_outer = false;
        std::vector<Point> pull(members.size(), Point{0.0, 0.0});
        Point total_pull{0.0, 0.0};
        Point median_num{0.0, 0.0};
        double median_den = 0.0;
        for (std::size_t mi = 0; mi < members.size(); ++mi) {
            for (int nb : work.nbrs[members[mi]]) {
                if (nb >= n && find(nb) == rep) continue;
                const Point d = m - pos[nb];
                const double len = d.norm();
                if (len == 0.0) {
                    degenerate_outer = true;
                    break;
                }
                pull[mi] = pull[mi] + d / len;
                median_num = median_num + pos[nb] / len;
                median_den += 1.0 / len;
            }
            if (degenerate_outer) break;
        }
        if (degenerate_outer) continue;
        for (const Point& p : pull) total_pull = total_pull + p;

        std::vector<Point> saved(members.size());
        for (std::size_t mi = 0; mi < members.size(); ++mi) saved[mi] = pos[members[mi]];
        const auto restore = [&] {
            for (std::size_t mi = 0; mi < members.size(); ++mi) pos[members[mi]] = saved[mi];
        };

        // split across each internal cluster edge
        bool cluster_done = false;
        for (const auto& [u, v] : t.adjacency) {
            if (u < n || v < n || find(u) != rep || find(v) != rep) continue;
            // sides of the cluster subtree with edge (u,v) removed
            std::vector<int> side(total, 0);
            std::vector<int> stack = {u};
            side[u] = 1;
            while (!stack.empty()) {
                const int x = stack.back();
                stack.pop_back();
                for (int nb : work.nbrs[x]) {
                    if (nb == v || nb < n || find(nb) != rep || side[nb]) continue;
                    side[nb] = 1;
                    stack.push_back(nb);
                }
            }
            Point g_a{0.0, 0.0}, g_b{0.0, 0.0};
            for (std::size_t mi = 0; mi < members.size(); ++mi) {
                if (side[members[mi]]) {
                    g_a = g_a + pull[mi];
                } else {
                    g_b = g_b + pull[mi];
                }
            }
            const Point diff = g_a - g_b;
            if (diff.norm() <= 2.0 + 1e-9) continue;
            const Point w = diff / diff.norm();
            for (double eps = 1e-3; eps > 1e-15; eps *= 0.25) {
                for (std::size_t mi = 0; mi < members.size(); ++mi) {
                    pos[members[mi]] = side[members[mi]] ? m - w * eps : m + w * eps;
                }
                if (total_edge_length(t, pos) < current_length) {
                    cluster_done = true;
                    improved = true;
                    current_length = total_edge_length(t, pos);
                    break;
                }
            }
            if (cluster_done) break;
            restore();
        }
        if (cluster_done) continue;

        // whole-cluster Weiszfeld step toward the outer median
        const Point target = median_num / median_den;
        bool applied = false;
        for (double beta = 1.0; beta > 1e-12; beta *= 0.5) {
            const Point cand = m + (target - m) * beta;
            for (int s : members) pos[s] = cand;
            if (total_edge_length(t, pos) < current_length) {
                applied = true;
                improved = true;
                current_length = total_edge_length(t, pos);
                break;
            }
        }
        if (!applied) restore();
    }
    return improved;
}

OptimizeResult optimize_normalized(const Topology& t, const TopologyWork& work,
                                   const std::vector<Point>& terminals,
                                   const SolveOptions& opts, double prune_threshold,
                                   const std::atomic<double>* shared_best, double slack) {
    const int n = t.n;
    std::vector<Point> pos(t.node_count());
    for (int i = 0; i < n; ++i) pos[i] = terminals[i];

    Point centroid{0.0, 0.0};
    for (int i = 0; i < n; ++i) centroid = centroid + terminals[i];
    centroid = centroid / n;
    for (int s : work.order) pos[s] = centroid;
    for (int pass = 0; pass < 3; ++pass) {
        for (int s : work.order) {
            const auto& nb = work.nbrs[s];
            pos[s] = (pos[nb[0]] + pos[nb[1]] + pos[nb[2]]) / 3.0;
        }
    }

    OptimizeResult res;
    const double cert_tol = std::max(opts.convergence_tol * 100.0, 1e-12);
    constexpr double kPosTol = 1e-9;
    constexpr int kStallLimit = 64;   // sweeps with exactly zero progress
    constexpr int kEscapeBudget = 32; // collapse escapes per topology

    double prev_len = total_edge_length(t, pos);
    int stall = 0;
    int escapes = 0;
    for (int sweep = 0; sweep < opts.max_iterations; ++sweep) {
        double max_move2 = 0.0;
        const auto update = [&](int s) {
            const auto& nb = work.nbrs[s];
            const Point next = local_fermat(pos[nb[0]], pos[nb[1]], pos[nb[2]]);
            max_move2 = std::max(max_move2, (next - pos[s]).norm2());
            pos[s] = next;
        };
        for (auto it = work.order.begin(); it != work.order.end(); ++it) update(*it);
        for (auto it = work.order.rbegin(); it != work.order.rend(); ++it) update(*it);

        double len = total_edge_length(t, pos);
        Certificate cert = certificate_gap(t, work, pos);
        res.sweeps = sweep + 1;
        if (opts.record_history) res.history.push_back(len);

        if (std::abs(prev_len - len) <= opts.convergence_tol * len &&
            cert.gap <= cert_tol * len + cert.floor && max_move2 <= kPosTol * kPosTol) {
            res.converged = true;
            res.length = len;
            res.gap = cert.gap + cert.floor;
            break;
        }
        if (cert.gap > cert_tol * len + cert.floor && escapes < kEscapeBudget &&
            escape_collapsed_clusters(t, work, pos, len)) {
            ++escapes;
            len = total_edge_length(t, pos);
            cert = certificate_gap(t, work, pos);
        }
        stall = (len == prev_len) ? stall + 1 : 0;
        prev_len = len;

        if (prune_threshold < std::numeric_limits<double>::infinity() || shared_best) {
            double threshold = prune_threshold;
            if (shared_best) {
                threshold = std::min(threshold, shared_best->load(std::memory_order_relaxed) + slack);
            }
            if (len - (cert.gap + cert.floor) > threshold) {
                res.pruned = true;
                res.length = len;
                res.gap = cert.gap + cert.floor;
                break;
            }
        }

        res.length = len;
        res.gap = cert.gap + cert.floor;
        // A frozen iterate (a non-stationary collapse no escape can improve)
        // never undercuts any topology optimum; report it honestly instead
        // of burning the iteration budget.
        if (stall >= kStallLimit) break;
    }

    res.steiner.assign(pos.begin() + n, pos.end());
    return res;
}

void collect_diagnostics(const Topology& t, const std::vector<Point>& all_pos,
                         double collapse_tol, SteinerSolution& sol) {
    sol.collapsed_pairs.clear();
    for (const auto& [u, v] : t.adjacency) {
        if (distance(all_pos[u], all_pos[v]) <= collapse_tol) {
            sol.collapsed_pairs.emplace_back(std::min(u, v), std::max(u, v));
        }
    }
    const auto nbrs = t.neighbor_lists();
    double min_angle = kPi;
    bool any = false;
    for (int s = t.n; s < t.node_count(); ++s) {
        for (std::size_t i = 0; i < nbrs[s].size(); ++i) {
            for (std::size_t j = i + 1; j < nbrs[s].size(); ++j) {
                const Point u = all_pos[nbrs[s][i]] - all_pos[s];
                const Point v = all_pos[nbrs[s][j]] - all_pos[s];
                if (u.norm() <= collapse_tol || v.norm() <= collapse_tol) continue;
                min_angle = std::min(min_angle, std::atan2(std::abs(cross(u, v)), dot(u, v)));
                any = true;
            }
        }
    }
    sol.min_angle = any ? min_angle : kPi;
}

void validate_terminals(std::span<const Point> terminals, const char* what) {
    for (const Point& p : terminals) require_finite(p, what);
    for (std::size_t i = 0; i < terminals.size(); ++i) {
        for (std::size_t j = i + 1; j < terminals.size(); ++j) {
            if (terminals[i] == terminals[j]) {
                throw std::invalid_argument(std::string(what) + ": duplicate terminals");
            }
        }
    }
}

void validate_options(const SolveOptions& opts, const char* what) {
    if (!(opts.convergence_tol > 0.0)) {
        throw std::invalid_argument(std::string(what) + ": convergence_tol must be positive");
    }
    if (opts.max_iterations < 1) {
        throw std::invalid_argument(std::string(what) + ": max_iterations must be >= 1");
    }
}

SteinerSolution finish_solution(const Topology& t, const NormalizedInstance& inst,
                                const OptimizeResult& opt, const SolveOptions& opts) {
    SteinerSolution sol;
    sol.topology = t;
    sol.converged = opt.converged;
    sol.length = opt.length * inst.scale;
    sol.optimality_gap = opt.gap * inst.scale;
    sol.steiner_points.reserve(opt.steiner.size());
    for (const Point& p : opt.steiner) sol.steiner_points.push_back(p * inst.scale + inst.center);

    std::vector<Point> all_pos(t.node_count());
    for (int i = 0; i < t.n; ++i) all_pos[i] = inst.points[i] * inst.scale + inst.center;
    for (int s = t.n; s < t.node_count(); ++s) all_pos[s] = sol.steiner_points[s - t.n];
    collect_diagnostics(t, all_pos, opts.collapse_tol * inst.scale, sol);

    if (!opt.history.empty()) {
        sol.length_history.reserve(opt.history.size());
        for (double h : opt.history) sol.length_history.push_back(h * inst.scale);
    }
    return sol;
}

}  // namespace

SteinerSolution optimize_topology(const Topology& t, std::span<const Point> terminals,
                                  const SolveOptions& opts) {
    if (static_cast<int>(terminals.size()) != t.n) {
        throw std::invalid_argument("optimize_topology: terminal count does not match topology");
    }
    validate_terminals(terminals, "optimize_topology");
    validate_options(opts, "optimize_topology");

    const NormalizedInstance inst = normalize(terminals);
    const TopologyWork work(t);
    const OptimizeResult opt =
        optimize_normalized(t, work, inst.points, opts,
                            std::numeric_limits<double>::infinity(), nullptr, 0.0);
    return finish_solution(t, inst, opt, opts);
}

SteinerSolution melzak3(const Point& a, const Point& b, const Point& c) {
    const FermatResult fr = fermat_point(a, b, c);

    SteinerSolution sol;
    sol.topology.n = 3;
    sol.topology.adjacency = {{0, 3}, {1, 3}, {2, 3}};
    sol.topology.canonical_id = 0;
    sol.steiner_points = {fr.point};
    sol.length = fr.tripod_length;
    sol.converged = true;
    sol.optimality_gap = 0.0;

    const double scale = std::max({distance(a, b), distance(b, c), distance(a, c)});
    const std::vector<Point> all_pos = {a, b, c, fr.point};
    collect_diagnostics(sol.topology, all_pos, 1e-9 * scale, sol);
    return sol;
}

SteinerSolution solve_steiner(std::span<const Point> terminals, const SolveOptions& opts) {
    const int n = static_cast<int>(terminals.size());
    if (n < 3 || n > 10) throw std::invalid_argument("solve_steiner: n must be in [3, 10]");
    validate_terminals(terminals, "solve_steiner");
    validate_options(opts, "solve_steiner");

    const NormalizedInstance inst = normalize(terminals);
    const double mst_norm = mst_length(inst.points);
    const double slack = 1e-8 * std::max(1.0, mst_norm);
    const double prune_threshold =
        opts.prune_with_mst ? mst_norm + slack : std::numeric_limits<double>::infinity();

    int jobs = opts.parallelism > 0 ? opts.parallelism
                                    : static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    const std::uint64_t count = full_topology_count(n);
    if (count < 64) jobs = 1;

    struct Candidate {
        std::int64_t id;
        double length;
        double gap;
        bool converged;
    };

    std::atomic<double> shared_best{std::numeric_limits<double>::infinity()};
    const auto update_best = [&](double len) {
        double cur = shared_best.load(std::memory_order_relaxed);
        while (len < cur &&
               !shared_best.compare_exchange_weak(cur, len, std::memory_order_relaxed)) {
        }
    };

    std::vector<std::vector<Candidate>> per_thread(jobs);

    // Screening budget per topology. Pathological collapse grinders make
    // microscopic progress forever; they can never undercut the winner (any
    // iterate stays above its own topology optimum), so cut them off early.
    // The winner is re-optimized at the caller's full budget afterwards.
    SolveOptions screen_opts = opts;
    screen_opts.max_iterations = std::min(opts.max_iterations, 2000);
    screen_opts.record_history = false;

    const auto run = [&](int tid) {
        auto& local = per_thread[tid];
        std::int64_t index = 0;
        for_each_full_topology(n, [&](const Topology& t) {
            const std::int64_t id = index++;
            if (id % jobs != tid) return;
            const TopologyWork work(t);
            const OptimizeResult opt =
                optimize_normalized(t, work, inst.points, screen_opts, prune_threshold,
                                    opts.prune_with_mst ? &shared_best : nullptr, slack);
            if (opt.pruned) return;
            update_best(opt.length);
            local.push_back({t.canonical_id, opt.length, opt.gap, opt.converged});
        });
    };

    if (jobs == 1) {
        run(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(jobs);
        for (int tid = 0; tid < jobs; ++tid) threads.emplace_back(run, tid);
        for (auto& th : threads) th.join();
    }

    std::vector<Candidate> candidates;
    for (auto& local : per_thread) {
        candidates.insert(candidates.end(), local.begin(), local.end());
    }
    if (candidates.empty()) {
        throw std::runtime_error("solve_steiner: all topologies pruned; internal error");
    }

    const Candidate* winner = nullptr;
    for (const Candidate& c : candidates) {
        if (!winner || c.length < winner->length ||
            (c.length == winner->length && c.id < winner->id)) {
            winner = &c;
        }
    }

    bool any_converged = false;
    for (const Candidate& c : candidates) any_converged = any_converged || c.converged;
    if (!any_converged) {
        throw std::runtime_error("solve_steiner: no topology optimization converged");
    }

    // ties: relative gap below 1e-12 against the winner
    std::vector<std::int64_t> ties;
    const double tie_tol = 1e-12 * std::max(1.0, winner->length);
    for (const Candidate& c : candidates) {
        if (std::abs(c.length - winner->length) <= tie_tol) ties.push_back(c.id);
    }
    std::sort(ties.begin(), ties.end());

    // re-run the winner topology to recover its geometry (deterministic)
    Topology winner_topology;
    {
        std::int64_t index = 0;
        for_each_full_topology(n, [&](const Topology& t) {
            if (index++ == winner->id) winner_topology = t;
        });
    }
    const TopologyWork work(winner_topology);
    const OptimizeResult opt =
        optimize_normalized(winner_topology, work, inst.points, opts,
                            std::numeric_limits<double>::infinity(), nullptr, 0.0);
    SteinerSolution sol = finish_solution(winner_topology, inst, opt, opts);
    sol.ties = std::move(ties);
    return sol;
}

}  // namespace steiner
