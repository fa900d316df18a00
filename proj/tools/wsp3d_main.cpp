// wsp3d command line: validate, discretize, build-graph, solve, compare,
// plot-data. JSON artifacts are written atomically with fixed 17-digit float
// formatting so identical runs produce identical bytes.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wsp3d/discretization.hpp"
#include "wsp3d/graph.hpp"
#include "wsp3d/mesh.hpp"
#include "wsp3d/report.hpp"
#include "wsp3d/sssp.hpp"

namespace {

using namespace wsp3d;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

void write_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp);
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string fmt(double v) { return format_double(v); }

std::string role_name(NodeRole r) {
    switch (r) {
        case NodeRole::Vertex: return "vertex";
        case NodeRole::Edge: return "edge";
        case NodeRole::Bisector: return "bisector";
    }
    return "?";
}

int cmd_validate(const std::string& mesh_path) {
    WeightedTetMesh mesh = WeightedTetMesh::from_file(mesh_path);
    double wmin = kInf, wmax = 0;
    for (auto& t : mesh.tets()) {
        wmin = std::min(wmin, t.weight);
        wmax = std::max(wmax, t.weight);
    }
    std::cout << "mesh ok: " << mesh.vertices().size() << " vertices, " << mesh.tets().size()
              << " tets, " << mesh.faces().size() << " faces, " << mesh.edges().size()
              << " edges\n"
              << "weights in [" << fmt(wmin) << ", " << fmt(wmax) << "], bbox diagonal "
              << fmt(mesh.bbox_diagonal()) << "\n";
    return kExitOk;
}

int cmd_discretize(const std::string& mesh_path, double epsilon, const std::string& out,
                   const std::string& audit_out) {
    WeightedTetMesh mesh = WeightedTetMesh::from_file(mesh_path);
    DiscretizationParams params;
    params.epsilon = epsilon;
    Discretization disc(mesh, params);
    ApproxGraph graph(mesh, disc);

    std::ostringstream nodes;
    for (int i = 0; i < (int)graph.nodes().size(); ++i) {
        const GraphNode& n = graph.nodes()[i];
        nodes << i << " " << role_name(n.role) << " " << n.owner << " " << fmt(n.pos.x) << " "
              << fmt(n.pos.y) << " " << fmt(n.pos.z) << "\n";
    }
    if (out.empty())
        std::cout << nodes.str();
    else
        write_atomic(out, nodes.str());

    AuditReport rep = disc.audit();
    std::string aj = audit_json(rep, epsilon);
    if (audit_out.empty())
        std::cerr << "audit: " << rep.total_nodes << " nodes, " << rep.violations
                  << " bound violations, C(D) = " << fmt(rep.c_of_domain) << "\n";
    else
        write_atomic(audit_out, aj);
    return rep.violations == 0 ? kExitOk : kExitFailure;
}

int cmd_build_graph(const std::string& mesh_path, double epsilon, const std::string& edges_out,
                    long max_edges) {
    WeightedTetMesh mesh = WeightedTetMesh::from_file(mesh_path);
    DiscretizationParams params;
    params.epsilon = epsilon;
    Discretization disc(mesh, params);
    ApproxGraph graph(mesh, disc);
    GraphCounts c = graph.counts();

    // per-triple adjacency histogram over a bounded sample of sources
    long edge_estimate = 0;
    std::ostringstream edges;
    long emitted = 0;
    std::vector<long> hist(9, 0);  // adjacency interval count distribution
    for (int tr = 0; tr < (int)graph.triples().size(); ++tr) {
        const Triple& t = graph.triples()[tr];
        const GraphSegment& src = graph.segments()[t.seg_src];
        for (int k = 0; k < (int)src.nodes.size(); ++k) {
            int u = src.nodes[k];
            auto iv = graph.adjacency_intervals(u, tr);
            hist[std::min<size_t>(iv.runs.size(), hist.size() - 1)]++;
            for (auto& r : iv.runs) edge_estimate += r.second - r.first + 1;
            if (!edges_out.empty() && emitted < max_edges) {
                TripleScan scan = graph.make_scan(u, tr);
                for (auto& r : iv.runs)
                    for (int i = r.first; i <= r.second && emitted < max_edges; ++i) {
                        int v = scan.tgt->nodes[i];
                        edges << u << " " << v << " " << t.face << " "
                              << fmt(scan.cost_at(scan.tgt->t[i])) << "\n";
                        ++emitted;
                    }
            }
        }
    }
    std::cout << "nodes " << c.nodes << "\nsegments " << c.segments << "\ntriples " << c.triples
              << "\ndirected_edges " << edge_estimate << "\n";
    std::cout << "interval_histogram";
    for (size_t i = 0; i < hist.size(); ++i) std::cout << " " << i << ":" << hist[i];
    std::cout << "\n";
    if (!edges_out.empty()) write_atomic(edges_out, edges.str());
    return kExitOk;
}

int cmd_solve(const std::string& mesh_path, int source, double epsilon,
              const std::string& algorithm, const std::string& out, bool with_paths) {
    WeightedTetMesh mesh = WeightedTetMesh::from_file(mesh_path);
    if (source < 0 || source >= (int)mesh.vertices().size()) {
        std::cerr << "error: source vertex out of range\n";
        return kExitFailure;
    }
    DiscretizationParams params;
    params.epsilon = epsilon;
    Discretization disc(mesh, params);
    ApproxGraph graph(mesh, disc);
    SolveResult res = algorithm == "baseline" ? dijkstra_baseline(graph, source)
                                              : sssp_pruned(graph, source);
    std::string json = solve_json(mesh, res, epsilon, algorithm, &graph, with_paths);
    if (out.empty())
        std::cout << json;
    else
        write_atomic(out, json);
    return kExitOk;
}

int cmd_compare(const std::string& mesh_path, int source, double epsilon, const std::string& out,
                double eps_fine) {
    WeightedTetMesh mesh = WeightedTetMesh::from_file(mesh_path);
    DiscretizationParams params;
    params.epsilon = epsilon;
    Discretization disc(mesh, params);
    ApproxGraph graph(mesh, disc);
    SolveResult rb = dijkstra_baseline(graph, source);
    SolveResult rp = sssp_pruned(graph, source);

    double max_rel = 0.0;
    for (size_t i = 0; i < rb.dist.size(); ++i) {
        bool fb = std::isfinite(rb.dist[i]), fp = std::isfinite(rp.dist[i]);
        if (fb != fp) max_rel = kInf;
        if (!fb || !fp || rb.dist[i] == 0.0) continue;
        max_rel = std::max(max_rel, std::abs(rb.dist[i] - rp.dist[i]) / rb.dist[i]);
    }
    // universal lower bound: any path costs at least w_min times the straight
    // line distance
    double wmin = kInf;
    for (auto& t : mesh.tets()) wmin = std::min(wmin, t.weight);
    bool lower_ok = true;
    for (int v = 0; v < (int)mesh.vertices().size(); ++v) {
        if (v == source || !std::isfinite(rb.dist[v])) continue;
        double lb = wmin * dist(mesh.vertices()[v], mesh.vertices()[source]);
        if (rb.dist[v] < lb * (1.0 - 1e-9)) lower_ok = false;
    }

    std::ostringstream o;
    o << "{\n  \"epsilon\": " << fmt(epsilon) << ",\n  \"source\": " << source
      << ",\n  \"max_rel_solver_diff\": " << fmt(max_rel)
      << ",\n  \"lower_bound_ok\": " << (lower_ok ? "true" : "false")
      << ",\n  \"baseline\": {\"settled\": " << rb.stats.settled
      << ", \"relaxations\": " << rb.stats.relaxations << ", \"seconds\": "
      << fmt(rb.stats.wall_seconds) << "}"
      << ",\n  \"pruned\": {\"settled\": " << rp.stats.settled
      << ", \"relaxations\": " << rp.stats.relaxations
      << ", \"representatives\": " << rp.stats.representatives << ", \"seconds\": "
      << fmt(rp.stats.wall_seconds) << "}";
    if (eps_fine > 0) {
        EpsilonAuditReport ea = epsilon_audit(mesh, source, epsilon, eps_fine);
        o << ",\n  \"epsilon_audit\": {\"eps_fine\": " << fmt(eps_fine)
          << ", \"max_ratio\": " << fmt(ea.max_ratio) << ", \"ok\": " << (ea.ok ? "true" : "false")
          << "}";
    }
    o << "\n}\n";
    if (out.empty())
        std::cout << o.str();
    else
        write_atomic(out, o.str());
    bool ok = max_rel <= 1e-9 && lower_ok;
    return ok ? kExitOk : kExitFailure;
}

int cmd_plot_data(const std::string& mesh_path, int source, double epsilon, int target,
                  const std::string& prefix) {
    WeightedTetMesh mesh = WeightedTetMesh::from_file(mesh_path);
    DiscretizationParams params;
    params.epsilon = epsilon;
    Discretization disc(mesh, params);
    ApproxGraph graph(mesh, disc);
    SolveResult res = dijkstra_baseline(graph, source);

    std::vector<int> targets;
    if (target >= 0)
        targets.push_back(target);
    else
        for (int v = 0; v < (int)mesh.vertices().size(); ++v)
            if (v != source && std::isfinite(res.dist[v])) targets.push_back(v);

    for (int v : targets) {
        GeodesicPath p = extract_path(graph, res, v);
        std::ostringstream o;
        o << "# path " << source << " -> " << v << " cost " << fmt(p.cost) << "\n";
        for (size_t i = 0; i < p.points.size(); ++i) {
            int tag = i == 0 ? 0 : (int)p.seg_kinds[i - 1];
            o << fmt(p.points[i].x) << " " << fmt(p.points[i].y) << " " << fmt(p.points[i].z)
              << " " << tag << "\n";
        }
        write_atomic(prefix + "_path_" + std::to_string(v) + ".txt", o.str());
    }

    std::ostringstream cloud;
    for (const GraphNode& n : graph.nodes())
        cloud << fmt(n.pos.x) << " " << fmt(n.pos.y) << " " << fmt(n.pos.z) << " "
              << role_name(n.role) << "\n";
    write_atomic(prefix + "_steiner.txt", cloud.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wsp3d: (1+eps)-approximate weighted shortest paths in tetrahedral domains"};
    app.require_subcommand(1);

    std::string mesh_path, out, audit_out, edges_out, algorithm = "pruned", prefix = "plot";
    double epsilon = 0.5, eps_fine = 0.0;
    int source = 0, target = -1;
    long max_edges = 100000;
    bool with_paths = false;

    auto add_mesh = [&](CLI::App* c) {
        c->add_option("--mesh", mesh_path, "mesh file (.wtet)")->required();
    };
    auto add_eps = [&](CLI::App* c) {
        c->add_option("--epsilon", epsilon, "approximation parameter in (0,1)")
            ->required()
            ->check(CLI::Range(1e-9, 1.0 - 1e-12));
    };

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a mesh");
    add_mesh(validate);

    CLI::App* discretize = app.add_subcommand("discretize", "place Steiner points and audit counts");
    add_mesh(discretize);
    add_eps(discretize);
    discretize->add_option("--out", out, "node list output (stdout when omitted)");
    discretize->add_option("--audit", audit_out, "audit report JSON output");

    CLI::App* build = app.add_subcommand("build-graph", "build the approximation graph");
    add_mesh(build);
    add_eps(build);
    build->add_option("--edges", edges_out, "edge list output (u v face cost)");
    build->add_option("--max-edges", max_edges, "edge list cap");

    CLI::App* solve = app.add_subcommand("solve", "single-source shortest paths");
    add_mesh(solve);
    add_eps(solve);
    solve->add_option("--source", source, "source vertex id")->required();
    solve->add_option("--algorithm", algorithm, "baseline|pruned")
        ->check(CLI::IsMember({"baseline", "pruned"}));
    solve->add_option("--out", out, "result JSON output (stdout when omitted)");
    solve->add_flag("--paths", with_paths, "include extracted paths in the JSON");

    CLI::App* compare = app.add_subcommand("compare", "run both solvers and audit agreement");
    add_mesh(compare);
    add_eps(compare);
    compare->add_option("--source", source, "source vertex id")->required();
    compare->add_option("--out", out, "report JSON output");
    compare->add_option("--eps-fine", eps_fine, "also run the coarse/fine epsilon audit");

    CLI::App* plot = app.add_subcommand("plot-data", "emit path polylines and the Steiner cloud");
    add_mesh(plot);
    add_eps(plot);
    plot->add_option("--source", source, "source vertex id")->required();
    plot->add_option("--target", target, "target vertex (all when omitted)");
    plot->add_option("--out", prefix, "output file prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*validate) return cmd_validate(mesh_path);
        if (*discretize) return cmd_discretize(mesh_path, epsilon, out, audit_out);
        if (*build) return cmd_build_graph(mesh_path, epsilon, edges_out, max_edges);
        if (*solve) return cmd_solve(mesh_path, source, epsilon, algorithm, out, with_paths);
        if (*compare) return cmd_compare(mesh_path, source, epsilon, out, eps_fine);
        if (*plot) return cmd_plot_data(mesh_path, source, epsilon, target, prefix);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
