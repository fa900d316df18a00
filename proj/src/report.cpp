#include "wsp3d/report.hpp"

#include <cmath>
#include <sstream>

namespace wsp3d {

namespace {
std::string fmt(double v) { return format_double(v); }
}  // namespace

std::string solve_json(const WeightedTetMesh& mesh, const SolveResult& res, double epsilon,
                       const std::string& algorithm, const ApproxGraph* graph, bool with_paths) {
    std::ostringstream o;
    o << "{\n  \"source\": " << res.source << ",\n  \"epsilon\": " << fmt(epsilon)
      << ",\n  \"algorithm\": \"" << algorithm << "\",\n  \"distances\": [";
    for (int v = 0; v < (int)mesh.vertices().size(); ++v) {
        o << (v ? "," : "") << "\n    {\"node\": " << v << ", \"delta\": "
          << (std::isfinite(res.dist[v]) ? fmt(res.dist[v]) : std::string("null")) << "}";
    }
    o << "\n  ],\n";
    if (with_paths && graph) {
        o << "  \"paths\": [";
        bool first = true;
        for (int v = 0; v < (int)mesh.vertices().size(); ++v) {
            if (v == res.source || !std::isfinite(res.dist[v])) continue;
            GeodesicPath p = extract_path(*graph, res, v);
            o << (first ? "" : ",") << "\n    {\"target\": " << v << ", \"points\": [";
            for (size_t i = 0; i < p.points.size(); ++i)
                o << (i ? "," : "") << "[" << fmt(p.points[i].x) << "," << fmt(p.points[i].y)
                  << "," << fmt(p.points[i].z) << "]";
            o << "], \"cost\": " << fmt(p.cost) << "}";
            first = false;
        }
        o << "\n  ],\n";
    }
    o << "  \"stats\": {\"settled\": " << res.stats.settled
      << ", \"relaxations\": " << res.stats.relaxations
      << ", \"representatives\": " << res.stats.representatives
      << ", \"diagram_inserts\": " << res.stats.diagram_inserts << "}\n}\n";
    return o.str();
}

std::string audit_json(const AuditReport& rep, double epsilon) {
    std::ostringstream o;
    o << "{\n  \"epsilon\": " << fmt(epsilon) << ",\n";
    o << "  \"c_of_domain\": " << fmt(rep.c_of_domain) << ",\n";
    o << "  \"total_nodes\": " << rep.total_nodes << ",\n";
    o << "  \"violations\": " << rep.violations << ",\n";
    auto entries = [&](const std::vector<AuditEntry>& v) {
        std::ostringstream s;
        s << "[";
        for (size_t i = 0; i < v.size(); ++i)
            s << (i ? "," : "") << "{\"actual\": " << v[i].actual
              << ", \"bound\": " << fmt(v[i].bound) << "}";
        s << "]";
        return s.str();
    };
    o << "  \"per_bisector_nodes\": " << entries(rep.per_bisector) << ",\n";
    o << "  \"per_bisector_segments\": " << entries(rep.per_bisector_segs) << ",\n";
    o << "  \"per_edge_nodes\": " << entries(rep.per_edge) << ",\n";
    o << "  \"boundary_nodes\": [";
    for (size_t i = 0; i < rep.boundary_nodes.size(); ++i)
        o << (i ? "," : "") << rep.boundary_nodes[i];
    o << "]\n}\n";
    return o.str();
}

std::string diagram_json(const Diagram1D& diagram) {
    std::ostringstream o;
    o << "{\n  \"length\": " << fmt(diagram.length()) << ",\n  \"breakpoints\": [";
    auto snap = diagram.snapshot();
    for (size_t i = 0; i < snap.size(); ++i) {
        int node = snap[i].second >= 0 ? diagram.site(snap[i].second).node : -1;
        o << (i ? "," : "") << "\n    {\"x\": " << fmt(snap[i].first)
          << ", \"owner_site\": " << snap[i].second << ", \"owner_node\": " << node << "}";
    }
    o << "\n  ]\n}\n";
    return o.str();
}

}  // namespace wsp3d
