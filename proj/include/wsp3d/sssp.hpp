// Single-source shortest paths on the approximation graph: baseline Dijkstra
// over materialized edge groups, the pruned solver driven by dynamic additive
// Voronoi/propagation diagrams, path extraction, and the epsilon audit.
#pragma once

#include <string>
#include <vector>

#include "wsp3d/graph.hpp"
#include "wsp3d/voronoi.hpp"

namespace wsp3d {

struct SolverStats {
    long settled = 0;
    long relaxations = 0;        // candidate edges evaluated
    long representatives = 0;    // representative computations (pruned)
    long max_reps_per_insert = 0;  // worst per-(node, triple) representative burst
    long diagram_inserts = 0;    // Voronoi insertions (pruned)
    double wall_seconds = 0.0;
};

struct SolveResult {
    int source = -1;
    std::vector<double> dist;        // per graph node; +inf when unreachable
    std::vector<int> pred;           // predecessor node id, -1 at the source
    std::vector<int> pred_triple;    // triple id; -2 for edge-chain hops
    SolverStats stats;
};

SolveResult dijkstra_baseline(const ApproxGraph& g, int source);
SolveResult sssp_pruned(const ApproxGraph& g, int source);

// Segment kinds of an extracted path.
enum class SegKind : uint8_t { CellCrossing = 0, FaceUsing = 1, EdgeUsing = 2 };

struct GeodesicPath {
    std::vector<Vec3> points;
    std::vector<double> seg_weights;  // per segment (points.size()-1)
    std::vector<SegKind> seg_kinds;
    double cost = 0.0;

    double recompute_cost() const {
        double c = 0.0;
        for (size_t i = 0; i + 1 < points.size(); ++i)
            c += seg_weights[i] * dist(points[i], points[i + 1]);
        return c;
    }
};

GeodesicPath extract_path(const ApproxGraph& g, const SolveResult& res, int target);

struct EpsilonAuditRow {
    int vertex;
    double d_coarse, d_fine, ratio;
};
struct EpsilonAuditReport {
    std::vector<EpsilonAuditRow> rows;
    double max_ratio = 0.0;
    double eps_coarse = 0.0, eps_fine = 0.0;
    bool ok = false;
};

EpsilonAuditReport epsilon_audit(const WeightedTetMesh& mesh, int source_vertex,
                                 double eps_coarse, double eps_fine);

}  // namespace wsp3d
