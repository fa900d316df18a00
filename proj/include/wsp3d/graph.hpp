// The approximation graph: nodes from the discretization, Steiner segments
// (bisector lines plus the mesh edges themselves), edge groups keyed by
// ordered triples (l, l1, f), adjacency intervals, and local-path edge costs.
#pragma once

#include <cstdint>
#include <vector>

#include "wsp3d/discretization.hpp"
#include "wsp3d/refraction.hpp"

namespace wsp3d {

enum class NodeRole : uint8_t { Vertex, Edge, Bisector };

struct GraphNode {
    Vec3 pos;
    NodeRole role;
    int owner;  // vertex id / edge id / bisector id
};

struct GraphSegment {
    enum class Kind : uint8_t { BisectorLine, MeshEdge } kind;
    int bisector = -1;    // hosting bisector for lines; -1 for mesh edges
    int edge = -1;        // mesh edge id (lines: the bisector's edge)
    int line_index = 0;   // i for L_i, 0 for mesh edges
    Vec3 origin;
    Vec3 dir;             // unit
    double length = 0.0;
    double weight = 0.0;  // travel weight along the segment (mesh edges only)
    std::vector<int> nodes;  // global node ids ordered along dir
    std::vector<double> t;   // abscissas of the nodes
};

struct Triple {
    int seg_src = -1;
    int seg_tgt = -1;
    int face = -1;
    double w_src = 0, w_face = 0, w_tgt = 0;
};

// Contiguous runs of target-segment node indices reachable from one node.
struct AdjacencyIntervals {
    std::vector<std::pair<int, int>> runs;  // inclusive [lo, hi] indices
    bool contains(int idx) const {
        for (auto& r : runs)
            if (idx >= r.first && idx <= r.second) return true;
        return false;
    }
    int count() const { return (int)runs.size(); }
};

// Per-(node, triple) evaluation context; precomputes the planar frame so that
// each target node costs one profile call.
struct TripleScan {
    const GraphSegment* tgt = nullptr;
    CostProfile prof;
    double tc = 0.0;     // abscissa of the source's closest point on the target line
    double ylat2 = 0.0;  // squared lateral offset
    Vec3 src_proj;       // source projected onto the face plane
    Vec3 n;              // face plane normal
    std::array<Vec3, 3> face_pts;
    std::array<double, 3> face_alt;
    double inset = 0.0;

    double rho(double t) const {
        double d = t - tc;
        return std::sqrt(d * d + ylat2);
    }
    double cost_at(double t) const { return prof.cost(rho(t)); }
    double dcost_dt(double t) const {
        double r = rho(t);
        return r > 0 ? prof.dcost(r) * (t - tc) / r : 0.0;
    }
    // Admissibility: every bending point strictly inside the face, or the
    // degenerate one-bend contact where the path leaves F at the on-plane
    // endpoint itself.
    bool admissible(const Vec3& tgt_pos, double t) const;
    // 3-d bending points of the local path to the node at abscissa t.
    int bend_points(const Vec3& tgt_pos, double t, std::array<Vec3, 2>& out) const;
};

struct GraphCounts {
    long nodes = 0;
    long segments = 0;
    long triples = 0;
};

class ApproxGraph {
public:
    ApproxGraph(const WeightedTetMesh& mesh, const Discretization& disc);

    const WeightedTetMesh& mesh() const { return *mesh_; }
    const Discretization& disc() const { return *disc_; }
    const std::vector<GraphNode>& nodes() const { return nodes_; }
    const std::vector<GraphSegment>& segments() const { return segments_; }
    const std::vector<Triple>& triples() const { return triples_; }

    // (segment id, index within segment) memberships of a node
    const std::vector<std::pair<int, int>>& node_segments(int node) const {
        return node_segments_[node];
    }
    const std::vector<int>& triples_from_segment(int seg) const { return seg_triples_[seg]; }

    TripleScan make_scan(int node, int triple) const;
    TripleScan make_scan(const Vec3& pos, int triple) const;

    // Full-scan adjacency intervals of `node` toward the triple's target.
    AdjacencyIntervals adjacency_intervals(int node, int triple) const;
    // Cost of the admissible edge (u, v) through the triple's face.
    double edge_cost(int u, int v, int triple) const;

    GraphCounts counts() const;

    double scale() const { return mesh_->scale(); }

private:
    const WeightedTetMesh* mesh_;
    const Discretization* disc_;
    std::vector<GraphNode> nodes_;
    std::vector<GraphSegment> segments_;
    std::vector<Triple> triples_;
    std::vector<std::vector<std::pair<int, int>>> node_segments_;
    std::vector<std::vector<int>> seg_triples_;
};

}  // namespace wsp3d
