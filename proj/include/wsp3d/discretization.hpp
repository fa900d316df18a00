// Steiner-point placement: vertex/edge vicinities, geometric-progression
// sequences on mesh edges, and the lambda-progression of parallel segments on
// dihedral bisectors, with count auditing against the closed-form bounds.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wsp3d/convex.hpp"
#include "wsp3d/mesh.hpp"

namespace wsp3d {

struct DiscretizationParams {
    double epsilon = 0.5;          // in (0, 1]
    int vicinity_stations = 64;    // stations along an edge for the spindle hull
    double snap_rel = 1e-12;       // boundary snapping, relative to mesh scale

    double lambda(double gamma) const {
        return 1.0 / (1.0 + std::sqrt(epsilon / 8.0) * std::sin(gamma / 2.0));
    }
};

struct Vicinity {
    enum class Kind { Vertex, Edge } kind;
    int owner;  // vertex id or edge id
    ConvexPolytope hull;
    // quick-reject shell: farther than r_out from segment [a,b] is outside
    Vec3 a, b;
    double r_out = 0.0;

    bool contains(const Vec3& p, double tol) const;
};

struct EdgeDiscretization {
    int edge = -1;
    std::vector<double> params;  // sorted parameters in (0,1): A' .. M_e .. B'
    int me_index = -1;           // position of M_e in params
    double r_edge = 0.0;         // r(e)
    double t_me = 0.5;           // parameter of M_e
};

struct SteinerSegment {
    int bisector = -1;
    int line_index = 0;  // i >= 1
    double p = 0.0;      // distance h*lambda^i from AB
    Vec3 a, b;           // chord endpoints A_i, B_i on the bisector sides
    std::vector<Vec3> nodes;
    std::vector<uint8_t> on_boundary;  // 1 for vicinity-boundary intersection nodes
};

struct BisectorDiscretization {
    int bisector = -1;
    std::vector<SteinerSegment> segments;
    long interior_nodes = 0;
    long boundary_nodes = 0;
    long total_nodes() const { return interior_nodes + boundary_nodes; }
};

struct AuditEntry {
    long actual = 0;
    double bound = 0.0;
    bool ok() const { return (double)actual <= bound; }
};

struct AuditReport {
    std::vector<AuditEntry> per_bisector;       // total node count vs C_ABP bound
    std::vector<AuditEntry> per_bisector_segs;  // segment count vs C^1_ABP bound
    std::vector<AuditEntry> per_edge;           // edge node count vs C_e bound
    std::vector<long> boundary_nodes;           // reported separately per bisector
    double c_of_domain = 0.0;                   // average C_ABP over all bisectors
    long total_nodes = 0;
    int violations = 0;
};

struct SnapResult {
    Vec3 node;
    int line_index = -1;
    double angle = 0.0;   // max(angle x2-x1-q, angle x1-x2-q)
    double detour = 0.0;  // (|x1 q| + |q x2|) / |x1 x2|
};

class Discretization {
public:
    Discretization(const WeightedTetMesh& mesh, DiscretizationParams params,
                   bool store_nodes = true);

    const WeightedTetMesh& mesh() const { return *mesh_; }
    const DiscretizationParams& params() const { return params_; }

    const std::vector<Vicinity>& vertex_vicinities() const { return vertex_vic_; }
    const std::vector<Vicinity>& edge_vicinities() const { return edge_vic_; }
    const std::vector<EdgeDiscretization>& edge_points() const { return edge_points_; }
    const std::vector<BisectorDiscretization>& bisector_points() const { return bisector_points_; }

    double vertex_r(int v) const { return vertex_r_[v]; }
    double edge_r(int e) const { return edge_points_[e].r_edge; }

    bool in_vicinity_union(int bisector, const Vec3& p, double tol) const;

    // Snapping witness for a cell-crossing segment: the nearest node on the
    // deepest bisector line farther from AB than the crossing point of (x1,x2);
    // bounds both the detour and the bending angles introduced.
    SnapResult snap_to_bisector(const Vec3& x1, const Vec3& x2, int bisector) const;

    AuditReport audit() const;

    long total_nodes() const;

private:
    void build_vicinities();
    EdgeDiscretization place_edge(int e) const;
    BisectorDiscretization place_bisector(int b, bool store) const;

    const WeightedTetMesh* mesh_;
    DiscretizationParams params_;
    double snap_ = 0.0;
    std::vector<double> vertex_r_;
    std::vector<Vicinity> vertex_vic_;
    std::vector<Vicinity> edge_vic_;
    std::vector<EdgeDiscretization> edge_points_;
    std::vector<BisectorDiscretization> bisector_points_;
};

}  // namespace wsp3d
