// Weighted tetrahedral domains: parsing, validation, adjacency, and the
// geometric queries (d, r, bisectors) that the discretization builds on.
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wsp3d/geometry.hpp"

namespace wsp3d {

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ParseError : MeshError {
    using MeshError::MeshError;
};
struct ValidationError : MeshError {
    using MeshError::MeshError;
};

struct Tet {
    std::array<int, 4> v;
    double weight;
};

// Canonical (sorted) vertex triple keying a face.
struct FaceRecord {
    std::array<int, 3> v;
    std::array<int, 2> tets{-1, -1};  // incident tet ids, second -1 on boundary
    double weight = 0.0;              // min of incident cell weights

    bool boundary() const { return tets[1] < 0; }
    int num_tets() const { return tets[1] < 0 ? 1 : 2; }
};

struct EdgeRecord {
    std::array<int, 2> v;
    std::vector<int> tets;   // tets containing the edge
    std::vector<int> faces;  // faces containing the edge
    double weight = 0.0;     // min of incident cell weights
};

// Dihedral-angle bisector triangle ABP of one tet edge.
struct BisectorTriangle {
    int tet = -1;
    int edge = -1;               // index into mesh.edges()
    int va = -1, vb = -1;        // edge endpoints A, B
    Vec3 apex;                   // P, on the opposite tet edge
    double gamma = 0.0;          // dihedral angle at AB
    Vec3 foot;                   // H, altitude foot of P on line AB
    double height = 0.0;         // h = |PH|
    int faces[2] = {-1, -1};     // the two faces of the dihedral wedge
};

class WeightedTetMesh {
public:
    static WeightedTetMesh from_text(const std::string& text);
    static WeightedTetMesh from_file(const std::string& path);
    // Takes raw vertices/tets, builds adjacency, validates.
    WeightedTetMesh(std::vector<Vec3> vertices, std::vector<Tet> tets,
                    double degeneracy_floor_rel = 1e-9);

    std::string serialize() const;

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<Tet>& tets() const { return tets_; }
    const std::vector<FaceRecord>& faces() const { return faces_; }
    const std::vector<EdgeRecord>& edges() const { return edges_; }
    const std::vector<BisectorTriangle>& bisectors() const { return bisectors_; }

    int face_index(std::array<int, 3> tri) const;  // -1 when absent
    int edge_index(int a, int b) const;            // -1 when absent
    const std::vector<int>& vertex_edges(int v) const { return vertex_edges_[v]; }
    const std::vector<int>& vertex_tets(int v) const { return vertex_tets_[v]; }

    // Bisectors of tet t, one per edge, in a fixed order.
    const std::array<int, 6>& tet_bisectors(int t) const { return tet_bisectors_[t]; }

    Vec3 tet_vertex(int t, int corner) const { return vertices_[tets_[t].v[corner]]; }
    Plane face_plane(int f) const;
    std::array<Vec3, 3> face_points(int f) const;

    // Paper quantities. d_at_vertex/d_at_edge_point evaluate d(x) by exact
    // point-triangle distance to every face of the boundary set; the witness
    // (closest boundary point) is optionally reported.
    double d_at_vertex(int v, Vec3* witness = nullptr) const;
    double d_at_edge_point(int e, double t, Vec3* witness = nullptr) const;  // t in (0,1)
    double vertex_radius(int v) const { return d_at_vertex(v) / 14.0; }
    double edge_point_radius(int e, double t) const { return d_at_edge_point(e, t) / 24.0; }
    // Maximum of r(x) over the edge and the point M_e where it is attained.
    std::pair<double, Vec3> edge_radius(int e) const;
    double edge_radius_param(int e) const;  // parameter of M_e along the edge

    // Faces of the boundary set entering d(.): for a vertex, boundary faces of
    // D(v) not incident to v; for an edge, boundary faces of D(e) not
    // containing e.
    const std::vector<int>& vertex_dfaces(int v) const { return vertex_dfaces_[v]; }
    const std::vector<int>& edge_dfaces(int e) const { return edge_dfaces_[e]; }

    // Minimum angle between edge e and the planes of its d-faces (alpha(e)).
    double edge_face_angle(int e) const;

    double bbox_diagonal() const { return bbox_diag_; }
    double scale() const { return bbox_diag_; }

private:
    void build_adjacency();
    void validate(double degeneracy_floor_rel);
    void build_bisectors();
    void build_dfaces();

    std::vector<Vec3> vertices_;
    std::vector<Tet> tets_;
    std::vector<FaceRecord> faces_;
    std::vector<EdgeRecord> edges_;
    std::vector<BisectorTriangle> bisectors_;
    std::map<std::array<int, 3>, int> face_lookup_;
    std::map<std::array<int, 2>, int> edge_lookup_;
    std::vector<std::vector<int>> vertex_edges_;
    std::vector<std::vector<int>> vertex_tets_;
    std::vector<std::vector<int>> vertex_dfaces_;
    std::vector<std::vector<int>> edge_dfaces_;
    std::vector<std::array<int, 6>> tet_bisectors_;
    double bbox_diag_ = 0.0;
};

// 17-significant-digit float formatting shared by the serializer and the CLI
// JSON output (canonical, locale-independent).
std::string format_double(double v);

}  // namespace wsp3d
