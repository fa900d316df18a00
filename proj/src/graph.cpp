#include "wsp3d/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wsp3d {

bool TripleScan::admissible(const Vec3& tgt_pos, double t) const {
    std::array<Vec3, 2> b;
    int nb = bend_points(tgt_pos, t, b);
    if (nb == 0) {
        // the path leaves F at an endpoint lying on it; admissible only for
        // one-bend (vertex/edge node) contacts
        return prof.z_src() == 0.0 || prof.z_tgt() == 0.0;
    }
    for (int i = 0; i < nb; ++i) {
        auto bc = barycentric(b[i], face_pts[0], face_pts[1], face_pts[2]);
        for (int k = 0; k < 3; ++k)
            if (!(bc[k] * face_alt[k] > inset)) return false;
    }
    return true;
}

int TripleScan::bend_points(const Vec3& tgt_pos, double t, std::array<Vec3, 2>& out) const {
    Vec3 tgt_proj = tgt_pos - n * dot(tgt_pos - face_pts[0], n);
    double r = rho(t);
    std::array<double, 2> s;
    int nb = prof.bends(r, s);
    Vec3 dir = r > 0 ? (tgt_proj - src_proj) / r : Vec3{0, 0, 0};
    for (int i = 0; i < nb; ++i) out[i] = src_proj + dir * s[i];
    return nb;
}

namespace {

// Order bisector-line segments of one bisector after the discretization.
void append_bisector_segments(const Discretization& disc, int b, int node_base,
                              std::vector<GraphNode>& nodes, std::vector<GraphSegment>& segs) {
    (void)node_base;
    const auto& bd = disc.bisector_points()[b];
    const auto& mesh = disc.mesh();
    const auto& bt = mesh.bisectors()[b];
    for (const auto& s : bd.segments) {
        if (s.nodes.empty()) continue;
        GraphSegment gs;
        gs.kind = GraphSegment::Kind::BisectorLine;
        gs.bisector = b;
        gs.edge = bt.edge;
        gs.line_index = s.line_index;
        gs.origin = s.a;
        double chord = dist(s.a, s.b);
        gs.dir = chord > 0 ? (s.b - s.a) / chord : Vec3{1, 0, 0};
        gs.length = chord;
        for (const auto& p : s.nodes) {
            gs.nodes.push_back((int)nodes.size());
            gs.t.push_back(dot(p - gs.origin, gs.dir));
            nodes.push_back({p, NodeRole::Bisector, b});
        }
        segs.push_back(std::move(gs));
    }
}

}  // namespace

ApproxGraph::ApproxGraph(const WeightedTetMesh& mesh, const Discretization& disc)
    : mesh_(&mesh), disc_(&disc) {
    // nodes: mesh vertices, then edge Steiner points, then bisector points
    for (int v = 0; v < (int)mesh.vertices().size(); ++v)
        nodes_.push_back({mesh.vertices()[v], NodeRole::Vertex, v});

    // one MeshEdge segment per mesh edge: vertex A, edge points, vertex B
    std::vector<int> edge_seg_of_edge(mesh.edges().size(), -1);
    for (int e = 0; e < (int)mesh.edges().size(); ++e) {
        const auto& rec = mesh.edges()[e];
        const auto& ed = disc.edge_points()[e];
        Vec3 A = mesh.vertices()[rec.v[0]], B = mesh.vertices()[rec.v[1]];
        GraphSegment gs;
        gs.kind = GraphSegment::Kind::MeshEdge;
        gs.edge = e;
        gs.origin = A;
        gs.length = dist(A, B);
        gs.dir = (B - A) / gs.length;
        gs.weight = rec.weight;
        gs.nodes.push_back(rec.v[0]);
        gs.t.push_back(0.0);
        for (double tp : ed.params) {
            gs.nodes.push_back((int)nodes_.size());
            gs.t.push_back(tp * gs.length);
            nodes_.push_back({A + (B - A) * tp, NodeRole::Edge, e});
        }
        gs.nodes.push_back(rec.v[1]);
        gs.t.push_back(gs.length);
        edge_seg_of_edge[e] = (int)segments_.size();
        segments_.push_back(std::move(gs));
    }

    for (int b = 0; b < (int)mesh.bisectors().size(); ++b)
        append_bisector_segments(disc, b, 0, nodes_, segments_);

    node_segments_.assign(nodes_.size(), {});
    for (int s = 0; s < (int)segments_.size(); ++s)
        for (int i = 0; i < (int)segments_[s].nodes.size(); ++i)
            node_segments_[segments_[s].nodes[i]].push_back({s, i});

    // segment lists per bisector: the bisector's own lines plus the hosted
    // mesh-edge segment
    std::vector<std::vector<int>> bis_lines(mesh.bisectors().size());
    for (int s = 0; s < (int)segments_.size(); ++s)
        if (segments_[s].kind == GraphSegment::Kind::BisectorLine)
            bis_lines[segments_[s].bisector].push_back(s);

    // Triples: for every face, every ordered pair of bisectors neighboring
    // with respect to it; mesh-edge segments participate only within their own
    // tet (and never pair with another mesh-edge segment).
    static const int kTetEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    seg_triples_.assign(segments_.size(), {});
    for (int f = 0; f < (int)mesh.faces().size(); ++f) {
        const auto& fr = mesh.faces()[f];
        struct Bis {
            int bisector;
            int tet;
        };
        std::vector<Bis> around;
        for (int tf = 0; tf < fr.num_tets(); ++tf) {
            int t = fr.tets[tf];
            for (int k = 0; k < 6; ++k) {
                int a = mesh.tets()[t].v[kTetEdges[k][0]];
                int b = mesh.tets()[t].v[kTetEdges[k][1]];
                bool a_in = a == fr.v[0] || a == fr.v[1] || a == fr.v[2];
                bool b_in = b == fr.v[0] || b == fr.v[1] || b == fr.v[2];
                if (a_in && b_in) around.push_back({mesh.tet_bisectors(t)[k], t});
            }
        }
        for (const auto& src : around) {
            for (const auto& tgt : around) {
                double w_src = mesh.tets()[src.tet].weight;
                double w_tgt = mesh.tets()[tgt.tet].weight;
                std::vector<int> src_segs = bis_lines[src.bisector];
                if (src.tet == tgt.tet)
                    src_segs.push_back(edge_seg_of_edge[mesh.bisectors()[src.bisector].edge]);
                std::vector<int> tgt_segs = bis_lines[tgt.bisector];
                if (src.tet == tgt.tet)
                    tgt_segs.push_back(edge_seg_of_edge[mesh.bisectors()[tgt.bisector].edge]);
                for (int ls : src_segs) {
                    for (int lt : tgt_segs) {
                        if (segments_[ls].kind == GraphSegment::Kind::MeshEdge &&
                            segments_[lt].kind == GraphSegment::Kind::MeshEdge)
                            continue;
                        Triple tr;
                        tr.seg_src = ls;
                        tr.seg_tgt = lt;
                        tr.face = f;
                        tr.w_src = w_src;
                        tr.w_face = fr.weight;
                        tr.w_tgt = w_tgt;
                        seg_triples_[ls].push_back((int)triples_.size());
                        triples_.push_back(tr);
                    }
                }
            }
        }
    }
}

TripleScan ApproxGraph::make_scan(int node, int triple) const {
    return make_scan(nodes_[node].pos, triple);
}

TripleScan ApproxGraph::make_scan(const Vec3& pos, int triple) const {
    const Triple& tr = triples_[triple];
    const GraphSegment& tgt = segments_[tr.seg_tgt];
    auto fp = mesh_->face_points(tr.face);
    Plane F = plane_through(fp[0], fp[1], fp[2]);

    double snap = 1e-12 * mesh_->scale();
    double zs = F.signed_dist(pos);
    double zt = F.signed_dist(tgt.origin);
    bool opposite = (zs <= 0 && zt >= 0) || (zs >= 0 && zt <= 0) || std::abs(zs) <= snap ||
                    std::abs(zt) <= snap;

    TripleScan scan;
    scan.tgt = &tgt;
    scan.prof = CostProfile(tr.w_src, tr.w_face, tr.w_tgt, std::abs(zs), std::abs(zt), opposite,
                            snap);
    scan.n = F.n;
    scan.src_proj = pos - F.n * zs;
    // target point at abscissa t projects to origin_proj + t*dir, so the
    // in-plane offset is m + t*dir; tc minimizes |m + t*dir|
    Vec3 m = (tgt.origin - F.n * zt) - scan.src_proj;
    scan.tc = -dot(m, tgt.dir);
    scan.ylat2 = std::max(0.0, norm2(m) - dot(m, tgt.dir) * dot(m, tgt.dir));
    scan.face_pts = fp;
    double area = 0.5 * norm(cross(fp[1] - fp[0], fp[2] - fp[0]));
    scan.face_alt = {2.0 * area / dist(fp[1], fp[2]), 2.0 * area / dist(fp[2], fp[0]),
                     2.0 * area / dist(fp[0], fp[1])};
    double fscale = std::max({dist(fp[0], fp[1]), dist(fp[1], fp[2]), dist(fp[2], fp[0])});
    scan.inset = 1e-12 * fscale;
    return scan;
}

AdjacencyIntervals ApproxGraph::adjacency_intervals(int node, int triple) const {
    TripleScan scan = make_scan(node, triple);
    const GraphSegment& tgt = *scan.tgt;
    AdjacencyIntervals out;
    int run_start = -1;
    for (int i = 0; i < (int)tgt.nodes.size(); ++i) {
        if (tgt.nodes[i] == node) {
            // a node never connects to itself
            if (run_start >= 0) {
                out.runs.push_back({run_start, i - 1});
                run_start = -1;
            }
            continue;
        }
        bool ok = scan.admissible(nodes_[tgt.nodes[i]].pos, tgt.t[i]);
        if (ok && run_start < 0) run_start = i;
        if (!ok && run_start >= 0) {
            out.runs.push_back({run_start, i - 1});
            run_start = -1;
        }
    }
    if (run_start >= 0) out.runs.push_back({run_start, (int)tgt.nodes.size() - 1});
    return out;
}

double ApproxGraph::edge_cost(int u, int v, int triple) const {
    TripleScan scan = make_scan(u, triple);
    const GraphSegment& tgt = *scan.tgt;
    for (int i = 0; i < (int)tgt.nodes.size(); ++i)
        if (tgt.nodes[i] == v) return scan.cost_at(tgt.t[i]);
    throw std::invalid_argument("v is not on the triple's target segment");
}

GraphCounts ApproxGraph::counts() const {
    return {(long)nodes_.size(), (long)segments_.size(), (long)triples_.size()};
}

}  // namespace wsp3d
