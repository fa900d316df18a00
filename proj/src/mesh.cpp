#include "wsp3d/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace wsp3d {

namespace {

std::array<int, 3> sorted3(int a, int b, int c) {
    std::array<int, 3> t{a, b, c};
    std::sort(t.begin(), t.end());
    return t;
}

std::array<int, 2> sorted2(int a, int b) {
    return a < b ? std::array<int, 2>{a, b} : std::array<int, 2>{b, a};
}

// Candidate intersection points of two closed tets: contained vertices plus
// edge/face crossings. The true intersection polytope's vertices are a subset.
void tet_pair_intersection_points(const std::array<Vec3, 4>& A, const std::array<Vec3, 4>& B,
                                  std::vector<Vec3>& out) {
    static const int kFaces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    static const int kEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

    auto inside = [](const std::array<Vec3, 4>& T, const Vec3& p, double eps) {
        double vol = signed_tet_volume(T[0], T[1], T[2], T[3]);
        double sgn = vol >= 0 ? 1.0 : -1.0;
        for (auto& f : kFaces) {
            // face plane oriented so the remaining vertex is positive
            int opp = 6 - f[0] - f[1] - f[2];
            Vec3 n = cross(T[f[1]] - T[f[0]], T[f[2]] - T[f[0]]);
            double s = dot(T[opp] - T[f[0]], n) >= 0 ? 1.0 : -1.0;
            if (s * dot(p - T[f[0]], n) < -eps * norm(n)) return false;
        }
        (void)sgn;
        return true;
    };

    double sc = 0.0;
    for (auto& p : A) sc = std::max(sc, norm(p));
    for (auto& p : B) sc = std::max(sc, norm(p));
    double eps = 1e-12 * std::max(sc, 1.0);

    for (auto& p : A)
        if (inside(B, p, eps)) out.push_back(p);
    for (auto& p : B)
        if (inside(A, p, eps)) out.push_back(p);

    auto edge_face = [&](const std::array<Vec3, 4>& TE, const std::array<Vec3, 4>& TF) {
        for (auto& e : kEdges) {
            for (auto& f : kFaces) {
                Plane pl = plane_through(TF[f[0]], TF[f[1]], TF[f[2]]);
                if (norm(pl.n) == 0.0) continue;
                Vec3 x;
                if (!segment_plane_intersection(TE[e[0]], TE[e[1]], pl, x)) continue;
                if (point_in_triangle(x, TF[f[0]], TF[f[1]], TF[f[2]], -1e-10) &&
                    inside(TF, x, eps) && inside(TE, x, eps))
                    out.push_back(x);
            }
        }
    };
    edge_face(A, B);
    edge_face(B, A);
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

WeightedTetMesh WeightedTetMesh::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open mesh file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

WeightedTetMesh WeightedTetMesh::from_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto next_line = [&](std::istringstream& ls) {
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            // skip blank lines
            if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
            ls.clear();
            ls.str(line);
            return true;
        }
        return false;
    };

    auto fail = [&](const std::string& what) -> void {
        throw ParseError("line " + std::to_string(lineno) + ": " + what);
    };

    std::istringstream ls;
    if (!next_line(ls)) fail("empty document");
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "wtet" || version != 1)
        fail("expected header 'wtet 1'");

    if (!next_line(ls)) fail("missing vertex section");
    std::string kw;
    long nv = 0;
    if (!(ls >> kw >> nv) || kw != "vertices" || nv < 0) fail("expected 'vertices N'");

    std::vector<Vec3> verts;
    verts.reserve(nv);
    for (long i = 0; i < nv; ++i) {
        if (!next_line(ls)) fail("vertex count mismatch");
        Vec3 p;
        if (!(ls >> p.x >> p.y >> p.z)) fail("malformed vertex line");
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            fail("non-finite vertex coordinate");
        verts.push_back(p);
    }

    if (!next_line(ls)) fail("missing tet section");
    long nt = 0;
    if (!(ls >> kw >> nt) || kw != "tets" || nt < 0) fail("expected 'tets M'");

    std::vector<Tet> tets;
    tets.reserve(nt);
    for (long i = 0; i < nt; ++i) {
        if (!next_line(ls)) fail("tet count mismatch");
        Tet t;
        if (!(ls >> t.v[0] >> t.v[1] >> t.v[2] >> t.v[3] >> t.weight)) fail("malformed tet line");
        for (int k = 0; k < 4; ++k)
            if (t.v[k] < 0 || t.v[k] >= (long)verts.size()) fail("vertex index out of range");
        tets.push_back(t);
    }
    if (next_line(ls)) fail("trailing content after tet section");

    return WeightedTetMesh(std::move(verts), std::move(tets));
}

std::string WeightedTetMesh::serialize() const {
    std::ostringstream out;
    out << "wtet 1\n";
    out << "vertices " << vertices_.size() << "\n";
    for (auto& p : vertices_)
        out << format_double(p.x) << " " << format_double(p.y) << " " << format_double(p.z)
            << "\n";
    out << "tets " << tets_.size() << "\n";
    for (auto& t : tets_)
        out << t.v[0] << " " << t.v[1] << " " << t.v[2] << " " << t.v[3] << " "
            << format_double(t.weight) << "\n";
    return out.str();
}

WeightedTetMesh::WeightedTetMesh(std::vector<Vec3> vertices, std::vector<Tet> tets,
                                 double degeneracy_floor_rel)
    : vertices_(std::move(vertices)), tets_(std::move(tets)) {
    if (tets_.empty()) throw ValidationError("mesh has no tetrahedra");

    Vec3 lo = vertices_[0], hi = vertices_[0];
    for (auto& p : vertices_) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    bbox_diag_ = dist(lo, hi);
    if (bbox_diag_ <= 0.0) throw ValidationError("degenerate bounding box");

    build_adjacency();
    validate(degeneracy_floor_rel);
    build_bisectors();
    build_dfaces();
}

void WeightedTetMesh::build_adjacency() {
    static const int kFaces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
    static const int kEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

    vertex_edges_.assign(vertices_.size(), {});
    vertex_tets_.assign(vertices_.size(), {});

    for (int t = 0; t < (int)tets_.size(); ++t) {
        auto& tv = tets_[t].v;
        std::set<int> uniq(tv.begin(), tv.end());
        if (uniq.size() != 4) throw ValidationError("tet " + std::to_string(t) + " repeats a vertex");
        for (int k = 0; k < 4; ++k) vertex_tets_[tv[k]].push_back(t);

        for (auto& f : kFaces) {
            auto key = sorted3(tv[f[0]], tv[f[1]], tv[f[2]]);
            auto it = face_lookup_.find(key);
            if (it == face_lookup_.end()) {
                FaceRecord rec;
                rec.v = key;
                rec.tets = {t, -1};
                rec.weight = tets_[t].weight;
                face_lookup_[key] = (int)faces_.size();
                faces_.push_back(rec);
            } else {
                FaceRecord& rec = faces_[it->second];
                if (rec.tets[1] >= 0)
                    throw ValidationError("face shared by more than two tets (non-conforming)");
                rec.tets[1] = t;
                rec.weight = std::min(rec.weight, tets_[t].weight);
            }
        }
        for (auto& e : kEdges) {
            auto key = sorted2(tv[e[0]], tv[e[1]]);
            auto it = edge_lookup_.find(key);
            int idx;
            if (it == edge_lookup_.end()) {
                EdgeRecord rec;
                rec.v = key;
                rec.weight = tets_[t].weight;
                idx = (int)edges_.size();
                edge_lookup_[key] = idx;
                edges_.push_back(rec);
                vertex_edges_[key[0]].push_back(idx);
                vertex_edges_[key[1]].push_back(idx);
            } else {
                idx = it->second;
                edges_[idx].weight = std::min(edges_[idx].weight, tets_[t].weight);
            }
            edges_[idx].tets.push_back(t);
        }
    }

    for (int f = 0; f < (int)faces_.size(); ++f) {
        auto& rec = faces_[f];
        for (int i = 0; i < 3; ++i) {
            int e = edge_index(rec.v[i], rec.v[(i + 1) % 3]);
            edges_[e].faces.push_back(f);
        }
    }
}

void WeightedTetMesh::validate(double degeneracy_floor_rel) {
    double floor = degeneracy_floor_rel * bbox_diag_;

    for (int t = 0; t < (int)tets_.size(); ++t) {
        auto& tt = tets_[t];
        if (!(tt.weight > 0.0) || !std::isfinite(tt.weight))
            throw ValidationError("tet " + std::to_string(t) + " has non-positive weight");
        std::array<Vec3, 4> p;
        for (int k = 0; k < 4; ++k) p[k] = vertices_[tt.v[k]];
        double vol = std::abs(signed_tet_volume(p[0], p[1], p[2], p[3]));
        // min altitude as the degeneracy measure
        double min_h = kInf;
        static const int kFaces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
        for (int k = 0; k < 4; ++k) {
            auto& f = kFaces[k];
            double area = 0.5 * norm(cross(p[f[1]] - p[f[0]], p[f[2]] - p[f[0]]));
            if (area <= 0.0) { min_h = 0.0; break; }
            min_h = std::min(min_h, 3.0 * vol / area);
        }
        if (min_h < floor)
            throw ValidationError("tet " + std::to_string(t) + " is degenerate (min altitude " +
                                  format_double(min_h) + " below floor " + format_double(floor) + ")");
    }

    // Conformity: every tet pair must intersect in exactly the convex hull of
    // their shared vertices. Candidate intersection points outside that hull
    // flag an overlap (e.g. two tets sharing half a face).
    double eps = 1e-9 * bbox_diag_;
    for (int i = 0; i < (int)tets_.size(); ++i) {
        std::array<Vec3, 4> A;
        for (int k = 0; k < 4; ++k) A[k] = vertices_[tets_[i].v[k]];
        Vec3 alo = A[0], ahi = A[0];
        for (auto& p : A) {
            alo = {std::min(alo.x, p.x), std::min(alo.y, p.y), std::min(alo.z, p.z)};
            ahi = {std::max(ahi.x, p.x), std::max(ahi.y, p.y), std::max(ahi.z, p.z)};
        }
        for (int j = i + 1; j < (int)tets_.size(); ++j) {
            std::array<Vec3, 4> B;
            for (int k = 0; k < 4; ++k) B[k] = vertices_[tets_[j].v[k]];
            bool sep = false;
            Vec3 blo = B[0], bhi = B[0];
            for (auto& p : B) {
                blo = {std::min(blo.x, p.x), std::min(blo.y, p.y), std::min(blo.z, p.z)};
                bhi = {std::max(bhi.x, p.x), std::max(bhi.y, p.y), std::max(bhi.z, p.z)};
            }
            if (blo.x > ahi.x + eps || bhi.x < alo.x - eps || blo.y > ahi.y + eps ||
                bhi.y < alo.y - eps || blo.z > ahi.z + eps || bhi.z < alo.z - eps)
                sep = true;
            if (sep) continue;

            std::vector<int> shared;
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    if (tets_[i].v[a] == tets_[j].v[b]) shared.push_back(tets_[i].v[a]);

            std::vector<Vec3> pts;
            tet_pair_intersection_points(A, B, pts);
            for (auto& q : pts) {
                double d;
                if (shared.empty()) {
                    d = kInf;
                } else if (shared.size() == 1) {
                    d = dist(q, vertices_[shared[0]]);
                } else if (shared.size() == 2) {
                    d = dist(q, closest_on_segment(q, vertices_[shared[0]], vertices_[shared[1]]));
                } else {
                    d = dist_point_triangle(q, vertices_[shared[0]], vertices_[shared[1]],
                                            vertices_[shared[2]]);
                }
                if (d > 10 * eps)
                    throw ValidationError("tets " + std::to_string(i) + " and " + std::to_string(j) +
                                          " overlap beyond a shared element (non-conforming)");
            }
        }
    }

    // Connectivity over shared vertices.
    std::vector<int> comp(tets_.size(), -1);
    std::vector<int> stack{0};
    comp[0] = 0;
    while (!stack.empty()) {
        int t = stack.back();
        stack.pop_back();
        for (int k = 0; k < 4; ++k)
            for (int other : vertex_tets_[tets_[t].v[k]])
                if (comp[other] < 0) {
                    comp[other] = 0;
                    stack.push_back(other);
                }
    }
    for (int t = 0; t < (int)tets_.size(); ++t)
        if (comp[t] < 0) throw ValidationError("domain is disconnected");
}

void WeightedTetMesh::build_bisectors() {
    static const int kEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    tet_bisectors_.assign(tets_.size(), {});

    for (int t = 0; t < (int)tets_.size(); ++t) {
        auto& tv = tets_[t].v;
        for (int k = 0; k < 6; ++k) {
            int ia = tv[kEdges[k][0]], ib = tv[kEdges[k][1]];
            int ic = -1, id = -1;
            for (int m = 0; m < 4; ++m) {
                if (tv[m] == ia || tv[m] == ib) continue;
                (ic < 0 ? ic : id) = tv[m];
            }
            Vec3 A = vertices_[ia], B = vertices_[ib], C = vertices_[ic], D = vertices_[id];

            BisectorTriangle bt;
            bt.tet = t;
            bt.edge = edge_index(ia, ib);
            bt.va = ia;
            bt.vb = ib;
            bt.gamma = dihedral_angle(A, B, C, D);

            // P = intersection of the bisecting half-plane with the opposite
            // edge CD; the bisecting plane contains AB and the bisector of the
            // two in-plane directions toward C and D.
            Vec3 u = normalized(B - A);
            auto perp = [&](const Vec3& q) {
                Vec3 w = q - A;
                return normalized(w - u * dot(w, u));
            };
            Vec3 w = normalized(perp(C) + perp(D));
            Vec3 m = cross(u, w);  // normal of the bisecting plane
            double denom = dot(m, D - C);
            double s = denom != 0.0 ? dot(m, A - C) / denom : 0.5;
            s = std::min(1.0, std::max(0.0, s));
            bt.apex = C + (D - C) * s;

            Vec3 ap = bt.apex - A;
            bt.foot = A + u * dot(ap, u);
            bt.height = dist(bt.apex, bt.foot);

            auto fidx = [&](int x, int y, int z) { return face_index(sorted3(x, y, z)); };
            bt.faces[0] = fidx(ia, ib, ic);
            bt.faces[1] = fidx(ia, ib, id);

            tet_bisectors_[t][k] = (int)bisectors_.size();
            bisectors_.push_back(bt);
        }
    }
}

void WeightedTetMesh::build_dfaces() {
    vertex_dfaces_.assign(vertices_.size(), {});
    // Boundary faces of D(v): faces of tets containing v whose other side is
    // not in D(v); excluded when incident to v itself.
    for (int v = 0; v < (int)vertices_.size(); ++v) {
        std::set<int> in_dv(vertex_tets_[v].begin(), vertex_tets_[v].end());
        std::set<int> out;
        for (int t : vertex_tets_[v]) {
            static const int kFaces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
            for (auto& f : kFaces) {
                auto& tv = tets_[t].v;
                auto key = sorted3(tv[f[0]], tv[f[1]], tv[f[2]]);
                if (key[0] == v || key[1] == v || key[2] == v) continue;
                int fi = face_index(key);
                const FaceRecord& rec = faces_[fi];
                int other = rec.tets[0] == t ? rec.tets[1] : rec.tets[0];
                if (other < 0 || !in_dv.count(other)) out.insert(fi);
            }
        }
        vertex_dfaces_[v].assign(out.begin(), out.end());
    }

    edge_dfaces_.assign(edges_.size(), {});
    for (int e = 0; e < (int)edges_.size(); ++e) {
        std::set<int> in_de(edges_[e].tets.begin(), edges_[e].tets.end());
        std::set<int> out;
        int a = edges_[e].v[0], b = edges_[e].v[1];
        for (int t : edges_[e].tets) {
            static const int kFaces[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};
            for (auto& f : kFaces) {
                auto& tv = tets_[t].v;
                auto key = sorted3(tv[f[0]], tv[f[1]], tv[f[2]]);
                bool has_a = key[0] == a || key[1] == a || key[2] == a;
                bool has_b = key[0] == b || key[1] == b || key[2] == b;
                if (has_a && has_b) continue;  // face contains the edge
                int fi = face_index(key);
                const FaceRecord& rec = faces_[fi];
                int other = rec.tets[0] == t ? rec.tets[1] : rec.tets[0];
                if (other < 0 || !in_de.count(other)) out.insert(fi);
            }
        }
        edge_dfaces_[e].assign(out.begin(), out.end());
    }
}

int WeightedTetMesh::face_index(std::array<int, 3> tri) const {
    std::sort(tri.begin(), tri.end());
    auto it = face_lookup_.find(tri);
    return it == face_lookup_.end() ? -1 : it->second;
}

int WeightedTetMesh::edge_index(int a, int b) const {
    auto it = edge_lookup_.find(sorted2(a, b));
    return it == edge_lookup_.end() ? -1 : it->second;
}

Plane WeightedTetMesh::face_plane(int f) const {
    auto& rec = faces_[f];
    return plane_through(vertices_[rec.v[0]], vertices_[rec.v[1]], vertices_[rec.v[2]]);
}

std::array<Vec3, 3> WeightedTetMesh::face_points(int f) const {
    auto& rec = faces_[f];
    return {vertices_[rec.v[0]], vertices_[rec.v[1]], vertices_[rec.v[2]]};
}

double WeightedTetMesh::d_at_vertex(int v, Vec3* witness) const {
    if (v < 0 || v >= (int)vertices_.size()) throw MeshError("vertex id out of range");
    double best = kInf;
    for (int f : vertex_dfaces_[v]) {
        auto p = face_points(f);
        Vec3 c = closest_on_triangle(vertices_[v], p[0], p[1], p[2]);
        double d = dist(vertices_[v], c);
        if (d < best) {
            best = d;
            if (witness) *witness = c;
        }
    }
    if (!std::isfinite(best)) throw MeshError("vertex has no boundary face in D(v)");
    return best;
}

double WeightedTetMesh::d_at_edge_point(int e, double t, Vec3* witness) const {
    if (e < 0 || e >= (int)edges_.size()) throw MeshError("edge id out of range");
    if (!(t > 0.0 && t < 1.0)) throw MeshError("edge parameter must be interior");
    auto& rec = edges_[e];
    Vec3 x = vertices_[rec.v[0]] + (vertices_[rec.v[1]] - vertices_[rec.v[0]]) * t;
    double best = kInf;
    for (int f : edge_dfaces_[e]) {
        auto p = face_points(f);
        Vec3 c = closest_on_triangle(x, p[0], p[1], p[2]);
        double d = dist(x, c);
        if (d < best) {
            best = d;
            if (witness) *witness = c;
        }
    }
    if (!std::isfinite(best)) throw MeshError("edge has no boundary face in D(e)");
    return best;
}

double WeightedTetMesh::edge_radius_param(int e) const {
    // d(x) along the edge is a min of piecewise-smooth face distances, not
    // globally unimodal: 1024-sample guard, then iterative grid refinement
    // around the best station.
    const int kStations = 1024;
    double best = -kInf, best_t = 0.5;
    for (int i = 1; i < kStations; ++i) {
        double t = (double)i / kStations;
        double d = d_at_edge_point(e, t);
        if (d > best) {
            best = d;
            best_t = t;
        }
    }
    double lo = std::max(1e-9, best_t - 1.0 / kStations);
    double hi = std::min(1.0 - 1e-9, best_t + 1.0 / kStations);
    for (int round = 0; round < 9; ++round) {
        const int n = 32;
        double bt = best_t;
        for (int i = 0; i <= n; ++i) {
            double t = lo + (hi - lo) * i / n;
            double d = d_at_edge_point(e, t);
            if (d > best) {
                best = d;
                bt = t;
            }
        }
        double w = (hi - lo) / n;
        best_t = bt;
        lo = std::max(1e-9, bt - w);
        hi = std::min(1.0 - 1e-9, bt + w);
    }
    return best_t;
}

std::pair<double, Vec3> WeightedTetMesh::edge_radius(int e) const {
    double t = edge_radius_param(e);
    auto& rec = edges_[e];
    Vec3 m = vertices_[rec.v[0]] + (vertices_[rec.v[1]] - vertices_[rec.v[0]]) * t;
    return {d_at_edge_point(e, t) / 24.0, m};
}

double WeightedTetMesh::edge_face_angle(int e) const {
    auto& rec = edges_[e];
    Vec3 u = normalized(vertices_[rec.v[1]] - vertices_[rec.v[0]]);
    double best = kInf;
    for (int f : edge_dfaces_[e]) {
        Plane pl = face_plane(f);
        double s = std::abs(dot(pl.n, u));
        best = std::min(best, std::asin(std::min(1.0, s)));
    }
    return best;
}

}  // namespace wsp3d
