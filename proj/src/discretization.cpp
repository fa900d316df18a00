#include "wsp3d/discretization.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace wsp3d {

bool Vicinity::contains(const Vec3& p, double tol) const {
    Vec3 c = closest_on_segment(p, a, b);
    if (dist(p, c) > r_out + tol) return false;
    return hull.contains(p, tol);
}

Discretization::Discretization(const WeightedTetMesh& mesh, DiscretizationParams params,
                               bool store_nodes)
    : mesh_(&mesh), params_(params) {
    if (!(params_.epsilon > 0.0 && params_.epsilon <= 1.0))
        throw std::invalid_argument("epsilon must be in (0, 1]");
    snap_ = params_.snap_rel * mesh.scale();

    vertex_r_.resize(mesh.vertices().size());
    for (int v = 0; v < (int)mesh.vertices().size(); ++v) vertex_r_[v] = mesh.vertex_radius(v);

    build_vicinities();

    edge_points_.resize(mesh.edges().size());
    for (int e = 0; e < (int)mesh.edges().size(); ++e) {
        edge_points_[e] = place_edge(e);
    }

    bisector_points_.resize(mesh.bisectors().size());
    unsigned hw = std::thread::hardware_concurrency();
    unsigned nthreads = hw ? hw : 1;
    if (const char* env = std::getenv("WSP3D_THREADS")) {
        long v = std::atol(env);
        if (v > 0) nthreads = (unsigned)std::min<long>(v, 256);
    }
    nthreads = std::min<unsigned>(nthreads, (unsigned)mesh.bisectors().size());
    if (nthreads <= 1) {
        for (int b = 0; b < (int)mesh.bisectors().size(); ++b) {
            bisector_points_[b] = place_bisector(b, store_nodes);
        }
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (unsigned t = 0; t < nthreads; ++t)
            pool.emplace_back([&] {
                for (;;) {
                    int b = next.fetch_add(1);
                    if (b >= (int)mesh_->bisectors().size()) return;
                    bisector_points_[b] = place_bisector(b, store_nodes);
                }
            });
        for (auto& th : pool) th.join();
    }
}

void Discretization::build_vicinities() {
    const auto& mesh = *mesh_;
    double eps = params_.epsilon;

    vertex_vic_.resize(mesh.vertices().size());
    for (int v = 0; v < (int)mesh.vertices().size(); ++v) {
        Vec3 pv = mesh.vertices()[v];
        double r = eps * vertex_r_[v];
        std::vector<Vec3> pts{pv};
        for (int e : mesh.vertex_edges(v)) {
            auto& rec = mesh.edges()[e];
            int other = rec.v[0] == v ? rec.v[1] : rec.v[0];
            pts.push_back(pv + normalized(mesh.vertices()[other] - pv) * r);
        }
        Vicinity vic;
        vic.kind = Vicinity::Kind::Vertex;
        vic.owner = v;
        vic.a = vic.b = pv;
        vic.r_out = r;
        vic.hull = ConvexPolytope::hull_of(std::move(pts), mesh.scale());
        vertex_vic_[v] = std::move(vic);
    }

    edge_vic_.resize(mesh.edges().size());
    for (int e = 0; e < (int)mesh.edges().size(); ++e) {
        auto& rec = mesh.edges()[e];
        Vec3 A = mesh.vertices()[rec.v[0]], B = mesh.vertices()[rec.v[1]];
        Vec3 u = normalized(B - A);
        double len = dist(A, B);

        std::vector<Vec3> pts;
        double r_max = 0.0;
        // stations clustered geometrically toward the ends so the hull of the
        // sampled disks always overlaps both vertex vicinities
        int n = std::max(8, params_.vicinity_stations);
        int half = n / 2;
        double ta = std::min(0.45, 0.5 * eps * vertex_r_[rec.v[0]] / len);
        double tb = std::min(0.45, 0.5 * eps * vertex_r_[rec.v[1]] / len);
        double ga = std::pow(0.5 / ta, 1.0 / (half - 1));
        double gb = std::pow(0.5 / tb, 1.0 / (half - 1));
        std::vector<double> stations;
        for (int i = 0; i < half; ++i) stations.push_back(ta * std::pow(ga, i));
        for (int i = 0; i < half; ++i) stations.push_back(1.0 - tb * std::pow(gb, i));
        std::sort(stations.begin(), stations.end());
        for (double t : stations) {
            Vec3 x = A + u * (t * len);
            double r = eps * mesh.edge_point_radius(e, t);
            r_max = std::max(r_max, r);
            for (int f : rec.faces) {
                // in-face direction perpendicular to e, toward the face interior
                auto fp = mesh.face_points(f);
                int third = -1;
                for (int k = 0; k < 3; ++k)
                    if (mesh.faces()[f].v[k] != rec.v[0] && mesh.faces()[f].v[k] != rec.v[1])
                        third = mesh.faces()[f].v[k];
                Vec3 w = mesh.vertices()[third] - A;
                w = normalized(w - u * dot(w, u));
                for (double deg : {0.0, 45.0, 90.0, 135.0, 180.0}) {
                    double th = deg * M_PI / 180.0;
                    Vec3 q = x + (u * std::cos(th) + w * std::sin(th)) * r;
                    // clip the sample back into the closed face triangle
                    if (!point_in_triangle(q, fp[0], fp[1], fp[2], -1e-12)) {
                        double lo = 0.0, hi = 1.0;
                        for (int it = 0; it < 40; ++it) {
                            double mid = 0.5 * (lo + hi);
                            Vec3 m = x + (q - x) * mid;
                            if (point_in_triangle(m, fp[0], fp[1], fp[2], -1e-12))
                                lo = mid;
                            else
                                hi = mid;
                        }
                        q = x + (q - x) * lo;
                    }
                    pts.push_back(q);
                }
            }
        }
        Vicinity vic;
        vic.kind = Vicinity::Kind::Edge;
        vic.owner = e;
        vic.a = A;
        vic.b = B;
        vic.r_out = r_max;
        vic.hull = ConvexPolytope::hull_of(std::move(pts), mesh.scale());
        edge_vic_[e] = std::move(vic);
    }
}

EdgeDiscretization Discretization::place_edge(int e) const {
    const auto& mesh = *mesh_;
    auto& rec = mesh.edges()[e];
    Vec3 A = mesh.vertices()[rec.v[0]], B = mesh.vertices()[rec.v[1]];
    double len = dist(A, B);
    double eps = params_.epsilon;

    EdgeDiscretization out;
    out.edge = e;
    double ta = eps * vertex_r_[rec.v[0]] / len;        // A'
    double tb = 1.0 - eps * vertex_r_[rec.v[1]] / len;  // B'
    double tm = mesh.edge_radius_param(e);
    tm = std::min(std::max(tm, ta), tb);
    out.t_me = tm;
    out.r_edge = mesh.edge_point_radius(e, tm);

    // recursive sequence |M_{i-1} M_i| = eps * r(M_i), solved per step by
    // bisection on the step length
    auto walk = [&](double from, double stop, int dir, std::vector<double>& acc) {
        double t = from;
        for (int guard = 0; guard < 1000000; ++guard) {
            double remaining = dir > 0 ? stop - t : t - stop;
            if (remaining <= 0) break;
            auto phi = [&](double s) {
                double tn = t + dir * s / len;
                return s - eps * mesh.edge_point_radius(e, tn);
            };
            if (phi(remaining * len) < 0) break;  // next step overshoots: stop at A'/B'
            double lo = 0.0, hi = remaining * len;
            for (int it = 0; it < 80; ++it) {
                double mid = 0.5 * (lo + hi);
                if (phi(mid) < 0)
                    lo = mid;
                else
                    hi = mid;
            }
            t += dir * hi / len;
            acc.push_back(t);
        }
    };

    std::vector<double> toward_a, toward_b;
    walk(tm, ta, -1, toward_a);
    walk(tm, tb, +1, toward_b);

    out.params.push_back(ta);
    for (auto it = toward_a.rbegin(); it != toward_a.rend(); ++it)
        if (*it > ta + 1e-15) out.params.push_back(*it);
    out.me_index = (int)out.params.size();
    out.params.push_back(tm);
    for (double t : toward_b)
        if (t < tb - 1e-15) out.params.push_back(t);
    out.params.push_back(tb);
    // dedupe (M_e can coincide with A'/B' on tiny edges)
    auto last = std::unique(out.params.begin(), out.params.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-14; });
    out.params.erase(last, out.params.end());
    out.me_index = (int)(std::lower_bound(out.params.begin(), out.params.end(), tm - 1e-14) -
                         out.params.begin());
    return out;
}

bool Discretization::in_vicinity_union(int bisector, const Vec3& p, double tol) const {
    const auto& bt = mesh_->bisectors()[bisector];
    return vertex_vic_[bt.va].contains(p, tol) || vertex_vic_[bt.vb].contains(p, tol) ||
           edge_vic_[bt.edge].contains(p, tol);
}

BisectorDiscretization Discretization::place_bisector(int b, bool store) const {
    const auto& mesh = *mesh_;
    const auto& bt = mesh.bisectors()[b];
    Vec3 A = mesh.vertices()[bt.va], B = mesh.vertices()[bt.vb], P = bt.apex;
    double h = bt.height;
    double lambda = params_.lambda(bt.gamma);

    BisectorDiscretization out;
    out.bisector = b;

    const Vicinity& vicA = vertex_vic_[bt.va];
    const Vicinity& vicB = vertex_vic_[bt.vb];
    const Vicinity& vicE = edge_vic_[bt.edge];

    // hard depth floor, well below where coverage must complete
    double r_e = edge_points_[bt.edge].r_edge;
    double eps = params_.epsilon;
    double floor_p = 1e-4 * eps * eps * r_e *
                     std::min(vertex_r_[bt.va], vertex_r_[bt.vb]) / dist(A, B);

    double p_i = h;
    int empty_streak = 0;
    for (int i = 1; i < 200000 && p_i > floor_p; ++i) {
        p_i *= lambda;
        double ratio = p_i / h;
        Vec3 Ai = A + (P - A) * ratio;
        Vec3 Bi = B + (P - B) * ratio;
        double chord = dist(Ai, Bi);
        double gap = p_i * (1.0 - lambda);
        long k_i = chord > 0 ? (long)std::floor(std::min(chord / gap, 1e12)) : 0;
        double t_snap = snap_ / std::max(chord, snap_);

        // vicinity-union coverage of the chord as parameter intervals
        struct Iv {
            double lo, hi;
        };
        std::vector<Iv> ivs;
        for (const Vicinity* vic : {&vicA, &vicB, &vicE}) {
            double t0, t1;
            if (vic->hull.empty()) continue;
            if (!vic->hull.clip_segment(Ai, Bi, t0, t1)) continue;
            if (t1 < 0.0 || t0 > 1.0 || t0 > t1) continue;
            ivs.push_back({std::max(0.0, t0), std::min(1.0, t1)});
        }
        std::sort(ivs.begin(), ivs.end(), [](const Iv& x, const Iv& y) { return x.lo < y.lo; });
        std::vector<Iv> merged;
        for (auto& iv : ivs) {
            if (!merged.empty() && iv.lo <= merged.back().hi + t_snap)
                merged.back().hi = std::max(merged.back().hi, iv.hi);
            else
                merged.push_back(iv);
        }
        auto covered = [&](double t) {
            for (auto& iv : merged)
                if (t >= iv.lo - t_snap && t <= iv.hi + t_snap) return true;
            return false;
        };

        SteinerSegment seg;
        seg.bisector = b;
        seg.line_index = i;
        seg.p = p_i;
        seg.a = Ai;
        seg.b = Bi;

        // uncovered gaps of [0,1], so the candidate walk touches only nodes
        // that can survive
        std::vector<Iv> gaps;
        {
            double pos = 0.0;
            for (auto& iv : merged) {
                if (iv.lo - t_snap > pos) gaps.push_back({pos, iv.lo});
                pos = std::max(pos, iv.hi);
            }
            if (pos < 1.0 - t_snap) gaps.push_back({pos, 1.0});
        }
        long kept = 0;
        Vec3 dir = chord > 0 ? (Bi - Ai) / chord : Vec3{0, 0, 0};
        for (auto& gpi : gaps) {
            long j0 = (long)std::ceil(gpi.lo * (double)(k_i + 1) - 1e-9);
            long j1 = (long)std::floor(gpi.hi * (double)(k_i + 1) + 1e-9);
            j0 = std::max<long>(0, j0);
            j1 = std::min<long>(k_i + 1, j1);
            for (long j = j0; j <= j1; ++j) {
                double t = (double)j / (double)(k_i + 1);
                if (covered(t)) continue;
                ++kept;
                if (store) {
                    seg.nodes.push_back(Ai + dir * (t * chord));
                    seg.on_boundary.push_back(0);
                }
            }
        }
        long bnodes = 0;
        for (auto& iv : merged) {
            for (double t : {iv.lo, iv.hi}) {
                if (t <= t_snap || t >= 1.0 - t_snap) continue;
                ++bnodes;
                if (store) {
                    seg.nodes.push_back(Ai + dir * (t * chord));
                    seg.on_boundary.push_back(1);
                }
            }
        }
        out.interior_nodes += kept;
        out.boundary_nodes += bnodes;

        if (kept + bnodes == 0) {
            if (++empty_streak >= 2 && p_i < eps * r_e) break;
            continue;
        }
        empty_streak = 0;

        if (store) {
            // keep nodes ordered along the chord
            std::vector<int> order(seg.nodes.size());
            for (int k = 0; k < (int)order.size(); ++k) order[k] = k;
            std::sort(order.begin(), order.end(), [&](int x, int y) {
                return dot(seg.nodes[x] - Ai, dir) < dot(seg.nodes[y] - Ai, dir);
            });
            SteinerSegment sorted = seg;
            for (int k = 0; k < (int)order.size(); ++k) {
                sorted.nodes[k] = seg.nodes[order[k]];
                sorted.on_boundary[k] = seg.on_boundary[order[k]];
            }
            out.segments.push_back(std::move(sorted));
        } else {
            out.segments.push_back(SteinerSegment{b, i, p_i, Ai, Bi, {}, {}});
        }
    }
    return out;
}

SnapResult Discretization::snap_to_bisector(const Vec3& x1, const Vec3& x2, int bisector) const {
    const auto& bt = mesh_->bisectors()[bisector];
    Vec3 A = mesh_->vertices()[bt.va], B = mesh_->vertices()[bt.vb];
    Plane bp = plane_through(A, B, bt.apex);
    Vec3 x0;
    if (!segment_plane_intersection(x1, x2, bp, x0))
        throw std::invalid_argument("segment does not cross the bisector plane");
    if (in_vicinity_union(bisector, x0, snap_))
        throw std::invalid_argument("crossing point lies inside a vicinity");

    Vec3 u = normalized(B - A);
    Vec3 foot = A + u * dot(x0 - A, u);
    double d0 = dist(x0, foot);

    const auto& segs = bisector_points_[bisector].segments;
    if (segs.empty()) throw std::runtime_error("bisector carries no Steiner segments");

    // deepest segment farther from AB than x0 (p_i >= d0), by construction the
    // one with the largest index among those; snapped so a crossing exactly on
    // a line picks that line
    const SteinerSegment* pick = nullptr;
    for (auto& s : segs) {
        if (s.nodes.empty()) continue;
        if (s.p >= d0 - snap_ || pick == nullptr) pick = &s;
        if (s.p < d0 - snap_) break;
    }
    SnapResult res;
    res.node = pick->nodes[0];
    res.line_index = pick->line_index;
    double best = kInf;
    for (auto& q : pick->nodes) {
        double d = dist(q, x0);
        if (d < best) {
            best = d;
            res.node = q;
        }
    }
    double a1 = std::acos(std::min(1.0, std::max(-1.0, dot(normalized(x2 - x1), normalized(res.node - x1)))));
    double a2 = std::acos(std::min(1.0, std::max(-1.0, dot(normalized(x1 - x2), normalized(res.node - x2)))));
    res.angle = std::max(a1, a2);
    res.detour = (dist(x1, res.node) + dist(res.node, x2)) / dist(x1, x2);
    return res;
}

AuditReport Discretization::audit() const {
    const auto& mesh = *mesh_;
    AuditReport rep;
    double eps = params_.epsilon;
    double log_term = std::log2(2.0 / eps);

    double c_sum = 0.0;
    for (int b = 0; b < (int)mesh.bisectors().size(); ++b) {
        const auto& bt = mesh.bisectors()[b];
        double lab = dist(mesh.vertices()[bt.va], mesh.vertices()[bt.vb]);
        double re = edge_points_[bt.edge].r_edge;
        double ra = vertex_r_[bt.va], rb = vertex_r_[bt.vb];
        double s = std::sin(bt.gamma / 2.0);
        double logf = std::log2(4.0 * lab * lab * bt.height / (re * ra * rb));
        double c_abp = 23.0 * lab / (re * s * s) * logf;
        double c1_abp = 4.0 / s * logf;
        c_sum += c_abp;

        AuditEntry nodes;
        nodes.actual = bisector_points_[b].total_nodes();
        nodes.bound = c_abp / (eps * eps) * log_term;
        rep.per_bisector.push_back(nodes);
        if (!nodes.ok()) ++rep.violations;

        AuditEntry segs;
        segs.actual = (long)bisector_points_[b].segments.size();
        segs.bound = c1_abp / std::sqrt(eps) * log_term;
        rep.per_bisector_segs.push_back(segs);
        if (!segs.ok()) ++rep.violations;

        rep.boundary_nodes.push_back(bisector_points_[b].boundary_nodes);
        rep.total_nodes += bisector_points_[b].total_nodes();
    }
    rep.c_of_domain = c_sum / (double)mesh.bisectors().size();

    for (int e = 0; e < (int)mesh.edges().size(); ++e) {
        const auto& rec = mesh.edges()[e];
        double lab = dist(mesh.vertices()[rec.v[0]], mesh.vertices()[rec.v[1]]);
        double ra = vertex_r_[rec.v[0]], rb = vertex_r_[rec.v[1]];
        double alpha = mesh.edge_face_angle(e);
        double c_e = 33.0 / std::sin(std::max(alpha, 1e-12)) * std::log2(lab / std::sqrt(ra * rb));
        AuditEntry entry;
        entry.actual = (long)edge_points_[e].params.size();
        entry.bound = c_e / eps * log_term;
        rep.per_edge.push_back(entry);
        if (!entry.ok()) ++rep.violations;
        rep.total_nodes += entry.actual;
    }
    rep.total_nodes += (long)mesh.vertices().size();
    return rep;
}

long Discretization::total_nodes() const {
    long n = (long)mesh_->vertices().size();
    for (auto& e : edge_points_) n += (long)e.params.size();
    for (auto& b : bisector_points_) n += b.total_nodes();
    return n;
}

}  // namespace wsp3d
