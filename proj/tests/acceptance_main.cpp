// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Heavy solver matrices run smallest-first under a wall-clock budget;
// configurations that cannot start within the budget are reported as not run
// and fail the criterion honestly.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "wsp3d/fixtures.hpp"
#include "wsp3d/report.hpp"
#include "wsp3d/sssp.hpp"
#include "wsp3d/voronoi.hpp"

using namespace wsp3d;

namespace {

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed ^ 0x9e3779b97f4a7c15ULL) {}
    uint64_t next() {
        s += 0x9e3779b97f4a7c15ULL;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (double)(next() >> 11) / 9007199254740992.0;
    }
    int pick(int n) { return (int)(next() % (uint64_t)n); }
};

struct Outcome {
    bool pass = true;
    std::string detail;
};

double budget_scale() {
    if (const char* env = std::getenv("WSP3D_ACCEPT_BUDGET_SCALE")) {
        double v = std::atof(env);
        if (v > 0) return v;
    }
    return 1.0;
}

// ---------------------------------------------------------------- criterion 1
Outcome snell_correctness() {
    Rng rng(101);
    Outcome out;
    long bad_res = 0, bad_cost = 0;
    for (int k = 0; k < 1000; ++k) {
        Vec3 v{rng.uniform(-3, 3), rng.uniform(-3, 3), -rng.uniform(0.05, 2.0)};
        Vec3 x{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.05, 2.0)};
        double w1 = rng.uniform(0.2, 5), w2 = rng.uniform(0.2, 5);
        if (std::abs(w1 - w2) < 1e-3) w2 += 0.2;
        PlaneMedia m;
        m.F = {{0, 0, 0}, {0, 0, 1}};
        m.w_minus = w1;
        m.w_face = std::min(w1, w2);
        m.w_plus = w2;
        RefractionPath p = snell_bend(v, x, m);
        if (p.snell_residual > 1e-9 * std::max(w1, w2)) ++bad_res;

        // golden-section brute force over the bending chord
        Vec3 pv{v.x, v.y, 0}, px{x.x, x.y, 0};
        auto cost = [&](double t) {
            Vec3 a = pv + (px - pv) * t;
            return w1 * dist(v, a) + w2 * dist(a, x);
        };
        const double gr = 0.6180339887498949;
        double lo = 0, hi = 1;
        double c1 = hi - gr, c2 = gr;
        double f1 = cost(c1), f2 = cost(c2);
        while (hi - lo > 1e-13) {
            if (f1 > f2) {
                lo = c1;
                c1 = c2;
                f1 = f2;
                c2 = lo + gr * (hi - lo);
                f2 = cost(c2);
            } else {
                hi = c2;
                c2 = c1;
                f2 = f1;
                c1 = hi - gr * (hi - lo);
                f1 = cost(c1);
            }
        }
        double oracle = cost(0.5 * (lo + hi));
        if (std::abs(p.cost - oracle) > 1e-9 * oracle) ++bad_cost;
    }
    out.pass = bad_res == 0 && bad_cost == 0;
    std::ostringstream d;
    d << "1000 configs, residual violations " << bad_res << ", cost mismatches " << bad_cost;
    out.detail = d.str();
    return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome distance_function_properties() {
    Rng rng(202);
    Outcome out;
    long viol = 0;
    for (int trial = 0; trial < 100; ++trial) {
        MediaConfig cfg;
        cfg.w_minus = rng.uniform(0.3, 4);
        cfg.w_plus = trial % 3 == 0 ? cfg.w_minus : rng.uniform(0.3, 4);
        cfg.w_face = std::min(cfg.w_minus, cfg.w_plus) *
                     (trial % 3 == 0 ? rng.uniform(0.3, 1.0) : 1.0);
        cfg.y = rng.uniform(-1.2, 1.2);
        cfg.z_minus = rng.uniform(0.1, 1.2);
        cfg.z_plus = trial % 3 == 0 ? cfg.z_minus : rng.uniform(0.1, 1.2);
        double geo = cfg.z_minus + cfg.z_plus + std::abs(cfg.y);

        const int n = 1000;
        double span = 12.0 * geo;
        std::vector<double> c(n + 1);
        double scale = 0;
        for (int i = 0; i <= n; ++i) {
            c[i] = weighted_distance_value(cfg, -span + 2 * span * i / n);
            scale = std::max(scale, std::abs(c[i]));
        }
        for (int i = 0; i <= n / 2; ++i)
            if (std::abs(c[i] - c[n - i]) > 1e-9 * scale) ++viol;
        for (int i = n / 2 + 1; i < n; ++i)
            if (!(c[i + 1] - c[i] > -1e-12)) ++viol;
        for (int i = 1; i < n; ++i)
            if (!(c[i + 1] - 2 * c[i] + c[i - 1] >= -1e-9 * scale)) ++viol;

        for (int side : {+1, -1}) {
            Asymptote a = asymptote(cfg, side);
            double x = side * 1e4 * geo;
            double resid = std::abs(weighted_distance_value(cfg, x) - (a.slope * x + a.intercept));
            if (resid > 1e-3 * geo) ++viol;
        }
    }
    out.pass = viol == 0;
    out.detail = "100 configs, violations " + std::to_string(viol);
    return out;
}

// ---------------------------------------------------------------- criterion 3
int count_extrema(const std::function<double(double)>& g, double lo, double hi, int n,
                  double tol) {
    int extrema = 0, last = 0;
    double prev = g(lo);
    for (int i = 1; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        double cur = g(x);
        double d = cur - prev;
        int s = d > tol ? +1 : (d < -tol ? -1 : 0);
        if (s != 0) {
            if (last != 0 && s != last) ++extrema;
            last = s;
        }
        prev = cur;
    }
    return extrema;
}

Outcome unimodality_certificates() {
    Rng rng(303);
    Outcome out;
    long fails = 0;
    for (int k = 0; k < 200; ++k) {
        double z = rng.uniform(0.3, 1.5), zt = rng.uniform(0.3, 1.5);
        double wm = rng.uniform(0.4, 3), wp = rng.uniform(0.4, 3);
        if (k % 4 == 0) wp = wm;
        double wf = std::min(wm, wp) * (k % 4 == 0 ? rng.uniform(0.4, 1.0) : 1.0);
        SegmentMetric metric{CostProfile(wm, wf, wp, z, zt, true)};
        AdditiveSite a, b;
        a.tc = rng.uniform(-2, 2);
        a.ylat2 = rng.uniform(0, 4);
        a.delta = 0;
        b.tc = rng.uniform(-2, 2);
        b.ylat2 = rng.uniform(0, 4);
        b.delta = rng.uniform(0, 1);
        UnimodalCertificate cert = certify_unimodal(metric, a, b, z, z, -25, 25, 10000, 1e-9);
        if (!cert.certified) ++fails;
    }

    // sharpness of the equal-depth precondition: sites at different depths
    // tuned so the arrival angles match at two abscissas; the cost difference
    // then shows two extrema
    bool sharp = false;
    {
        MediaConfig base;
        base.w_minus = 2.0;
        base.w_face = 1.0;
        base.w_plus = 1.0;
        base.z_minus = 1.0;
        base.z_plus = 1.0;
        base.y = 1.0;
        for (double z2 : {0.45, 0.6, 0.3}) {
            for (double x1 : {1.5, 2.5}) {
                double x2 = x1 + 4.0;
                double a1 = arrival_angle(base, x1);
                double a2 = arrival_angle(base, x2);
                MediaConfig other = base;
                other.z_minus = z2;
                auto span_gap = [&](double y2) {
                    double xi1 = x_of_alpha(other, y2, a1);
                    double xi2 = x_of_alpha(other, y2, a2);
                    return (xi2 - xi1) - (x2 - x1);
                };
                double ylo = 0.05, yhi = 12.0;
                double glo = span_gap(ylo), ghi = span_gap(yhi);
                if ((glo > 0) == (ghi > 0)) continue;
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (ylo + yhi);
                    if ((span_gap(mid) > 0) == (glo > 0))
                        ylo = mid;
                    else
                        yhi = mid;
                }
                double y2 = 0.5 * (ylo + yhi);
                double xoff = x1 - x_of_alpha(other, y2, a1);
                // g(x) = c_{v'}(x) - c_v(x) with v' shifted by xoff
                MediaConfig shifted = other;
                shifted.y = y2;
                auto g = [&](double x) {
                    return weighted_distance_value(shifted, x - xoff) -
                           weighted_distance_value(base, x);
                };
                if (count_extrema(g, x1 - 3.0, x2 + 3.0, 20000, 1e-12) >= 2) {
                    sharp = true;
                    break;
                }
            }
            if (sharp) break;
        }
    }

    out.pass = fails == 0 && sharp;
    std::ostringstream d;
    d << "200 equidistant pairs, failures " << fails << "; unequal-height pair shows >=2 extrema: "
      << (sharp ? "yes" : "no");
    out.detail = d.str();
    return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome voronoi_brute_force() {
    Rng rng(404);
    Outcome out;
    long mismatches = 0, fragmented = 0, oversize = 0;
    for (int seq = 0; seq < 100; ++seq) {
        double length = rng.uniform(4, 12);
        double zt = rng.uniform(0.2, 1.5), zs = rng.uniform(0.2, 1.5);
        double wm = rng.uniform(0.5, 3), wp = rng.uniform(0.5, 3);
        if (seq % 3 == 0) wp = wm;
        double wf = std::min(wm, wp) * (seq % 3 == 0 ? rng.uniform(0.4, 1.0) : 1.0);

        int nnodes = 20 + rng.pick(181);  // up to 200 nodes on the segment
        std::vector<double> node_x(nnodes);
        for (int i = 0; i < nnodes; ++i) node_x[i] = length * i / (nnodes - 1);

        SegmentMetric metric{CostProfile(wm, wf, wp, zs, zt, true)};
        Diagram1D diagram(length, 1e-12 * length, metric);
        std::vector<AdditiveSite> all;
        int nsites = 2 + rng.pick(9);
        double delta = 0;
        bool mirror_case = seq % 10 == 0;
        for (int i = 0; i < nsites; ++i) {
            AdditiveSite s;
            s.node = i;
            s.entry = i;
            if (mirror_case && i < 2) {
                s.delta = 1.0;
                s.tc = i == 0 ? length * 0.25 : length * 0.75;
                s.ylat2 = 0.36;
            } else {
                delta += rng.uniform(0, 0.4);
                s.delta = std::max(delta, 1.0);
                s.tc = rng.uniform(-1.0, length + 1.0);
                s.ylat2 = rng.uniform(0, 4);
            }
            all.push_back(s);
            VoronoiCell cell = diagram.insert_site(s);
            if (!cell.empty && !(cell.lo < cell.hi)) ++fragmented;
            if (diagram.num_breakpoints() > 2 * (i + 1) + 1) ++oversize;
        }
        for (int i = 0; i < nnodes; ++i) {
            double x = node_x[i];
            double fmin = kInf;
            for (auto& s : all) fmin = std::min(fmin, metric.f(s, x));
            int expect = -1;
            for (int k = 0; k < (int)all.size(); ++k) {
                double f = metric.f(all[k], x);
                if (std::abs(f - fmin) <= 1e-12 * std::max(std::abs(fmin), 1.0)) {
                    if (expect < 0 || all[k].entry < all[expect].entry) expect = k;
                }
            }
            int got = diagram.winner_at(x);
            if (got < 0 || diagram.site(got).node != all[expect].node) ++mismatches;
        }
    }
    out.pass = mismatches == 0 && fragmented == 0 && oversize == 0;
    std::ostringstream d;
    d << "100 sequences: assignment mismatches " << mismatches << ", fragmented cells "
      << fragmented << ", breakpoint overflows " << oversize;
    out.detail = d.str();
    return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome snapping_bounds() {
    Outcome out;
    long viol = 0, done_total = 0;
    Rng rng(505);
    for (double eps : {1.0, 0.5, 0.25}) {
        WeightedTetMesh mesh = fixtures::single_tet();
        DiscretizationParams p;
        p.epsilon = eps;
        Discretization disc(mesh, p);
        double tol = 1e-12 * mesh.scale();
        int done = 0;
        int b = 0;
        while (done < 1000) {
            b = (b + 1) % 6;
            const auto& bt = mesh.bisectors()[b];
            auto f1 = mesh.face_points(bt.faces[0]);
            auto f2 = mesh.face_points(bt.faces[1]);
            double a = rng.uniform(0, 1), b2 = rng.uniform(0, 1 - a);
            double c = rng.uniform(0, 1), d2 = rng.uniform(0, 1 - c);
            Vec3 x1 = f1[0] * a + f1[1] * b2 + f1[2] * (1 - a - b2);
            Vec3 x2 = f2[0] * c + f2[1] * d2 + f2[2] * (1 - c - d2);
            if (disc.in_vicinity_union(b, x1, tol) || disc.in_vicinity_union(b, x2, tol)) continue;
            Plane bp = plane_through(mesh.vertices()[bt.va], mesh.vertices()[bt.vb], bt.apex);
            Vec3 x0;
            if (!segment_plane_intersection(x1, x2, bp, x0)) continue;
            if (disc.in_vicinity_union(b, x0, tol)) continue;
            SnapResult r = disc.snap_to_bisector(x1, x2, b);
            if (r.angle > std::sqrt(eps / 2.0) + 1e-9) ++viol;
            if (r.detour > 1.0 + eps / 2.0 + 1e-9) ++viol;
            ++done;
            ++done_total;
        }
    }
    out.pass = viol == 0;
    std::ostringstream d;
    d << done_total << " vicinity-free crossings over eps {1, 0.5, 0.25}, violations " << viol;
    out.detail = d.str();
    return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome steiner_count_audit() {
    Outcome out;
    long viol = 0;
    int runs = 0;
    std::ostringstream d;
    struct Case {
        const char* name;
        WeightedTetMesh mesh;
    };
    std::vector<Case> meshes;
    meshes.push_back({"tet1", fixtures::single_tet()});
    meshes.push_back({"tet2", fixtures::two_tets(2.0, 3.0)});
    meshes.push_back({"tet8", fixtures::bipyramid(4, 9, 1.0, 3.0)});
    meshes.push_back({"tet20", fixtures::bipyramid(10, 17, 1.0, 3.0)});
    meshes.push_back({"tet50", fixtures::fifty_tets(33, 1.0, 3.0)});
    for (auto& c : meshes) {
        for (double eps : {1.0, 0.5, 0.25, 0.125}) {
            DiscretizationParams p;
            p.epsilon = eps;
            Discretization disc(c.mesh, p, /*store_nodes=*/false);
            AuditReport rep = disc.audit();
            viol += rep.violations;
            ++runs;
        }
    }
    out.pass = viol == 0;
    d << runs << " mesh/eps audits, bound violations " << viol;
    out.detail = d.str();
    return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome adjacency_interval_structure() {
    Outcome out;
    WeightedTetMesh mesh = fixtures::two_tets(2.0, 3.0);
    DiscretizationParams p;
    p.epsilon = 0.5;
    Discretization disc(mesh, p);
    ApproxGraph graph(mesh, disc);
    Rng rng(707);
    long over = 0, mism = 0;
    for (int k = 0; k < 10000; ++k) {
        int tr = rng.pick((int)graph.triples().size());
        const Triple& t = graph.triples()[tr];
        const GraphSegment& src = graph.segments()[t.seg_src];
        const GraphSegment& tgt = graph.segments()[t.seg_tgt];
        int u = src.nodes[rng.pick((int)src.nodes.size())];
        AdjacencyIntervals iv = graph.adjacency_intervals(u, tr);
        if (iv.count() > 7) ++over;
        TripleScan scan = graph.make_scan(u, tr);
        // spot-check membership against the predicate on a node sample
        for (int probe = 0; probe < 12; ++probe) {
            int i = rng.pick((int)tgt.nodes.size());
            bool expect = tgt.nodes[i] != u &&
                          scan.admissible(graph.nodes()[tgt.nodes[i]].pos, tgt.t[i]);
            if (iv.contains(i) != expect) ++mism;
        }
    }
    out.pass = over == 0 && mism == 0;
    std::ostringstream d;
    d << "10000 node/triple pairs: interval-count overflows " << over
      << ", membership mismatches " << mism;
    out.detail = d.str();
    return out;
}

// ------------------------------------------------------- criteria 8 and 9
struct SolverCase {
    std::string name;
    WeightedTetMesh mesh;
    double eps;
};

long quick_node_count(const WeightedTetMesh& mesh, double eps) {
    DiscretizationParams p;
    p.epsilon = eps;
    Discretization disc(mesh, p, /*store_nodes=*/false);
    return disc.total_nodes();
}

double estimate_case_seconds(const ApproxGraph& g) {
    // calibrated per-candidate and per-insert costs
    double relax = 0, inserts = 0;
    for (auto& tr : g.triples()) {
        relax += (double)g.segments()[tr.seg_src].nodes.size() *
                 (double)g.segments()[tr.seg_tgt].nodes.size();
        inserts += (double)g.segments()[tr.seg_src].nodes.size();
    }
    return 2.2 * relax * 18e-9 + inserts * 7e-6;
}

Outcome pruned_equals_baseline() {
    Outcome out;
    double budget = 600.0 * budget_scale();
    double t_start = now();
    std::ostringstream d;
    std::vector<SolverCase> cases;
    for (double eps : {1.0, 0.5, 0.25}) {
        cases.push_back({"tet1", fixtures::single_tet(1.5), eps});
        cases.push_back({"tet2", fixtures::two_tets(2.0, 3.0), eps});
        cases.push_back({"tet8", fixtures::bipyramid(4, 9, 1.0, 3.0), eps});
        cases.push_back({"tet20", fixtures::bipyramid(10, 17, 1.0, 3.0), eps});
        cases.push_back({"tet50", fixtures::fifty_tets(33, 1.0, 3.0), eps});
    }
    // smallest first
    std::sort(cases.begin(), cases.end(), [](const SolverCase& a, const SolverCase& b) {
        if (a.eps != b.eps) return a.eps > b.eps;
        return a.mesh.tets().size() < b.mesh.tets().size();
    });

    int ran = 0, skipped = 0;
    long mismatches = 0;
    for (auto& c : cases) {
        double elapsed = now() - t_start;
        if (elapsed >= budget) {
            ++skipped;
            d << " [" << c.name << ",eps=" << c.eps << ": not run (budget)]";
            continue;
        }
        long approx_nodes = quick_node_count(c.mesh, c.eps);
        if (approx_nodes > 700000) {
            ++skipped;
            d << " [" << c.name << ",eps=" << c.eps << ": not run (" << approx_nodes
              << " nodes)]";
            continue;
        }
        DiscretizationParams p;
        p.epsilon = c.eps;
        Discretization disc(c.mesh, p);
        ApproxGraph g(c.mesh, disc);
        double est = estimate_case_seconds(g);
        if (elapsed + est > budget) {
            ++skipped;
            d << " [" << c.name << ",eps=" << c.eps << ": not run (est " << (int)est << "s)]";
            continue;
        }
        SolveResult rb = dijkstra_baseline(g, 0);
        SolveResult rp = sssp_pruned(g, 0);
        double worst = 0;
        for (size_t i = 0; i < rb.dist.size(); ++i) {
            bool fb = std::isfinite(rb.dist[i]), fp = std::isfinite(rp.dist[i]);
            if (fb != fp) worst = kInf;
            if (!fb || !fp || rb.dist[i] == 0) continue;
            worst = std::max(worst, std::abs(rb.dist[i] - rp.dist[i]) / rb.dist[i]);
        }
        if (worst > 1e-9) ++mismatches;
        ++ran;
        d << " [" << c.name << ",eps=" << c.eps << ": " << (worst <= 1e-9 ? "ok" : "MISMATCH")
          << " max " << worst << "]";
    }
    out.pass = mismatches == 0 && skipped == 0;
    std::ostringstream head;
    head << ran << "/" << cases.size() << " cases ran, " << mismatches << " mismatches, "
         << skipped << " not run;" << d.str();
    out.detail = head.str();
    return out;
}

Outcome epsilon_approximation() {
    Outcome out;
    double budget = 600.0 * budget_scale();
    double t_start = now();
    std::ostringstream d;
    long viol = 0;
    int parts_done = 0, parts_total = 3;

    // (a) homogeneous meshes against the exact Euclidean metric (convex
    // domains, so straight segments are admissible)
    {
        double eps = 1.0;
        for (auto* which : {"tet1", "tet2"}) {
            WeightedTetMesh mesh = std::strcmp(which, "tet1") == 0 ? fixtures::single_tet(2.0)
                                                                    : fixtures::two_tets(2.0, 2.0);
            DiscretizationParams p;
            p.epsilon = eps;
            Discretization disc(mesh, p);
            ApproxGraph g(mesh, disc);
            SolveResult r = sssp_pruned(g, 0);
            for (int v = 1; v < (int)mesh.vertices().size(); ++v) {
                double exact = 2.0 * dist(mesh.vertices()[0], mesh.vertices()[v]);
                if (!(r.dist[v] >= exact * (1 - 1e-9) && r.dist[v] <= exact * (1 + eps))) ++viol;
            }
        }
        ++parts_done;
        d << " [euclidean: viol " << viol << "]";
    }

    // (b) two-tet heterogeneous mesh against the exact Snell cost
    if (now() - t_start < budget) {
        double eps = 1.0;
        WeightedTetMesh mesh = fixtures::two_tets(2.0, 3.0);
        DiscretizationParams p;
        p.epsilon = eps;
        Discretization disc(mesh, p);
        ApproxGraph g(mesh, disc);
        SolveResult r = sssp_pruned(g, 3);  // top apex
        long before = viol;
        // targets in the source cell: straight segments at the light weight
        for (int v = 0; v < 3; ++v) {
            double exact = 2.0 * dist(mesh.vertices()[3], mesh.vertices()[v]);
            if (!(r.dist[v] >= exact * (1 - 1e-9) && r.dist[v] <= exact * (1 + eps))) ++viol;
        }
        // opposite apex: single-face Snell crossing, brute-force refined
        {
            auto fp = mesh.face_points(mesh.face_index({0, 1, 2}));
            Vec3 s = mesh.vertices()[3], t = mesh.vertices()[4];
            double best = kInf;
            int n = 220;
            Vec3 bbest;
            for (int i = 0; i <= n; ++i)
                for (int j = 0; i + j <= n; ++j) {
                    Vec3 a = fp[0] * ((double)i / n) + fp[1] * ((double)j / n) +
                             fp[2] * (1.0 - (double)i / n - (double)j / n);
                    double c = 2.0 * dist(s, a) + 3.0 * dist(a, t);
                    if (c < best) {
                        best = c;
                        bbest = a;
                    }
                }
            double span = dist(fp[0], fp[1]) / n;
            for (int round = 0; round < 80; ++round) {
                bool moved = false;
                for (int dx = -1; dx <= 1; ++dx)
                    for (int dy = -1; dy <= 1; ++dy) {
                        Vec3 cand = bbest + (fp[1] - fp[0]) * (span * dx / dist(fp[0], fp[1])) +
                                    (fp[2] - fp[0]) * (span * dy / dist(fp[0], fp[2]));
                        double c = 2.0 * dist(s, cand) + 3.0 * dist(cand, t);
                        if (c < best - 1e-16) {
                            best = c;
                            bbest = cand;
                            moved = true;
                        }
                    }
                if (!moved) span *= 0.5;
                if (span < 1e-13) break;
            }
            if (!(r.dist[4] >= best * (1 - 1e-9) && r.dist[4] <= best * (1 + eps))) ++viol;
        }
        ++parts_done;
        d << " [snell: viol " << (viol - before) << "]";
    } else {
        d << " [snell: not run (budget)]";
    }

    // (c) random 20-tet meshes: coarse/fine audit with eps_fine = eps/4
    {
        double eps_c = 1.0, eps_f = 0.25;
        WeightedTetMesh mesh = fixtures::bipyramid(10, 23, 1.0, 3.0);
        long approx_nodes = quick_node_count(mesh, eps_f);
        double est = approx_nodes * 230.0 * 7e-6;  // inserts ~ nodes x triples-per-node
        if (approx_nodes <= 700000 && now() - t_start + est <= budget) {
            EpsilonAuditReport rep = epsilon_audit(mesh, 0, eps_c, eps_f);
            if (!rep.ok) ++viol;
            ++parts_done;
            d << " [audit20: max ratio " << rep.max_ratio << (rep.ok ? " ok" : " VIOLATION")
              << "]";
        } else {
            d << " [audit20: not run (" << approx_nodes << " fine-run nodes, est " << (int)est
              << "s)]";
        }
    }

    out.pass = viol == 0 && parts_done == parts_total;
    std::ostringstream head;
    head << parts_done << "/" << parts_total << " parts ran, violations " << viol << ";"
         << d.str();
    out.detail = head.str();
    return out;
}

// --------------------------------------------------------------- criterion 10
Outcome bending_map_mixed_difference() {
    Rng rng(1010);
    Outcome out;
    long bad = 0, total = 0;
    for (int cfg_i = 0; cfg_i < 20; ++cfg_i) {
        MediaConfig cfg;
        bool expl = cfg_i % 2 == 0;
        cfg.w_minus = rng.uniform(0.8, 3);
        cfg.w_plus = expl ? cfg.w_minus : cfg.w_minus * rng.uniform(0.35, 0.85);
        cfg.w_face = expl ? cfg.w_minus * rng.uniform(0.4, 0.8) : std::min(cfg.w_minus, cfg.w_plus);
        cfg.z_minus = rng.uniform(0.4, 1.4);
        cfg.z_plus = rng.uniform(0.4, 1.4);

        // stay away from the critical-angle rim of the arrival angle
        double kappa = cfg.kappa();
        double sin_crit = expl ? cfg.w_face / cfg.w_minus : kappa;
        double alpha_crit = std::acos(std::min(1.0, sin_crit));
        double margin = 0.2;
        double alo = std::max(0.45, alpha_crit + margin);
        double ahi = 2.0;
        if (alo + 0.3 > ahi) alo = 0.45;  // degenerate rim placement: keep a usable band

        const int grid = 50;
        double hy = 2e-4, ha = 2e-4;
        for (int gy = 0; gy < grid; ++gy) {
            double y = 0.3 + 1.2 * gy / (grid - 1);
            for (int ga = 0; ga < grid; ga += 7) {  // thinned inner loop per config budget
                double alpha = alo + (ahi - alo) * ga / (grid - 1);
                if (std::abs(alpha - alpha_crit) < margin) continue;
                double xpp = x_of_alpha(cfg, y + hy, alpha + ha);
                double xpm = x_of_alpha(cfg, y + hy, alpha - ha);
                double xmp = x_of_alpha(cfg, y - hy, alpha + ha);
                double xmm = x_of_alpha(cfg, y - hy, alpha - ha);
                double mixed = (xpp - xpm - xmp + xmm) / (4 * hy * ha);
                ++total;
                if (!(mixed < 0)) ++bad;
            }
        }
    }
    out.pass = bad == 0;
    std::ostringstream d;
    d << total << " grid samples over 20 configs, nonnegative mixed differences " << bad;
    out.detail = d.str();
    return out;
}

// --------------------------------------------------------------- criterion 11
Outcome determinism() {
    Outcome out;
    WeightedTetMesh mesh = fixtures::two_tets(2.0, 3.0);
    double eps = 1.0;
    auto run_once = [&]() {
        DiscretizationParams p;
        p.epsilon = eps;
        Discretization disc(mesh, p);
        ApproxGraph g(mesh, disc);
        SolveResult r = dijkstra_baseline(g, 0);
        return solve_json(mesh, r, eps, "baseline", &g, true);
    };
    std::string a = run_once();
    std::string b = run_once();
    out.pass = !a.empty() && a == b;
    out.detail = out.pass ? "repeated solve JSON byte-identical"
                          : "repeated solve JSON differs";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    struct Entry {
        int id;
        const char* name;
        Outcome (*fn)();
    };
    std::vector<Entry> entries = {
        {1, "snell bending correctness", snell_correctness},
        {2, "weighted distance function properties", distance_function_properties},
        {3, "voronoi cell interval certificates", unimodality_certificates},
        {4, "dynamic voronoi vs brute force", voronoi_brute_force},
        {5, "bisector snapping bounds", snapping_bounds},
        {6, "steiner count audit", steiner_count_audit},
        {7, "adjacency interval structure", adjacency_interval_structure},
        {8, "pruned equals baseline", pruned_equals_baseline},
        {9, "end-to-end epsilon approximation", epsilon_approximation},
        {10, "bending map mixed difference", bending_map_mixed_difference},
        {11, "determinism", determinism},
    };
    int failures = 0;
    for (auto& e : entries) {
        if (only && e.id != only) continue;
        double t0 = now();
        Outcome o = e.fn();
        double dt = now() - t0;
        std::printf("[%s] criterion %2d %-42s (%7.1fs) %s\n", o.pass ? "PASS" : "FAIL", e.id,
                    e.name, dt, o.detail.c_str());
        std::fflush(stdout);
        if (!o.pass) ++failures;
    }
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
