#include "doctest.h"
#include "test_support.hpp"
#include "wsp3d/discretization.hpp"
#include "wsp3d/fixtures.hpp"

using namespace wsp3d;

namespace {
Discretization make(const WeightedTetMesh& mesh, double eps) {
    DiscretizationParams p;
    p.epsilon = eps;
    return Discretization(mesh, p);
}
}  // namespace

TEST_CASE("edge sequence: spacing law and endpoints") {
    WeightedTetMesh mesh = fixtures::two_tets(1.0, 2.0);
    Discretization disc = make(mesh, 0.5);
    for (int e = 0; e < (int)mesh.edges().size(); ++e) {
        const EdgeDiscretization& ed = disc.edge_points()[e];
        auto& rec = mesh.edges()[e];
        double len = dist(mesh.vertices()[rec.v[0]], mesh.vertices()[rec.v[1]]);
        REQUIRE(ed.params.size() >= 3);
        // A' and B' sit on the vertex-vicinity boundaries
        CHECK(ed.params.front() * len ==
              doctest::Approx(0.5 * disc.vertex_r(rec.v[0])).epsilon(1e-12));
        CHECK((1.0 - ed.params.back()) * len ==
              doctest::Approx(0.5 * disc.vertex_r(rec.v[1])).epsilon(1e-12));
        // |M_{i-1} M_i| = eps * r(M_i), M_i being the newer (outer) point
        for (int i = 0; i < (int)ed.params.size() - 1; ++i) {
            int a = i, b = i + 1;
            if (b == (int)ed.params.size() - 1 || a == 0) continue;  // clipped ends
            double step = (ed.params[b] - ed.params[a]) * len;
            int newer = (b <= ed.me_index) ? a : b;
            double r = mesh.edge_point_radius(e, ed.params[newer]);
            CHECK(step == doctest::Approx(0.5 * r).epsilon(1e-9));
        }
    }
}

TEST_CASE("edge sequence against an extended-precision replay") {
    WeightedTetMesh mesh = fixtures::single_tet();
    Discretization disc = make(mesh, 0.5);
    int e = mesh.edge_index(0, 1);
    const EdgeDiscretization& ed = disc.edge_points()[e];
    auto& rec = mesh.edges()[e];
    double len = dist(mesh.vertices()[rec.v[0]], mesh.vertices()[rec.v[1]]);

    // replay the recursion toward B' in long double with very fine bisection
    long double t = ed.params[ed.me_index];
    long double tb = ed.params.back();
    std::vector<long double> replay;
    for (int guard = 0; guard < 10000; ++guard) {
        long double lo = 0, hi = (tb - t) * len;
        if (hi <= 0) break;
        auto phi = [&](long double s) {
            return s - 0.5L * (long double)mesh.edge_point_radius(e, (double)(t + s / len));
        };
        if (phi(hi) < 0) break;
        for (int it = 0; it < 120; ++it) {
            long double mid = 0.5L * (lo + hi);
            if (phi(mid) < 0)
                lo = mid;
            else
                hi = mid;
        }
        t += hi / len;
        replay.push_back(t);
    }
    std::vector<double> got(ed.params.begin() + ed.me_index + 1, ed.params.end() - 1);
    REQUIRE(got.size() == replay.size());
    for (size_t i = 0; i < got.size(); ++i)
        CHECK(got[i] == doctest::Approx((double)replay[i]).epsilon(1e-9));
}

TEST_CASE("edge counts grow like (1/eps) log(2/eps)") {
    WeightedTetMesh mesh = fixtures::single_tet();
    int e = mesh.edge_index(0, 1);
    std::vector<double> eps_sweep = {1.0, 0.5, 0.25, 0.125};
    std::vector<double> counts;
    for (double eps : eps_sweep) {
        DiscretizationParams p;
        p.epsilon = eps;
        Discretization disc(mesh, p, /*store_nodes=*/false);
        counts.push_back((double)disc.edge_points()[e].params.size());
    }
    auto model = [](double eps) { return (1.0 / eps) * std::log2(2.0 / eps); };
    for (size_t i = 0; i + 1 < eps_sweep.size(); ++i) {
        double got = counts[i + 1] / counts[i];
        double want = model(eps_sweep[i + 1]) / model(eps_sweep[i]);
        CHECK(got <= want * 2.0);
        CHECK(got >= want / 2.0);
    }
}

TEST_CASE("bisector lines follow the geometric progression") {
    WeightedTetMesh mesh = fixtures::single_tet();
    Discretization disc = make(mesh, 0.5);
    for (auto& bd : disc.bisector_points()) {
        const auto& bt = mesh.bisectors()[bd.bisector];
        double lambda = disc.params().lambda(bt.gamma);
        double q = std::sqrt(0.5 / 8.0) * std::sin(bt.gamma / 2.0);
        REQUIRE(!bd.segments.empty());
        // deepest-from-AB node lies on L_1 at p_1 = h * lambda
        CHECK(bd.segments.front().line_index == 1);
        CHECK(bd.segments.front().p == doctest::Approx(bt.height * lambda).epsilon(1e-12));
        for (size_t i = 0; i + 1 < bd.segments.size(); ++i) {
            const auto& s0 = bd.segments[i];
            const auto& s1 = bd.segments[i + 1];
            if (s1.line_index != s0.line_index + 1) continue;
            CHECK((s0.p - s1.p) / s1.p == doctest::Approx(q).epsilon(1e-12));
        }
    }
}

TEST_CASE("interior bisector nodes avoid every vicinity; boundary nodes sit on one") {
    WeightedTetMesh mesh = fixtures::single_tet();
    for (double eps : {1.0, 0.5}) {
        Discretization disc = make(mesh, eps);
        double tol = 1e-12 * mesh.scale();
        for (auto& bd : disc.bisector_points()) {
            for (auto& seg : bd.segments) {
                for (size_t i = 0; i < seg.nodes.size(); ++i) {
                    bool inside = disc.in_vicinity_union(bd.bisector, seg.nodes[i], -tol);
                    if (seg.on_boundary[i]) {
                        // on-boundary nodes should be within snapping of a hull
                        CHECK(disc.in_vicinity_union(bd.bisector, seg.nodes[i], 1e-9 * mesh.scale()));
                    } else {
                        CHECK(!inside);
                    }
                }
            }
        }
    }
}

TEST_CASE("vicinity membership") {
    WeightedTetMesh mesh = fixtures::two_tets(1.0, 1.0);
    Discretization disc = make(mesh, 0.5);
    double tol = 1e-12 * mesh.scale();
    for (int v = 0; v < (int)mesh.vertices().size(); ++v) {
        const Vicinity& vic = disc.vertex_vicinities()[v];
        CHECK(vic.contains(mesh.vertices()[v], tol));
        // a point twice the radius away along an incident edge is outside
        int e = mesh.vertex_edges(v)[0];
        auto& rec = mesh.edges()[e];
        int other = rec.v[0] == v ? rec.v[1] : rec.v[0];
        Vec3 dir = normalized(mesh.vertices()[other] - mesh.vertices()[v]);
        Vec3 far = mesh.vertices()[v] + dir * (2 * 0.5 * disc.vertex_r(v));
        CHECK(!vic.contains(far, tol));
    }
}

TEST_CASE("hull membership agrees with sampled supporting planes") {
    WeightedTetMesh mesh = fixtures::bipyramid(5, 9, 1.0, 2.0);
    Discretization disc = make(mesh, 0.5);
    testsup::Rng rng(77);
    double tol = 1e-12 * mesh.scale();
    int checked = 0;
    for (const Vicinity* vic :
         {&disc.vertex_vicinities()[0], &disc.edge_vicinities()[0], &disc.edge_vicinities()[3]}) {
        const auto& pts = vic->hull.points();
        REQUIRE(!pts.empty());
        Vec3 c{0, 0, 0};
        for (auto& p : pts) c += p;
        c = c / (double)pts.size();
        for (int k = 0; k < 300; ++k) {
            // random convex combination of hull points: must be inside
            Vec3 q{0, 0, 0};
            double wsum = 0;
            for (auto& p : pts) {
                double w = rng.uniform(0, 1);
                q += p * w;
                wsum += w;
            }
            q = q / wsum;
            CHECK(vic->hull.contains(q, tol));
            // push well past the farthest support: must be outside
            Vec3 dir = normalized(q - c);
            double h = -kInf;
            for (auto& p : pts) h = std::max(h, dot(dir, p - c));
            Vec3 out = c + dir * (h * 1.5 + 10 * tol);
            CHECK(!vic->hull.contains(out, tol));
            ++checked;
        }
    }
    CHECK(checked == 900);
}

TEST_CASE("audit: zero violations and monotone totals") {
    long prev = -1;
    for (double eps : {0.125, 0.25, 0.5, 1.0}) {
        WeightedTetMesh mesh = fixtures::single_tet();
        DiscretizationParams p;
        p.epsilon = eps;
        Discretization disc(mesh, p, /*store_nodes=*/false);
        AuditReport rep = disc.audit();
        CHECK(rep.violations == 0);
        CHECK(rep.c_of_domain > 0);
        if (prev >= 0) CHECK(rep.total_nodes <= prev);  // coarser eps, fewer points
        prev = rep.total_nodes;
    }
}

TEST_CASE("audit on a heterogeneous mesh") {
    WeightedTetMesh mesh = fixtures::bipyramid(6, 21, 0.5, 3.0);
    DiscretizationParams p;
    p.epsilon = 0.5;
    Discretization disc(mesh, p, false);
    AuditReport rep = disc.audit();
    CHECK(rep.violations == 0);
    CHECK(rep.per_bisector.size() == mesh.bisectors().size());
    CHECK(rep.per_edge.size() == mesh.edges().size());
}

TEST_CASE("snap_to_bisector: exact node hit, angle and detour bounds") {
    WeightedTetMesh mesh = fixtures::single_tet();
    double eps = 0.5;
    Discretization disc = make(mesh, eps);
    const auto& bd = disc.bisector_points()[0];
    const auto& bt = mesh.bisectors()[0];
    Plane f1 = mesh.face_plane(bt.faces[0]);

    // pick a mid-depth node and shoot a segment through it, perpendicular-ish
    const auto& seg = bd.segments[bd.segments.size() / 2];
    Vec3 q = seg.nodes[seg.nodes.size() / 2];
    Vec3 n = f1.n;
    Vec3 x1 = q + n * 0.05, x2 = q - n * 0.05;
    // project back onto the two faces by shrinking if needed; here just check
    // the pass-through case against the bisector
    SnapResult res = disc.snap_to_bisector(x1, x2, 0);
    CHECK(dist(res.node, q) < 1e-12);
    CHECK(res.detour == doctest::Approx(1.0));

    // random vicinity-free crossings obey the angle and detour bounds
    testsup::Rng rng(3);
    double tol = 1e-12 * mesh.scale();
    int done = 0;
    auto fpts1 = mesh.face_points(bt.faces[0]);
    auto fpts2 = mesh.face_points(bt.faces[1]);
    while (done < 200) {
        double a = rng.uniform(0, 1), b = rng.uniform(0, 1 - a);
        double c = rng.uniform(0, 1), d = rng.uniform(0, 1 - c);
        Vec3 p1 = fpts1[0] * a + fpts1[1] * b + fpts1[2] * (1 - a - b);
        Vec3 p2 = fpts2[0] * c + fpts2[1] * d + fpts2[2] * (1 - c - d);
        if (disc.in_vicinity_union(0, p1, tol) || disc.in_vicinity_union(0, p2, tol)) continue;
        Plane bp = plane_through(mesh.vertices()[bt.va], mesh.vertices()[bt.vb], bt.apex);
        Vec3 x0;
        if (!segment_plane_intersection(p1, p2, bp, x0)) continue;
        if (disc.in_vicinity_union(0, x0, tol)) continue;
        SnapResult r = disc.snap_to_bisector(p1, p2, 0);
        CHECK(r.angle <= std::sqrt(eps / 2.0) + 1e-9);
        CHECK(r.detour <= 1.0 + eps / 2.0 + 1e-9);
        ++done;
    }
}

TEST_CASE("snap rejects crossings inside a vicinity") {
    WeightedTetMesh mesh = fixtures::single_tet();
    Discretization disc = make(mesh, 0.5);
    const auto& bt = mesh.bisectors()[0];
    Vec3 A = mesh.vertices()[bt.va];
    Plane f1 = mesh.face_plane(bt.faces[0]);
    Vec3 near_vertex = A + (bt.apex - A) * 1e-4;
    CHECK_THROWS(disc.snap_to_bisector(near_vertex + f1.n * 0.01, near_vertex - f1.n * 0.01, 0));
}
