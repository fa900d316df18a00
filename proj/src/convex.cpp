#include "wsp3d/convex.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace wsp3d {

namespace {

struct HullFace {
    int a, b, c;
    Vec3 n;  // outward, unit
    double d;
    bool alive = true;
    std::vector<int> outside;  // conflict points
};

}  // namespace

ConvexPolytope ConvexPolytope::hull_of(std::vector<Vec3> pts, double scale) {
    ConvexPolytope poly;
    if (pts.empty()) return poly;
    double eps = 1e-12 * std::max(scale, 1e-300);

    // initial simplex: extreme pair, farthest from line, farthest from plane
    int i0 = 0, i1 = 0;
    double best = -1;
    for (int k = 0; k < 3; ++k) {
        auto coord = [&](const Vec3& p) { return k == 0 ? p.x : (k == 1 ? p.y : p.z); };
        int lo = 0, hi = 0;
        for (int i = 1; i < (int)pts.size(); ++i) {
            if (coord(pts[i]) < coord(pts[lo])) lo = i;
            if (coord(pts[i]) > coord(pts[hi])) hi = i;
        }
        double d = dist(pts[lo], pts[hi]);
        if (d > best) {
            best = d;
            i0 = lo;
            i1 = hi;
        }
    }
    auto degenerate_slab = [&]() {
        // flat or lower-dimensional input: represent as a thin slab around the
        // best-fit plane so membership keeps snapping semantics
        Vec3 c{0, 0, 0};
        for (auto& p : pts) c += p;
        c = c / (double)pts.size();
        // crude normal: smallest-extent direction via cross of two spreads
        Vec3 u = pts[i1] - pts[i0];
        Vec3 w{1, 0, 0};
        if (norm(cross(u, w)) < eps) w = {0, 1, 0};
        Vec3 n = normalized(cross(u, cross(u, w)));
        for (auto& p : pts) {
            Vec3 v = p - c;
            Vec3 perp = v - u * (dot(v, u) / std::max(norm2(u), eps * eps));
            if (norm(perp) > eps) {
                n = normalized(cross(u, perp));
                break;
            }
        }
        poly.pts_ = pts;
        poly.facets_.push_back({n, dot(n, c) + eps});
        poly.facets_.push_back({-n, dot(-n, c) + eps});
        return poly;
    };
    if (best <= eps) {
        // all points coincide: tiny box
        poly.pts_ = {pts[0]};
        for (auto s : {+1.0, -1.0}) {
            poly.facets_.push_back({{s, 0, 0}, s * pts[0].x + eps});
            poly.facets_.push_back({{0, s, 0}, s * pts[0].y + eps});
            poly.facets_.push_back({{0, 0, s}, s * pts[0].z + eps});
        }
        return poly;
    }

    int i2 = -1;
    best = eps;
    for (int i = 0; i < (int)pts.size(); ++i) {
        double d = norm(cross(pts[i] - pts[i0], pts[i1] - pts[i0])) / dist(pts[i0], pts[i1]);
        if (d > best) {
            best = d;
            i2 = i;
        }
    }
    if (i2 < 0) return degenerate_slab();

    Plane base = plane_through(pts[i0], pts[i1], pts[i2]);
    int i3 = -1;
    best = eps;
    for (int i = 0; i < (int)pts.size(); ++i) {
        double d = std::abs(base.signed_dist(pts[i]));
        if (d > best) {
            best = d;
            i3 = i;
        }
    }
    if (i3 < 0) return degenerate_slab();

    std::vector<HullFace> faces;
    Vec3 centroid = (pts[i0] + pts[i1] + pts[i2] + pts[i3]) / 4.0;
    auto add_face = [&](int a, int b, int c) {
        HullFace f;
        f.a = a;
        f.b = b;
        f.c = c;
        f.n = normalized(cross(pts[b] - pts[a], pts[c] - pts[a]));
        if (dot(f.n, centroid - pts[a]) > 0) {
            std::swap(f.b, f.c);
            f.n = -f.n;
        }
        f.d = dot(f.n, pts[f.a]);
        faces.push_back(f);
        return (int)faces.size() - 1;
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    for (int i = 0; i < (int)pts.size(); ++i) {
        for (auto& f : faces) {
            if (dot(f.n, pts[i]) - f.d > eps) {
                f.outside.push_back(i);
                break;
            }
        }
    }

    for (;;) {
        int fi = -1;
        for (int i = 0; i < (int)faces.size(); ++i)
            if (faces[i].alive && !faces[i].outside.empty()) {
                fi = i;
                break;
            }
        if (fi < 0) break;

        // farthest conflict point of this face
        int far = faces[fi].outside[0];
        double fd = -kInf;
        for (int idx : faces[fi].outside) {
            double d = dot(faces[fi].n, pts[idx]) - faces[fi].d;
            if (d > fd) {
                fd = d;
                far = idx;
            }
        }

        // visible set + horizon
        std::vector<int> visible;
        std::vector<char> is_visible(faces.size(), 0);
        for (int i = 0; i < (int)faces.size(); ++i)
            if (faces[i].alive && dot(faces[i].n, pts[far]) - faces[i].d > eps) {
                visible.push_back(i);
                is_visible[i] = 1;
            }
        std::map<std::pair<int, int>, int> edge_count;
        auto touch = [&](int a, int b) {
            auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
            edge_count[key]++;
        };
        for (int vi : visible) {
            touch(faces[vi].a, faces[vi].b);
            touch(faces[vi].b, faces[vi].c);
            touch(faces[vi].c, faces[vi].a);
        }
        std::vector<int> orphans;
        for (int vi : visible) {
            faces[vi].alive = false;
            for (int idx : faces[vi].outside)
                if (idx != far) orphans.push_back(idx);
            faces[vi].outside.clear();
        }
        std::vector<int> fresh;
        for (auto& [key, cnt] : edge_count) {
            if (cnt != 1) continue;  // internal edge of the visible region
            fresh.push_back(add_face(key.first, key.second, far));
        }
        // fix orientation of fresh faces against the (interior) centroid
        for (int nf : fresh) {
            HullFace& f = faces[nf];
            if (dot(f.n, centroid) - f.d > eps) {
                std::swap(f.b, f.c);
                f.n = -f.n;
                f.d = dot(f.n, pts[f.a]);
            }
        }
        for (int idx : orphans) {
            for (int nf : fresh) {
                if (dot(faces[nf].n, pts[idx]) - faces[nf].d > eps) {
                    faces[nf].outside.push_back(idx);
                    break;
                }
            }
        }
        if (faces.size() > 16 * pts.size() + 64) break;  // safety valve
    }

    std::vector<char> used(pts.size(), 0);
    for (auto& f : faces) {
        if (!f.alive) continue;
        poly.facets_.push_back({f.n, f.d});
        used[f.a] = used[f.b] = used[f.c] = 1;
    }
    for (int i = 0; i < (int)pts.size(); ++i)
        if (used[i]) poly.pts_.push_back(pts[i]);
    return poly;
}

bool ConvexPolytope::contains(const Vec3& p, double tol) const {
    if (facets_.empty()) return false;
    for (auto& f : facets_)
        if (dot(f.n, p) - f.d > tol) return false;
    return true;
}

double ConvexPolytope::boundary_excess(const Vec3& p) const {
    double worst = -kInf;
    for (auto& f : facets_) worst = std::max(worst, dot(f.n, p) - f.d);
    return worst;
}

bool ConvexPolytope::clip_segment(const Vec3& a, const Vec3& b, double& t0, double& t1) const {
    t0 = 0.0;
    t1 = 1.0;
    Vec3 d = b - a;
    for (auto& f : facets_) {
        double denom = dot(f.n, d);
        double num = f.d - dot(f.n, a);
        if (std::abs(denom) < 1e-300) {
            if (num < 0) return false;  // parallel and outside
            continue;
        }
        double t = num / denom;
        if (denom > 0)
            t1 = std::min(t1, t);
        else
            t0 = std::max(t0, t);
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace wsp3d
