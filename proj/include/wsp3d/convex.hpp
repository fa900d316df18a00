// Small 3-d convex hull (quickhull) with half-space membership tests and
// segment clipping; backs the vertex/edge vicinity geometry.
#pragma once

#include <vector>

#include "wsp3d/geometry.hpp"

namespace wsp3d {

class ConvexPolytope {
public:
    struct Facet {
        Vec3 n;    // outward unit normal
        double d;  // plane offset: inside iff dot(n, p) <= d
    };

    static ConvexPolytope hull_of(std::vector<Vec3> pts, double scale);

    bool contains(const Vec3& p, double tol) const;
    // Signed slack: max over facets of dot(n,p)-d (<=0 inside). Degenerate
    // hulls report distance to the slab.
    double boundary_excess(const Vec3& p) const;
    // Intersection of segment [a,b] with the polytope as a parameter interval;
    // false when empty.
    bool clip_segment(const Vec3& a, const Vec3& b, double& t0, double& t1) const;

    const std::vector<Facet>& facets() const { return facets_; }
    const std::vector<Vec3>& points() const { return pts_; }
    bool empty() const { return facets_.empty(); }

private:
    std::vector<Facet> facets_;
    std::vector<Vec3> pts_;
};

}  // namespace wsp3d
