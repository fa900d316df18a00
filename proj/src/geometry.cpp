#include "wsp3d/geometry.hpp"

namespace wsp3d {

Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = dot(ab, ap), d2 = dot(ac, ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    Vec3 bp = p - b;
    double d3 = dot(ab, bp), d4 = dot(ac, bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        double v = d1 / (d1 - d3);
        return a + ab * v;
    }

    Vec3 cp = p - c;
    double d5 = dot(ab, cp), d6 = dot(ac, cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        double w = d2 / (d2 - d6);
        return a + ac * w;
    }

    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }

    double denom = 1.0 / (va + vb + vc);
    double v = vb * denom, w = vc * denom;
    return a + ab * v + ac * w;
}

std::array<double, 3> barycentric(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 v0 = b - a, v1 = c - a, v2 = p - a;
    double d00 = dot(v0, v0), d01 = dot(v0, v1), d11 = dot(v1, v1);
    double d20 = dot(v2, v0), d21 = dot(v2, v1);
    double denom = d00 * d11 - d01 * d01;
    if (denom == 0.0) return {kInf, kInf, kInf};
    double v = (d11 * d20 - d01 * d21) / denom;
    double w = (d00 * d21 - d01 * d20) / denom;
    return {1.0 - v - w, v, w};
}

bool point_in_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, double inset) {
    auto bc = barycentric(p, a, b, c);
    return bc[0] >= inset && bc[1] >= inset && bc[2] >= inset;
}

double dihedral_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    Vec3 u = normalized(b - a);
    auto in_plane = [&](const Vec3& q) {
        Vec3 w = q - a;
        return normalized(w - u * dot(w, u));
    };
    Vec3 v1 = in_plane(c), v2 = in_plane(d);
    double cg = dot(v1, v2);
    cg = cg < -1.0 ? -1.0 : (cg > 1.0 ? 1.0 : cg);
    return std::acos(cg);
}

bool segment_plane_intersection(const Vec3& p, const Vec3& q, const Plane& plane, Vec3& out) {
    double dp = plane.signed_dist(p), dq = plane.signed_dist(q);
    if (dp == 0.0) { out = p; return true; }
    if (dq == 0.0) { out = q; return true; }
    if ((dp > 0.0) == (dq > 0.0)) return false;
    double t = dp / (dp - dq);
    out = p + (q - p) * t;
    return true;
}

}  // namespace wsp3d
