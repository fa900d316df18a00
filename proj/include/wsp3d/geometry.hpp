// Basic 3-d vector/plane/triangle primitives shared by all modules.
#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace wsp3d {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    Vec3 operator-() const { return {-x, -y, -z}; }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(const Vec3& v) { return dot(v, v); }
inline double norm(const Vec3& v) { return std::sqrt(norm2(v)); }
inline double dist(const Vec3& a, const Vec3& b) { return norm(a - b); }

inline Vec3 normalized(const Vec3& v) {
    double n = norm(v);
    return n > 0.0 ? v / n : Vec3{0, 0, 0};
}

// Oriented plane through `point` with unit normal `n`.
struct Plane {
    Vec3 point;
    Vec3 n;

    double signed_dist(const Vec3& p) const { return dot(p - point, n); }
    Vec3 project(const Vec3& p) const { return p - n * signed_dist(p); }
};

inline Plane plane_through(const Vec3& a, const Vec3& b, const Vec3& c) {
    return {a, normalized(cross(b - a, c - a))};
}

// Closest point on segment [a,b] to p.
inline Vec3 closest_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
    Vec3 d = b - a;
    double l2 = norm2(d);
    if (l2 <= 0.0) return a;
    double t = dot(p - a, d) / l2;
    t = t < 0.0 ? 0.0 : (t > 1.0 ? 1.0 : t);
    return a + d * t;
}

// Closest point on triangle (a,b,c) to p (Ericson-style region walk).
Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

inline double dist_point_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    return dist(p, closest_on_triangle(p, a, b, c));
}

// Barycentric coordinates of p with respect to triangle (a,b,c), computed in
// the triangle's plane (p is projected first).
std::array<double, 3> barycentric(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// True when p projects strictly inside the triangle, with every barycentric
// coordinate at least `inset` (inset < 0 admits points slightly outside).
bool point_in_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c,
                       double inset = 0.0);

// Signed volume of the tetrahedron (a,b,c,d).
inline double signed_tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return dot(cross(b - a, c - a), d - a) / 6.0;
}

// Dihedral angle along edge (a,b) between the half-planes toward c and d.
double dihedral_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// Intersection of segment [p,q] with a plane; returns false when the segment
// does not cross (endpoints on the same strict side).
bool segment_plane_intersection(const Vec3& p, const Vec3& q, const Plane& plane, Vec3& out);

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace wsp3d
