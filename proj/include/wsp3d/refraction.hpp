// Snell's-law primitives: the weighted distance function across a weighted
// plane, bending-point solvers, critical angles, asymptotes, and local
// shortest paths across a triangular face.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "wsp3d/geometry.hpp"

namespace wsp3d {

struct RefractionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Weighted plane: w_minus on the negative-normal side, w_plus on the positive
// side, w_face on the plane itself.
struct PlaneMedia {
    Plane F;
    double w_minus = 1.0;
    double w_face = 1.0;
    double w_plus = 1.0;
};

struct RefractionPath {
    std::vector<Vec3> points;        // source, bends (0..2 on F), target
    std::vector<double> seg_weights; // weight applied to each segment
    double cost = 0.0;
    bool face_using = false;         // a middle segment runs inside F
    double snell_residual = 0.0;     // |w- sin(phi-) - w+ sin(phi+)| at the bend
    double phi_in = 0.0, phi_out = 0.0;  // incidence angles at the first/last bend

    int num_bends() const { return (int)points.size() - 2; }
};

// Canonical frame of the weighted distance function:
// F = {z = 0}, source v = (0, y, -z_minus), target line {y = 0, z = z_plus},
// c(x) = cost of the geodesic from v to (x, 0, z_plus).
struct MediaConfig {
    double w_minus = 1.0, w_face = 1.0, w_plus = 1.0;
    double y = 0.0;
    double z_minus = 1.0, z_plus = 1.0;

    double kappa() const {
        double lo = std::min(w_minus, w_plus), hi = std::max(w_minus, w_plus);
        return lo / hi;
    }
    double phi_star() const { return std::asin(std::min(1.0, kappa())); }
};

// Scalar cost profile from one fixed source to a line parallel to F, as a
// function of the in-plane offset rho >= 0. This is the hot path of the
// Voronoi and graph machinery; bending data comes in in-plane chord
// coordinates (distance from the source's projection toward the target's).
class CostProfile {
public:
    CostProfile() : CostProfile(1.0, 1.0, 1.0, 0.0, 0.0, true) {}
    // z distances are unsigned; opposite=false means source and target lie on
    // the same side of F (the face-touching reading of the distance function).
    CostProfile(double w_src, double w_face, double w_tgt, double z_src, double z_tgt,
                bool opposite, double snap = 0.0);

    double cost(double rho) const;
    // d(cost)/d(rho); equals the transverse slowness w*sin(phi) of the path.
    double dcost(double rho) const;
    // Bend positions along the chord; returns count (0 when the source sits on
    // the plane and the path leaves it immediately at the source).
    int bends(double rho, std::array<double, 2>& s) const;
    bool face_using(double rho) const;

    double w_src() const { return w_src_; }
    double w_tgt() const { return w_tgt_; }
    double z_src() const { return z_src_; }
    double z_tgt() const { return z_tgt_; }

private:
    enum class Kind { Snell, Explicit, OneBendSrc, OneBendTgt, InPlane };
    Kind kind_;
    double w_src_, w_face_, w_tgt_;
    double z_src_, z_tgt_;
    double tan_star_ = 0.0, run_cost_ = 0.0, rho_break_ = kInf;
    // Snell-only state
    mutable double warm_tau_ = 0.5;
    double solve_tau(double rho) const;
};

// Snell two-segment bend across F. Requires v strictly below, x strictly
// above, and w_minus != w_plus. tol is relative on the Snell residual.
RefractionPath snell_bend(const Vec3& v, const Vec3& x, const PlaneMedia& media,
                          double tol = 1e-10);

// Full weighted distance per the minimization over bending points on F:
// straddling pairs refract (or pass straight), same-weight pairs use the
// explicit case with an optional face-using middle segment. Points on the
// closed halves are accepted; both on the same side is read as the
// face-touching distance.
RefractionPath weighted_distance(const Vec3& v, const Vec3& x, const PlaneMedia& media);

// Canonical-frame evaluation c(x) and its path.
double weighted_distance_value(const MediaConfig& cfg, double x);
RefractionPath weighted_distance_path(const MediaConfig& cfg, double x);

// Asymptote c(x) ~ slope*x + intercept for x -> +inf (side=+1) or -inf.
struct Asymptote {
    double slope;
    double intercept;
};
Asymptote asymptote(const MediaConfig& cfg, int side);

// Local shortest path between p and q constrained to bend on the face
// (a,b,c) carrying media (w_p, w_face, w_q). interior reports whether every
// bending point is strictly inside the triangle (inset-scaled test).
struct LocalPath {
    double cost = 0.0;
    std::vector<Vec3> bends;
    bool interior = false;
    bool face_using = false;
};
LocalPath local_shortest_path(const Vec3& p, const Vec3& q, const std::array<Vec3, 3>& face,
                              double w_p, double w_face, double w_q,
                              double inset_rel = 1e-12);

// Arrival angle alpha(x): angle between the path's last segment and +e1 at the
// target line, in the canonical frame.
double arrival_angle(const MediaConfig& cfg, double x);
// Inverse map x(y, alpha) realized by the solver (alpha(x) is strictly
// monotone); used by the finite-difference checks.
double x_of_alpha(const MediaConfig& cfg, double y, double alpha);

}  // namespace wsp3d
