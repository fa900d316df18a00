#include "wsp3d/refraction.hpp"

#include <algorithm>
#include <cmath>

namespace wsp3d {

namespace {
constexpr double kWeightEqRel = 1e-12;

bool weights_equal(double a, double b) {
    return std::abs(a - b) <= kWeightEqRel * std::max(a, b);
}
}  // namespace

CostProfile::CostProfile(double w_src, double w_face, double w_tgt, double z_src, double z_tgt,
                         bool opposite, double snap)
    : w_src_(w_src), w_face_(w_face), w_tgt_(w_tgt), z_src_(z_src), z_tgt_(z_tgt) {
    if (z_src_ <= snap) z_src_ = 0.0;
    if (z_tgt_ <= snap) z_tgt_ = 0.0;

    auto setup_critical = [&](double w_cell, double z) {
        if (w_face_ >= w_cell * (1.0 - kWeightEqRel)) {
            tan_star_ = kInf;
            rho_break_ = kInf;
            run_cost_ = 0.0;
        } else {
            double sin_star = w_face_ / w_cell;
            double cos_star = std::sqrt(1.0 - sin_star * sin_star);
            tan_star_ = sin_star / cos_star;
            rho_break_ = z * tan_star_;
            run_cost_ = w_cell * z * cos_star;  // cost offset of the face-run regime
        }
    };

    if (z_src_ == 0.0 && z_tgt_ == 0.0) {
        kind_ = Kind::InPlane;
    } else if (z_src_ == 0.0) {
        kind_ = Kind::OneBendSrc;
        setup_critical(w_tgt_, z_tgt_);
    } else if (z_tgt_ == 0.0) {
        kind_ = Kind::OneBendTgt;
        setup_critical(w_src_, z_src_);
    } else if (weights_equal(w_src_, w_tgt_)) {
        kind_ = Kind::Explicit;
        setup_critical(w_src_, z_src_ + z_tgt_);
    } else {
        if (!opposite)
            throw RefractionError("same-side pair with unequal cell weights has no local path form");
        kind_ = Kind::Snell;
    }
}

double CostProfile::solve_tau(double rho) const {
    // Root of w- t / sqrt(t^2 rho^2 + zs^2) = w+ (1-t) / sqrt((1-t)^2 rho^2 + zt^2)
    // on (0,1); the left side minus the right is strictly increasing in t.
    double zs2 = z_src_ * z_src_, zt2 = z_tgt_ * z_tgt_, r2 = rho * rho;
    auto g = [&](double t, double& dg) {
        double u = t * t * r2 + zs2, v = (1 - t) * (1 - t) * r2 + zt2;
        double su = std::sqrt(u), sv = std::sqrt(v);
        dg = w_src_ * zs2 / (u * su) + w_tgt_ * zt2 / (v * sv);
        return w_src_ * t / su - w_tgt_ * (1 - t) / sv;
    };
    double lo = 0.0, hi = 1.0;
    double t = warm_tau_;
    if (!(t > 0.0 && t < 1.0)) t = 0.5;
    for (int it = 0; it < 100; ++it) {
        double dg;
        double val = g(t, dg);
        if (val > 0)
            hi = t;
        else
            lo = t;
        if (std::abs(val) * rho <= 1e-14 * (w_src_ + w_tgt_) || hi - lo <= 1e-16) break;
        double tn = t - val / dg;
        if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
        t = tn;
    }
    warm_tau_ = t;
    return t;
}

double CostProfile::cost(double rho) const {
    rho = std::abs(rho);
    switch (kind_) {
        case Kind::InPlane:
            return w_face_ * rho;
        case Kind::OneBendSrc: {
            if (rho <= rho_break_) return w_tgt_ * std::sqrt(rho * rho + z_tgt_ * z_tgt_);
            return w_face_ * rho + run_cost_;
        }
        case Kind::OneBendTgt: {
            if (rho <= rho_break_) return w_src_ * std::sqrt(rho * rho + z_src_ * z_src_);
            return w_face_ * rho + run_cost_;
        }
        case Kind::Explicit: {
            double zbar = z_src_ + z_tgt_;
            if (rho <= rho_break_) return w_src_ * std::sqrt(rho * rho + zbar * zbar);
            return w_face_ * rho + run_cost_;
        }
        case Kind::Snell: {
            if (rho == 0.0) return w_src_ * z_src_ + w_tgt_ * z_tgt_;
            double t = solve_tau(rho);
            double a = std::sqrt(t * t * rho * rho + z_src_ * z_src_);
            double b = std::sqrt((1 - t) * (1 - t) * rho * rho + z_tgt_ * z_tgt_);
            return w_src_ * a + w_tgt_ * b;
        }
    }
    return 0.0;
}

double CostProfile::dcost(double rho) const {
    rho = std::abs(rho);
    switch (kind_) {
        case Kind::InPlane:
            return w_face_;
        case Kind::OneBendSrc:
            if (rho <= rho_break_) return w_tgt_ * rho / std::sqrt(rho * rho + z_tgt_ * z_tgt_);
            return w_face_;
        case Kind::OneBendTgt:
            if (rho <= rho_break_) return w_src_ * rho / std::sqrt(rho * rho + z_src_ * z_src_);
            return w_face_;
        case Kind::Explicit: {
            double zbar = z_src_ + z_tgt_;
            if (rho <= rho_break_) return w_src_ * rho / std::sqrt(rho * rho + zbar * zbar);
            return w_face_;
        }
        case Kind::Snell: {
            if (rho == 0.0) return 0.0;
            double t = solve_tau(rho);
            double a = std::sqrt(t * t * rho * rho + z_src_ * z_src_);
            return w_src_ * t * rho / a;  // w- sin(phi-)
        }
    }
    return 0.0;
}

int CostProfile::bends(double rho, std::array<double, 2>& s) const {
    rho = std::abs(rho);
    switch (kind_) {
        case Kind::InPlane:
            return 0;
        case Kind::OneBendSrc:
            // below the break the path leaves F at the source point itself
            if (rho <= rho_break_) return 0;
            s[0] = rho - rho_break_;
            return 1;
        case Kind::OneBendTgt:
            if (rho <= rho_break_) return 0;
            s[0] = rho_break_;
            return 1;
        case Kind::Explicit: {
            double zbar = z_src_ + z_tgt_;
            if (zbar == 0.0) return 0;
            if (rho <= rho_break_) {
                s[0] = rho * z_src_ / zbar;
                return 1;
            }
            s[0] = z_src_ * tan_star_;
            s[1] = rho - z_tgt_ * tan_star_;
            return 2;
        }
        case Kind::Snell: {
            double t = rho == 0.0 ? 0.0 : solve_tau(rho);
            s[0] = t * rho;
            return 1;
        }
    }
    return 0;
}

bool CostProfile::face_using(double rho) const {
    rho = std::abs(rho);
    switch (kind_) {
        case Kind::InPlane:
            return true;
        case Kind::OneBendSrc:
        case Kind::OneBendTgt:
        case Kind::Explicit:
            return rho > rho_break_;
        case Kind::Snell:
            return false;
    }
    return false;
}

namespace {

// Per-segment weights for a profile path with nb bends.
std::vector<double> segment_weights(const CostProfile& prof, double w_face, int nb,
                                    bool face_run) {
    if (nb == 2) return {prof.w_src(), w_face, prof.w_tgt()};
    if (nb == 0) {
        if (prof.z_src() == 0.0 && prof.z_tgt() == 0.0) return {w_face};
        return {prof.z_src() == 0.0 ? prof.w_tgt() : prof.w_src()};
    }
    // one bend: either a refraction/crossing or a face-run on one side
    if (face_run) {
        if (prof.z_src() == 0.0) return {w_face, prof.w_tgt()};
        if (prof.z_tgt() == 0.0) return {prof.w_src(), w_face};
    }
    return {prof.w_src(), prof.w_tgt()};
}

RefractionPath assemble_path(const Vec3& v, const Vec3& x, const PlaneMedia& media,
                             const CostProfile& prof) {
    Vec3 pv = media.F.project(v), px = media.F.project(x);
    double rho = dist(pv, px);
    Vec3 dir = rho > 0 ? (px - pv) / rho : Vec3{0, 0, 0};

    RefractionPath out;
    out.points.push_back(v);
    std::array<double, 2> s;
    int nb = prof.bends(rho, s);
    for (int i = 0; i < nb; ++i) out.points.push_back(pv + dir * s[i]);
    out.points.push_back(x);
    out.cost = prof.cost(rho);
    out.face_using = prof.face_using(rho);
    out.seg_weights = segment_weights(prof, media.w_face, nb, out.face_using);

    // Generalized Snell residual at every bend: |w_in sin(phi_in) - w_out
    // sin(phi_out)| with sin(phi) = 1 for in-plane segments.
    double worst = 0.0;
    for (int i = 1; i + 1 < (int)out.points.size(); ++i) {
        Vec3 din = out.points[i] - out.points[i - 1];
        Vec3 dout = out.points[i + 1] - out.points[i];
        double li = norm(din), lo = norm(dout);
        if (li == 0.0 || lo == 0.0) continue;
        double sin_in = norm(cross(din / li, media.F.n));
        double sin_out = norm(cross(dout / lo, media.F.n));
        double w_in = out.seg_weights[i - 1], w_out = out.seg_weights[i];
        worst = std::max(worst, std::abs(w_in * sin_in - w_out * sin_out));
        if (i == 1) out.phi_in = std::asin(std::min(1.0, sin_in));
        if (i + 2 == (int)out.points.size()) out.phi_out = std::asin(std::min(1.0, sin_out));
    }
    out.snell_residual = worst;
    return out;
}

}  // namespace

RefractionPath snell_bend(const Vec3& v, const Vec3& x, const PlaneMedia& media, double tol) {
    (void)tol;
    for (auto* p : {&v, &x})
        if (!std::isfinite(p->x) || !std::isfinite(p->y) || !std::isfinite(p->z))
            throw RefractionError("non-finite input point");
    double dv = media.F.signed_dist(v), dx = media.F.signed_dist(x);
    if (dv == 0.0 || dx == 0.0) throw RefractionError("point on F: degenerate for snell_bend");
    if ((dv > 0) == (dx > 0)) throw RefractionError("snell_bend requires points on opposite sides");
    if (weights_equal(media.w_minus, media.w_plus)) return weighted_distance(v, x, media);

    bool v_below = dv < 0;
    double w_src = v_below ? media.w_minus : media.w_plus;
    double w_tgt = v_below ? media.w_plus : media.w_minus;
    CostProfile prof(w_src, media.w_face, w_tgt, std::abs(dv), std::abs(dx), true);
    return assemble_path(v, x, media, prof);
}

RefractionPath weighted_distance(const Vec3& v, const Vec3& x, const PlaneMedia& media) {
    double dv = media.F.signed_dist(v), dx = media.F.signed_dist(x);
    bool opposite = (dv <= 0 && dx >= 0) || (dv >= 0 && dx <= 0);
    double w_src, w_tgt;
    if (opposite) {
        bool v_below = dv < 0 || (dv == 0.0 && dx > 0.0);
        w_src = v_below ? media.w_minus : media.w_plus;
        w_tgt = v_below ? media.w_plus : media.w_minus;
    } else {
        w_src = w_tgt = dv > 0 ? media.w_plus : media.w_minus;
    }
    CostProfile prof(w_src, media.w_face, w_tgt, std::abs(dv), std::abs(dx), opposite);
    return assemble_path(v, x, media, prof);
}

namespace {
PlaneMedia canonical_media(const MediaConfig& cfg) {
    PlaneMedia m;
    m.F = {{0, 0, 0}, {0, 0, 1}};
    m.w_minus = cfg.w_minus;
    m.w_face = cfg.w_face;
    m.w_plus = cfg.w_plus;
    return m;
}
}  // namespace

double weighted_distance_value(const MediaConfig& cfg, double x) {
    CostProfile prof(cfg.w_minus, cfg.w_face, cfg.w_plus, cfg.z_minus, cfg.z_plus, true);
    double rho = std::sqrt(x * x + cfg.y * cfg.y);
    return prof.cost(rho);
}

RefractionPath weighted_distance_path(const MediaConfig& cfg, double x) {
    return weighted_distance({0, cfg.y, -cfg.z_minus}, {x, 0, cfg.z_plus}, canonical_media(cfg));
}

Asymptote asymptote(const MediaConfig& cfg, int side) {
    double sgn = side >= 0 ? 1.0 : -1.0;
    if (weights_equal(cfg.w_minus, cfg.w_plus)) {
        if (cfg.w_face >= cfg.w_minus * (1.0 - kWeightEqRel)) return {sgn * cfg.w_minus, 0.0};
        // face-run regime: c ~ w rho + w zbar wbar (plus sign confirmed by the
        // brute-force oracle; see tests)
        double wbar = std::sqrt(cfg.w_minus * cfg.w_minus / (cfg.w_face * cfg.w_face) - 1.0);
        return {sgn * cfg.w_face, cfg.w_face * (cfg.z_minus + cfg.z_plus) * wbar};
    }
    double phi = cfg.phi_star();
    double cot = std::cos(phi) / std::sin(phi);
    if (cfg.w_plus < cfg.w_minus) return {sgn * cfg.w_plus, cfg.w_plus * cfg.z_minus * cot};
    return {sgn * cfg.w_minus, cfg.w_minus * cfg.z_plus * cot};
}

LocalPath local_shortest_path(const Vec3& p, const Vec3& q, const std::array<Vec3, 3>& face,
                              double w_p, double w_face, double w_q, double inset_rel) {
    Plane F = plane_through(face[0], face[1], face[2]);
    if (norm(F.n) == 0.0) throw RefractionError("degenerate face");
    PlaneMedia media;
    media.F = F;
    media.w_face = w_face;
    double dp = F.signed_dist(p);
    if (dp >= 0) {
        media.w_plus = w_p;
        media.w_minus = w_q;
    } else {
        media.w_minus = w_p;
        media.w_plus = w_q;
    }
    RefractionPath rp = weighted_distance(p, q, media);

    LocalPath out;
    out.cost = rp.cost;
    out.face_using = rp.face_using;
    // geometric inset: bc[i] * altitude[i] is the distance to the i-th edge
    double area = 0.5 * norm(cross(face[1] - face[0], face[2] - face[0]));
    std::array<double, 3> alt = {2.0 * area / dist(face[1], face[2]),
                                 2.0 * area / dist(face[2], face[0]),
                                 2.0 * area / dist(face[0], face[1])};
    double scale = std::max({dist(face[0], face[1]), dist(face[1], face[2]), dist(face[2], face[0])});
    double inset = inset_rel * scale;
    out.interior = rp.num_bends() > 0;
    for (int i = 1; i + 1 < (int)rp.points.size(); ++i) {
        out.bends.push_back(rp.points[i]);
        auto bc = barycentric(rp.points[i], face[0], face[1], face[2]);
        for (int k = 0; k < 3; ++k)
            if (!(bc[k] * alt[k] > inset)) out.interior = false;
    }
    return out;
}

double arrival_angle(const MediaConfig& cfg, double x) {
    CostProfile prof(cfg.w_minus, cfg.w_face, cfg.w_plus, cfg.z_minus, cfg.z_plus, true);
    double rho = std::sqrt(x * x + cfg.y * cfg.y);
    double dcdx = rho > 0 ? prof.dcost(rho) * (x / rho) : 0.0;
    double c = dcdx / cfg.w_plus;
    c = std::min(1.0, std::max(-1.0, c));
    return std::acos(c);
}

double x_of_alpha(const MediaConfig& cfg, double y, double alpha) {
    MediaConfig c = cfg;
    c.y = y;
    double span = 10.0 * (c.z_minus + c.z_plus + std::abs(y) + 1.0);
    double lo = -span, hi = span;
    // alpha(x) decreases as x grows; widen the bracket as needed
    while (arrival_angle(c, lo) < alpha && span < 1e12) {
        span *= 4;
        lo = -span;
    }
    while (arrival_angle(c, hi) > alpha && span < 1e12) {
        span *= 4;
        hi = span;
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (arrival_angle(c, mid) > alpha)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, std::abs(mid))) break;
    }
    return 0.5 * (lo + hi);
}

}  // namespace wsp3d
