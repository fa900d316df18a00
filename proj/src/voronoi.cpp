#include "wsp3d/voronoi.hpp"

#include <algorithm>
#include <cmath>

namespace wsp3d {

namespace {
bool f_tie(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({std::abs(a), std::abs(b), 1e-300});
}
}  // namespace

double Diagram1D::dcur(double x) const {
    int o = owner_at(x);
    return o >= 0 ? metric_.f(sites_[o], x) : kInf;
}

int Diagram1D::owner_at(double x) const {
    auto [key, val] = bp_.floor_entry(x);
    if (!val) {
        // x below the left sentinel: first interval
        auto& bp = const_cast<OrderStatTree<double, int>&>(bp_);
        if (bp.size() == 0) return -1;
        auto [k0, v0] = bp.kth(0);
        (void)k0;
        return v0 ? *v0 : -1;
    }
    if (*val < 0) {
        // x at or beyond the right sentinel: owner of the last interval
        const double* pred = bp_.predecessor(*key);
        if (!pred) return -1;
        auto [k1, v1] = bp_.floor_entry(*pred);
        (void)k1;
        return v1 && *v1 >= 0 ? *v1 : -1;
    }
    return *val;
}

int Diagram1D::winner_at(double x) const {
    if (sites_.empty()) return -1;
    auto& bp = const_cast<OrderStatTree<double, int>&>(bp_);
    int m = bp.size();
    int k0 = std::max(0, bp.rank(x - tol_) - 1);
    int k1 = std::min(m - 1, bp.rank(x + tol_));
    double fmin = kInf;
    for (int k = k0; k <= k1; ++k) {
        auto [key, val] = bp.kth(k);
        (void)key;
        if (val && *val >= 0) fmin = std::min(fmin, metric_.f(sites_[*val], x));
    }
    int best = -1;
    for (int k = k0; k <= k1; ++k) {
        auto [key, val] = bp.kth(k);
        (void)key;
        if (!val || *val < 0) continue;
        int o = *val;
        if (!f_tie(metric_.f(sites_[o], x), fmin)) continue;
        if (best < 0 || sites_[o].entry < sites_[best].entry) best = o;
    }
    return best;
}

Diagram1D::PointSide Diagram1D::compare_at(double M, const AdditiveSite& candidate) const {
    switch (classify(M, candidate).kind) {
        case Classified::Inside: return PointSide::Inside;
        case Classified::Left: return PointSide::Left;
        case Classified::Right: return PointSide::Right;
        case Classified::Empty: break;
    }
    return PointSide::Empty;
}

Diagram1D::Classified Diagram1D::classify(double M, const AdditiveSite& sv) const {
    if (metric_.f(sv, M) < dcur(M)) return {Classified::Inside};

    auto& bp = const_cast<OrderStatTree<double, int>&>(bp_);
    int r = bp.rank(M);
    std::vector<int> wit;
    if (r >= 1) {
        auto [k, o] = bp.kth(r - 1);
        (void)k;
        if (o && *o >= 0) wit.push_back(*o);
    }
    if (r < bp.size()) {
        auto [k, o] = bp.kth(r);
        (void)k;
        if (o && *o >= 0) wit.push_back(*o);
    }
    if (wit.empty()) return {Classified::Empty};

    int side = 0;
    for (int u : wit) {
        // g = f_u - f_v is unimodal for equidistant sites and g(M) <= 0, so
        // any positive region lies on the side where g still increases
        double gp = metric_.dfdx(sites_[u], M) - metric_.dfdx(sv, M);
        int s = gp > 0 ? +1 : (gp < 0 ? -1 : 0);
        if (s == 0) return {Classified::Empty};
        if (side == 0)
            side = s;
        else if (side != s)
            return {Classified::Empty};
    }
    return {side < 0 ? Classified::Left : Classified::Right};
}

double Diagram1D::root_between(int owner, const AdditiveSite& sv, double lo, double hi) const {
    // Illinois-damped regula falsi on the witnessed bisector equation.
    const AdditiveSite& so = sites_[owner];
    auto g = [&](double x) { return metric_.f(so, x) - metric_.f(sv, x); };
    double flo = g(lo), fhi = g(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    int side = 0;
    for (int it = 0; it < 100 && hi - lo > tol_; ++it) {
        double x = (flo * hi - fhi * lo) / (flo - fhi);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
        double fx = g(x);
        if ((fx > 0) == (fhi > 0)) {
            hi = x;
            fhi = fx;
            if (side == +1) flo *= 0.5;
            side = +1;
        } else {
            lo = x;
            flo = fx;
            if (side == -1) fhi *= 0.5;
            side = -1;
        }
    }
    return 0.5 * (lo + hi);
}

VoronoiCell Diagram1D::insert_site(const AdditiveSite& site) {
    VoronoiCell cell;
    if (last_delta_ > site.delta && !f_tie(site.delta, last_delta_))
        throw std::invalid_argument("sites must arrive in nondecreasing delta order");

    if (bp_.size() == 0) {
        last_delta_ = site.delta;
        sites_.push_back(site);
        live_intervals_.push_back(1);
        bp_.insert(0.0, 0);
        bp_.insert(length_, -1);
        return {0.0, length_, false, 0};
    }
    last_delta_ = std::max(last_delta_, site.delta);

    // dominated sites are discarded without being stored
    const AdditiveSite& sv = site;
    auto wins = [&](double x) { return metric_.f(sv, x) < dcur(x); };

    // Find a point inside the prospective cell: the profile minimum first,
    // then the segment ends, then median classification over the breakpoints.
    double inside_pt = 0.0;
    bool found = false;
    for (double cand : {std::min(std::max(sv.tc, 0.0), length_), 0.0, length_}) {
        if (wins(cand)) {
            inside_pt = cand;
            found = true;
            break;
        }
    }
    if (!found) {
        int a = 0, b = bp_.size() - 1;
        while (b - a > 1) {
            int mid = (a + b) / 2;
            auto [key, val] = bp_.kth(mid);
            (void)val;
            auto cls = classify(key, sv);
            if (cls.kind == Classified::Inside) {
                inside_pt = key;
                found = true;
                break;
            }
            if (cls.kind == Classified::Empty) return cell;
            if (cls.kind == Classified::Left)
                b = mid;
            else
                a = mid;
        }
        if (!found) {
            // the cell, if nonempty, lies strictly inside one interval
            auto [xa, oa] = bp_.kth(a);
            auto [xb, ob] = bp_.kth(b);
            (void)ob;
            int owner = oa && *oa >= 0 ? *oa : -1;
            if (owner < 0) return cell;
            const AdditiveSite& so = sites_[owner];
            auto g = [&](double x) { return metric_.f(so, x) - metric_.f(sv, x); };
            double lo = xa, hi = xb;
            const double gr = 0.6180339887498949;
            double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
            double g1 = g(c1), g2 = g(c2);
            for (int it = 0; it < 300 && hi - lo > tol_; ++it) {
                if (g1 < g2) {
                    lo = c1;
                    c1 = c2;
                    g1 = g2;
                    c2 = lo + gr * (hi - lo);
                    g2 = g(c2);
                } else {
                    hi = c2;
                    c2 = c1;
                    g2 = g1;
                    c1 = hi - gr * (hi - lo);
                    g1 = g(c1);
                }
            }
            double xm = 0.5 * (lo + hi);
            if (!(g(xm) > 0)) return cell;
            inside_pt = xm;
            found = true;
        }
    }

    // Left endpoint: first winning breakpoint at or below inside_pt brackets
    // the crossing with its predecessor.
    {
        int r = bp_.rank(inside_pt);  // breakpoints strictly below inside_pt
        if (r == 0) {
            cell.lo = 0.0;  // inside_pt is the left sentinel itself
        } else {
            int a = 0, b = r;  // first winning breakpoint index in [0, r)
            while (a < b) {
                int mid = (a + b) / 2;
                auto [key, val] = bp_.kth(mid);
                (void)val;
                if (wins(key))
                    b = mid;
                else
                    a = mid + 1;
            }
            if (a == 0) {
                cell.lo = 0.0;  // v wins at the left sentinel
            } else {
                auto [xprev, oprev] = bp_.kth(a - 1);
                double win_pt = inside_pt;
                if (a < r) {
                    auto [xw, ow] = bp_.kth(a);
                    (void)ow;
                    win_pt = xw;
                }
                int owner = oprev && *oprev >= 0 ? *oprev : owner_at(win_pt);
                cell.lo = root_between(owner, sv, xprev, win_pt);
            }
        }
    }
    // Right endpoint, mirrored.
    {
        int m = bp_.size();
        int r = bp_.rank(inside_pt + tol_);  // first index with key > inside_pt (approx)
        int a = r, b = m;                    // first losing index in [r, m)
        while (a < b) {
            int mid = (a + b) / 2;
            auto [key, val] = bp_.kth(mid);
            (void)val;
            if (wins(key))
                a = mid + 1;
            else
                b = mid;
        }
        if (a == m) {
            cell.hi = length_;
        } else {
            auto [xlose, olose] = bp_.kth(a);
            (void)olose;
            double win_pt = inside_pt;
            int owner_idx = a - 1;
            if (a > r) {
                auto [xw, ow] = bp_.kth(a - 1);
                (void)ow;
                win_pt = xw;
            } else {
                owner_idx = r - 1;
            }
            int owner = -1;
            if (owner_idx >= 0) {
                auto [xo, oo] = bp_.kth(owner_idx);
                (void)xo;
                owner = oo && *oo >= 0 ? *oo : -1;
            } else {
                owner = owner_at(win_pt);
            }
            if (owner < 0) {
                cell.hi = xlose;
            } else {
                cell.hi = root_between(owner, sv, win_pt, xlose);
            }
        }
    }
    cell.lo = std::max(0.0, cell.lo);
    cell.hi = std::min(length_, cell.hi);
    cell.empty = false;
    if (cell.hi - cell.lo <= tol_) return {};

    int v = (int)sites_.size();
    sites_.push_back(site);
    live_intervals_.push_back(0);
    cell.site = v;

    // Splice: owners surviving on either side of the cell.
    cell.left_owner = cell.lo > tol_ ? owner_at(cell.lo - tol_) : -1;
    int right_owner;
    {
        int idx = bp_.rank(cell.hi + tol_) - 1;
        idx = std::max(0, idx);
        auto [key, val] = bp_.kth(idx);
        (void)key;
        right_owner = val ? *val : -1;
    }
    cell.right_owner = cell.hi < length_ - tol_ ? right_owner : -1;
    std::vector<std::pair<double, int>> doomed;
    {
        double key = cell.lo - tol_;
        for (;;) {
            const double* nxt = bp_.successor(key);
            if (!nxt || *nxt >= cell.hi + tol_) break;
            int* o = bp_.find(*nxt);
            doomed.push_back({*nxt, o ? *o : -1});
            key = *nxt;
        }
    }
    for (auto& [x, o] : doomed) {
        if (o >= 0) live_intervals_[o]--;
        bp_.erase(x);
    }
    // remainder to the right keeps its owner
    const double* succ = bp_.successor(cell.hi);
    if (right_owner >= 0 && succ) live_intervals_[right_owner]++;

    bp_.insert(cell.lo, v);
    bp_.insert(cell.hi, right_owner >= 0 ? right_owner : (succ ? right_owner : -1));
    if (!succ) {
        // the cell reaches the right sentinel; re-establish it
        bp_.erase(cell.hi);
        bp_.insert(length_, -1);
        cell.hi = length_;
    }
    live_intervals_[v]++;
    return cell;
}


std::vector<std::pair<double, int>> Diagram1D::snapshot() const {
    std::vector<std::pair<double, int>> out;
    bp_.for_each([&](const double& x, const int& o) { out.push_back({x, o}); });
    return out;
}

PropagationDiagram::SpliceResult PropagationDiagram::insert(
    int owner_site, const std::vector<std::pair<int, int>>& runs) {
    SpliceResult res;
    for (auto [lo, hi] : runs) {
        if (lo > hi) continue;
        auto it = by_lo_.lower_bound(lo);
        if (it != by_lo_.begin()) {
            auto prev = std::prev(it);
            if (prev->second.hi >= lo) it = prev;
        }
        std::vector<Interval> overlaps;
        while (it != by_lo_.end() && it->second.lo <= hi) {
            overlaps.push_back(it->second);
            it = by_lo_.erase(it);
        }
        for (auto& ov : overlaps) {
            lo_of_id_.erase(ov.id);
            bool left_rem = ov.lo < lo;
            bool right_rem = ov.hi > hi;
            if (left_rem) {
                Interval piece{ov.lo, lo - 1, ov.owner_site, ov.id};
                by_lo_[piece.lo] = piece;
                lo_of_id_[piece.id] = piece.lo;
                res.changed.push_back(piece.id);
            }
            if (right_rem) {
                Interval piece{hi + 1, ov.hi, ov.owner_site, left_rem ? next_id_++ : ov.id};
                by_lo_[piece.lo] = piece;
                lo_of_id_[piece.id] = piece.lo;
                res.changed.push_back(piece.id);
            }
            if (!left_rem && !right_rem) res.removed.push_back(ov.id);
        }
        Interval mine{lo, hi, owner_site, next_id_++};
        by_lo_[mine.lo] = mine;
        lo_of_id_[mine.id] = mine.lo;
        res.inserted.push_back(mine.id);
    }
    return res;
}

const PropagationDiagram::Interval* PropagationDiagram::find(uint64_t id) const {
    auto it = lo_of_id_.find(id);
    if (it == lo_of_id_.end()) return nullptr;
    auto jt = by_lo_.find(it->second);
    return jt == by_lo_.end() ? nullptr : &jt->second;
}

std::vector<PropagationDiagram::Interval> PropagationDiagram::intervals() const {
    std::vector<Interval> out;
    out.reserve(by_lo_.size());
    for (auto& [lo, iv] : by_lo_) out.push_back(iv);
    return out;
}

std::optional<Representative> pick_representative(const SegmentMetric& metric,
                                                  const AdditiveSite& site, int lo, int hi,
                                                  const std::set<int>& active,
                                                  const std::vector<double>& abscissas) {
    auto it = active.lower_bound(lo);
    if (it == active.end() || *it > hi) return std::nullopt;
    int ya = *it;
    int za = *std::prev(active.upper_bound(hi));

    double xstar = site.tc;
    int pick;
    if (xstar <= abscissas[ya]) {
        pick = ya;
    } else if (xstar >= abscissas[za]) {
        pick = za;
    } else {
        // x* interior: the best target is one of its two active neighbors
        int rcand = za;
        for (auto k = it; k != active.end() && *k <= za; ++k) {
            if (abscissas[*k] >= xstar) {
                rcand = *k;
                break;
            }
        }
        auto rit = active.find(rcand);
        int lcand = rit == it ? rcand : *std::prev(rit);
        pick = metric.f(site, abscissas[lcand]) <= metric.f(site, abscissas[rcand]) ? lcand
                                                                                     : rcand;
    }
    return Representative{pick, metric.f(site, abscissas[pick])};
}

UnimodalCertificate certify_unimodal(const SegmentMetric& metric, const AdditiveSite& v,
                                     const AdditiveSite& v2, double z_v, double z_v2, double lo,
                                     double hi, int grid_size, double plateau_tol) {
    if (std::abs(z_v - z_v2) > 1e-9 * std::max({z_v, z_v2, 1.0}))
        throw std::invalid_argument("certify_unimodal requires equidistant sites");
    UnimodalCertificate cert;
    std::vector<double> g(grid_size);
    for (int i = 0; i < grid_size; ++i) {
        double x = lo + (hi - lo) * i / (grid_size - 1);
        g[i] = metric.f(v2, x) - metric.f(v, x);
    }
    int extrema = 0;
    int last_sign = 0;
    for (int i = 1; i < grid_size; ++i) {
        double d = g[i] - g[i - 1];
        int s = d > plateau_tol ? +1 : (d < -plateau_tol ? -1 : 0);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) ++extrema;
        last_sign = s;
    }
    cert.extrema = extrema;
    cert.certified = extrema <= 1;
    return cert;
}

}  // namespace wsp3d
