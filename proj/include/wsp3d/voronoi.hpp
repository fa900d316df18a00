// Dynamic 1-d additive Voronoi diagrams under the weighted distance metric,
// propagation diagrams, representative selection, and the unimodality
// certificates backing them.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "wsp3d/order_stat_tree.hpp"
#include "wsp3d/refraction.hpp"

namespace wsp3d {

// One site of a diagram: a settled node with its distance as additive weight.
// The metric context (cost profile toward the target segment) is shared by
// the whole diagram, since every site lies on the same Steiner segment; a
// site carries only its projection geometry.
struct AdditiveSite {
    int node = -1;       // graph node id (or any caller id)
    int entry = 0;       // tie-break rank: earlier entry wins ties
    double delta = 0.0;  // additive weight
    double tc = 0.0;     // abscissa of the closest point on the segment
    double ylat2 = 0.0;  // squared lateral offset
};

// Shared per-diagram metric: f(site, x) = delta + c(site, x).
struct SegmentMetric {
    CostProfile prof;

    double f(const AdditiveSite& s, double x) const {
        double d = x - s.tc;
        return s.delta + prof.cost(std::sqrt(d * d + s.ylat2));
    }
    double dfdx(const AdditiveSite& s, double x) const {
        double d = x - s.tc;
        double rho = std::sqrt(d * d + s.ylat2);
        return rho > 0 ? prof.dcost(rho) * d / rho : 0.0;
    }
};

struct VoronoiCell {
    double lo = 0.0, hi = 0.0;
    bool empty = true;
    int site = -1;        // index assigned to the inserted site (kept only on success)
    int left_owner = -1;  // surviving neighbors of the cell, -1 at segment ends
    int right_owner = -1;
};

// Additive Voronoi diagram on the segment [0, length], maintained under
// insertions of sites with nondecreasing additive weight. Breakpoints live in
// an order-statistics tree (rank/median/insert/delete logarithmic).
class Diagram1D {
public:
    Diagram1D() = default;
    Diagram1D(double length, double tol, SegmentMetric metric)
        : length_(length), tol_(tol), metric_(std::move(metric)) {}

    // Sites must arrive in nondecreasing delta order. Dominated sites (empty
    // cells) are not stored. Sites that later lose their whole cell stay
    // resident: surviving propagation intervals may still reference them.
    VoronoiCell insert_site(const AdditiveSite& site);

    int num_sites() const { return (int)sites_.size(); }
    int num_breakpoints() const { return bp_.size(); }
    double length() const { return length_; }
    const AdditiveSite& site(int i) const { return sites_[i]; }
    const SegmentMetric& metric() const { return metric_; }
    bool site_alive(int i) const { return live_intervals_[i] > 0; }

    // Winning site index at abscissa x (ties to earlier entry); -1 when empty.
    int winner_at(double x) const;

    // Relative position of a current breakpoint M with respect to the cell a
    // candidate site would carve: inside it, strictly left/right of it, or
    // provably empty. Constant-time in evaluations of the distance function.
    enum class PointSide { Inside, Left, Right, Empty };
    PointSide compare_at(double M, const AdditiveSite& candidate) const;
    // Owner of the interval containing x (no tie handling).
    int owner_at(double x) const;

    // Breakpoints in order, with the owner of the interval to the right.
    std::vector<std::pair<double, int>> snapshot() const;

private:
    struct Classified {
        enum Kind { Inside, Left, Right, Empty } kind;
    };
    Classified classify(double M, const AdditiveSite& sv) const;
    double root_between(int owner, const AdditiveSite& sv, double lo, double hi) const;
    double dcur(double x) const;

    double length_ = 0.0;
    double tol_ = 1e-12;
    double last_delta_ = -kInf;
    SegmentMetric metric_;
    std::vector<AdditiveSite> sites_;
    std::vector<int> live_intervals_;
    // breakpoint -> owner of the interval to its right (-1 for the sentinel)
    OrderStatTree<double, int> bp_;
};

// Maximal Steiner intervals of the propagation sets on one target segment,
// keyed by node index ranges. Interval identities are stable across
// truncations so representative bookkeeping can follow them.
class PropagationDiagram {
public:
    struct Interval {
        int lo = 0, hi = 0;  // inclusive node-index range
        int owner_site = -1;
        uint64_t id = 0;
    };

    struct SpliceResult {
        std::vector<uint64_t> inserted;  // ids of the new owner's intervals
        std::vector<uint64_t> changed;   // surviving intervals that shrank/split
        std::vector<uint64_t> removed;   // intervals deleted outright
    };

    // Insert the (<=7) maximal node-index intervals of a new owner; older
    // overlapping intervals are truncated or removed.
    SpliceResult insert(int owner_site, const std::vector<std::pair<int, int>>& runs);
    // Owners losing their last interval are reported through this hook-free
    // query: number of intervals currently owned by a site.
    int intervals_of(int site) const;

    const Interval* find(uint64_t id) const;
    size_t size() const { return by_lo_.size(); }
    std::vector<Interval> intervals() const;

private:
    std::map<int, Interval> by_lo_;
    std::map<uint64_t, int> lo_of_id_;
    uint64_t next_id_ = 1;
};

// Representative of a site within one propagation interval: the best
// still-unsettled target, found near the profile minimum by convexity.
struct Representative {
    int target_index = -1;  // node index on the segment
    double key = 0.0;
};
std::optional<Representative> pick_representative(const SegmentMetric& metric,
                                                  const AdditiveSite& site, int lo, int hi,
                                                  const std::set<int>& active,
                                                  const std::vector<double>& abscissas);

// Unimodality certificate: g(x) = c(v',x) - c(v,x) sampled on a grid has at
// most one strict local extremum (after plateau filtering). Requires the two
// sites at equal distance from the refracting plane.
struct UnimodalCertificate {
    bool certified = false;
    int extrema = 0;
};
UnimodalCertificate certify_unimodal(const SegmentMetric& metric, const AdditiveSite& v,
                                     const AdditiveSite& v2, double z_v, double z_v2, double lo,
                                     double hi, int grid_size, double plateau_tol);

}  // namespace wsp3d
