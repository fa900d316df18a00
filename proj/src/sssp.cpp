#include "wsp3d/sssp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>
#include <unordered_map>

namespace wsp3d {

namespace {

struct QEntry {
    double key;
    uint64_t seq;
    int kind;  // 0 representative, 1 chain, 2 source
    int site;  // predecessor node
    int triple;
    uint64_t iv;  // propagation interval id (kind 0)
    int target;
};
struct QCmp {
    bool operator()(const QEntry& a, const QEntry& b) const {
        if (a.key != b.key) return a.key > b.key;
        return a.seq > b.seq;
    }
};

double now_seconds() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

}  // namespace

SolveResult dijkstra_baseline(const ApproxGraph& g, int source) {
    double t0 = now_seconds();
    int n = (int)g.nodes().size();
    if (source < 0 || source >= n) throw std::invalid_argument("source out of range");

    SolveResult res;
    res.source = source;
    res.dist.assign(n, kInf);
    res.pred.assign(n, -1);
    res.pred_triple.assign(n, -1);

    std::vector<char> settled(n, 0);
    std::priority_queue<QEntry, std::vector<QEntry>, QCmp> pq;
    uint64_t seq = 0;
    res.dist[source] = 0.0;
    pq.push({0.0, seq++, 2, -1, -1, 0, source});

    while (!pq.empty()) {
        QEntry e = pq.top();
        pq.pop();
        int u = e.target;
        if (settled[u] || e.key > res.dist[u]) continue;
        settled[u] = 1;
        res.stats.settled++;

        auto relax = [&](int v, double cand, int triple) {
            res.stats.relaxations++;
            if (settled[v] || cand >= res.dist[v]) return;
            res.dist[v] = cand;
            res.pred[v] = u;
            res.pred_triple[v] = triple;
            pq.push({cand, seq++, 1, u, triple, 0, v});
        };

        for (auto [s, idx] : g.node_segments(u)) {
            const GraphSegment& seg = g.segments()[s];
            if (seg.kind == GraphSegment::Kind::MeshEdge) {
                for (int d : {-1, +1}) {
                    int j = idx + d;
                    if (j < 0 || j >= (int)seg.nodes.size()) continue;
                    double w = seg.weight * std::abs(seg.t[j] - seg.t[idx]);
                    relax(seg.nodes[j], res.dist[u] + w, -2);
                }
            }
            for (int tr : g.triples_from_segment(s)) {
                TripleScan scan = g.make_scan(u, tr);
                const GraphSegment& tgt = *scan.tgt;
                for (int i = 0; i < (int)tgt.nodes.size(); ++i) {
                    int v = tgt.nodes[i];
                    if (v == u) continue;
                    res.stats.relaxations++;
                    if (settled[v]) continue;
                    if (!scan.admissible(g.nodes()[v].pos, tgt.t[i])) continue;
                    double cand = res.dist[u] + scan.cost_at(tgt.t[i]);
                    if (cand < res.dist[v]) {
                        res.dist[v] = cand;
                        res.pred[v] = u;
                        res.pred_triple[v] = tr;
                        pq.push({cand, seq++, 0, u, tr, 0, v});
                    }
                }
            }
        }
    }
    res.stats.wall_seconds = now_seconds() - t0;
    return res;
}

namespace {

struct RepInfo {
    int site_node;
    int site_index;  // index in the diagram
    int target;      // graph node id
    double key;
    uint64_t seq;
};

struct IdHash {
    size_t operator()(uint64_t v) const { return (size_t)(v * 0x9e3779b97f4a7c15ULL); }
};

struct TripleState {
    Diagram1D diagram;
    PropagationDiagram prop;
    std::unordered_map<uint64_t, RepInfo, IdHash> reps;  // by propagation interval id
};

class PrunedSolver {
public:
    PrunedSolver(const ApproxGraph& g, int source) : g_(g), source_(source) {
        n_ = (int)g.nodes().size();
        res_.source = source;
        res_.dist.assign(n_, kInf);
        res_.pred.assign(n_, -1);
        res_.pred_triple.assign(n_, -1);
        settled_.assign(n_, 0);
        best_chain_.assign(n_, kInf);
        rev_.resize(n_);
        tstate_.resize(g.triples().size());
        active_.resize(g.segments().size());
        for (int s = 0; s < (int)g.segments().size(); ++s)
            for (int i = 0; i < (int)g.segments()[s].nodes.size(); ++i)
                active_[s].insert(i);
        xtol_ = 1e-12 * std::max(g.scale(), 1e-300);
    }

    SolveResult run() {
        double t0 = now_seconds();
        settle(source_, 0.0, -1, -1);
        while (!pq_.empty()) {
            if (pq_.size() > compact_at_) compact_queue();
            QEntry e = pq_.top();
            pq_.pop();
            if (e.kind == 0) {
                TripleState* ts = tstate_[e.triple].get();
                if (!ts) continue;
                auto it = ts->reps.find(e.iv);
                if (it == ts->reps.end() || it->second.seq != e.seq) continue;
                int v = it->second.target;
                if (settled_[v]) continue;
                settle(v, e.key, e.site, e.triple);
            } else {
                int v = e.target;
                if (settled_[v] || e.key > best_chain_[v]) continue;
                settle(v, e.key, e.site, -2);
            }
        }
        res_.stats.wall_seconds = now_seconds() - t0;
        return std::move(res_);
    }

private:
    void settle(int v, double key, int pred, int pred_triple) {
        settled_[v] = 1;
        res_.dist[v] = key;
        res_.pred[v] = pred;
        res_.pred_triple[v] = pred_triple;
        res_.stats.settled++;
        int order = entry_counter_++;

        for (auto [s, idx] : g_.node_segments(v)) active_[s].erase(idx);

        // representatives that pointed at v must move (their target settled)
        {
            std::vector<std::pair<int, uint64_t>> hooks = std::move(rev_[v]);
            rev_[v].clear();
            for (auto& hk : hooks) {
                TripleState* ts = tstate_[hk.first].get();
                if (!ts) continue;
                auto it = ts->reps.find(hk.second);
                if (it == ts->reps.end() || it->second.target != v) continue;
                recompute_rep(hk.first, hk.second);
            }
        }

        for (auto [s, idx] : g_.node_segments(v)) {
            const GraphSegment& seg = g_.segments()[s];
            if (seg.kind == GraphSegment::Kind::MeshEdge) {
                for (int d : {-1, +1}) {
                    int j = idx + d;
                    if (j < 0 || j >= (int)seg.nodes.size()) continue;
                    int w_node = seg.nodes[j];
                    if (settled_[w_node]) continue;
                    double cand = key + seg.weight * std::abs(seg.t[j] - seg.t[idx]);
                    if (cand < best_chain_[w_node]) {
                        best_chain_[w_node] = cand;
                        pq_.push({cand, seq_++, 1, v, -2, 0, w_node});
                    }
                }
            }
            for (int tr : g_.triples_from_segment(s)) insert_into_triple(v, key, order, tr);
        }
    }

    void insert_into_triple(int v, double delta, int order, int tr) {
        const Triple& t = g_.triples()[tr];
        const GraphSegment& tgt = g_.segments()[t.seg_tgt];
        TripleScan proto = g_.make_scan(v, tr);
        if (!tstate_[tr]) {
            tstate_[tr] = std::make_unique<TripleState>();
            tstate_[tr]->diagram = Diagram1D(tgt.length, xtol_, SegmentMetric{proto.prof});
        }
        TripleState& ts = *tstate_[tr];

        TripleScan& scan = proto;
        AdditiveSite site;
        site.node = v;
        site.delta = delta;
        site.entry = order;
        site.tc = scan.tc;
        site.ylat2 = scan.ylat2;

        VoronoiCell cell = ts.diagram.insert_site(site);
        res_.stats.diagram_inserts++;
        if (cell.empty) return;

        // node-index window of the cell; boundary nodes are compared against
        // the surviving neighbor owners directly (the new site is the latest
        // entry, so it loses all ties)
        const auto& tv = tgt.t;
        int lo = (int)(std::lower_bound(tv.begin(), tv.end(), cell.lo - xtol_) - tv.begin());
        int hi = (int)(std::upper_bound(tv.begin(), tv.end(), cell.hi + xtol_) - tv.begin()) - 1;
        const AdditiveSite& sv = ts.diagram.site(cell.site);
        const SegmentMetric& metric = ts.diagram.metric();
        auto beats = [&](double t, int other) {
            if (other < 0) return true;
            return metric.f(sv, t) < metric.f(ts.diagram.site(other), t);
        };
        while (lo <= hi && tv[lo] < cell.lo + xtol_ && !beats(tv[lo], cell.left_owner)) ++lo;
        while (hi >= lo && tv[hi] > cell.hi - xtol_ && !beats(tv[hi], cell.right_owner)) --hi;
        if (lo > hi) return;

        // adjacency runs within the cell window
        std::vector<std::pair<int, int>> runs;
        int run_start = -1;
        for (int i = lo; i <= hi; ++i) {
            bool ok = tgt.nodes[i] != v &&
                      scan.admissible(g_.nodes()[tgt.nodes[i]].pos, tv[i]);
            res_.stats.relaxations++;
            if (ok && run_start < 0) run_start = i;
            if (!ok && run_start >= 0) {
                runs.push_back({run_start, i - 1});
                run_start = -1;
            }
        }
        if (run_start >= 0) runs.push_back({run_start, hi});
        if (runs.empty()) return;

        long before = res_.stats.representatives;
        auto splice = ts.prop.insert(cell.site, runs);
        for (uint64_t id : splice.removed) invalidate_rep(tr, id);
        for (uint64_t id : splice.changed) refresh_shrunk(tr, id);
        for (uint64_t id : splice.inserted) recompute_rep(tr, id);
        res_.stats.max_reps_per_insert =
            std::max(res_.stats.max_reps_per_insert, res_.stats.representatives - before);
    }

    void invalidate_rep(int tr, uint64_t id) { tstate_[tr]->reps.erase(id); }

    void refresh_shrunk(int tr, uint64_t id) {
        TripleState& ts = *tstate_[tr];
        auto it = ts.reps.find(id);
        const auto* iv = ts.prop.find(id);
        if (!iv) {
            if (it != ts.reps.end()) ts.reps.erase(it);
            return;
        }
        if (it != ts.reps.end()) {
            // current representative still inside the shrunken interval: keep
            int ti = it->second.target;
            for (auto [s, idx] : g_.node_segments(ti))
                if (s == g_.triples()[tr].seg_tgt && idx >= iv->lo && idx <= iv->hi) return;
        }
        recompute_rep(tr, id);
    }

    void recompute_rep(int tr, uint64_t id) {
        TripleState& ts = *tstate_[tr];
        const auto* iv = ts.prop.find(id);
        if (!iv) {
            ts.reps.erase(id);
            return;
        }
        const Triple& t = g_.triples()[tr];
        const GraphSegment& tgt = g_.segments()[t.seg_tgt];
        const AdditiveSite& site = ts.diagram.site(iv->owner_site);
        res_.stats.representatives++;
        auto rep = pick_representative(ts.diagram.metric(), site, iv->lo, iv->hi,
                                       active_[t.seg_tgt], tgt.t);
        if (!rep) {
            ts.reps.erase(id);
            return;
        }
        int target = tgt.nodes[rep->target_index];
        RepInfo info{site.node, iv->owner_site, target, rep->key, seq_++};
        ts.reps[id] = info;
        rev_[target].push_back({tr, id});
        pq_.push({info.key, info.seq, 0, site.node, tr, id, target});
    }

    bool entry_live(const QEntry& e) const {
        if (e.kind == 1) return !settled_[e.target] && e.key <= best_chain_[e.target];
        const TripleState* ts = tstate_[e.triple].get();
        if (!ts) return false;
        auto it = ts->reps.find(e.iv);
        return it != ts->reps.end() && it->second.seq == e.seq && !settled_[it->second.target];
    }

    // stale representative entries accumulate; rebuild the queue when they
    // dominate, raising the trigger if compaction stops paying off
    void compact_queue() {
        std::vector<QEntry> keep;
        keep.reserve(pq_.size() / 4);
        while (!pq_.empty()) {
            if (entry_live(pq_.top())) keep.push_back(pq_.top());
            pq_.pop();
        }
        if (keep.size() > compact_at_ / 2) compact_at_ *= 2;
        pq_ = std::priority_queue<QEntry, std::vector<QEntry>, QCmp>(QCmp{}, std::move(keep));
    }

    const ApproxGraph& g_;
    int source_, n_;
    double xtol_;
    SolveResult res_;
    std::vector<char> settled_;
    std::vector<std::set<int>> active_;
    std::vector<std::unique_ptr<TripleState>> tstate_;
    std::vector<std::vector<std::pair<int, uint64_t>>> rev_;
    std::vector<double> best_chain_;
    std::priority_queue<QEntry, std::vector<QEntry>, QCmp> pq_;
    size_t compact_at_ = 1u << 22;
    uint64_t seq_ = 0;
    int entry_counter_ = 0;
};

}  // namespace

SolveResult sssp_pruned(const ApproxGraph& g, int source) {
    if (source < 0 || source >= (int)g.nodes().size())
        throw std::invalid_argument("source out of range");
    return PrunedSolver(g, source).run();
}

GeodesicPath extract_path(const ApproxGraph& g, const SolveResult& res, int target) {
    if (target < 0 || target >= (int)res.dist.size())
        throw std::invalid_argument("target out of range");
    if (!std::isfinite(res.dist[target])) throw std::runtime_error("target unreachable");

    std::vector<int> chain;
    for (int u = target; u >= 0; u = res.pred[u]) chain.push_back(u);
    std::reverse(chain.begin(), chain.end());

    GeodesicPath path;
    path.points.push_back(g.nodes()[chain[0]].pos);
    for (size_t k = 0; k + 1 < chain.size(); ++k) {
        int u = chain[k], v = chain[k + 1];
        int tr = res.pred_triple[v];
        Vec3 vpos = g.nodes()[v].pos;
        if (tr == -2) {
            // edge-using hop along a shared mesh edge segment
            double w = kInf;
            for (auto [s, idx] : g.node_segments(u)) {
                const GraphSegment& seg = g.segments()[s];
                if (seg.kind != GraphSegment::Kind::MeshEdge) continue;
                for (int j : {idx - 1, idx + 1})
                    if (j >= 0 && j < (int)seg.nodes.size() && seg.nodes[j] == v)
                        w = std::min(w, seg.weight);
            }
            path.points.push_back(vpos);
            path.seg_weights.push_back(w);
            path.seg_kinds.push_back(SegKind::EdgeUsing);
            continue;
        }
        TripleScan scan = g.make_scan(u, tr);
        const GraphSegment& tgt = *scan.tgt;
        double tv = kInf;
        for (int i = 0; i < (int)tgt.nodes.size(); ++i)
            if (tgt.nodes[i] == v) tv = tgt.t[i];
        std::array<Vec3, 2> bends;
        int nb = scan.bend_points(vpos, tv, bends);
        bool face_run = scan.prof.face_using(scan.rho(tv));

        std::vector<double> ws;
        std::vector<SegKind> kinds;
        if (nb == 2) {
            ws = {scan.prof.w_src(), g.triples()[tr].w_face, scan.prof.w_tgt()};
            kinds = {SegKind::CellCrossing, SegKind::FaceUsing, SegKind::CellCrossing};
        } else if (nb == 1) {
            if (face_run && scan.prof.z_src() == 0.0) {
                ws = {g.triples()[tr].w_face, scan.prof.w_tgt()};
                kinds = {SegKind::FaceUsing, SegKind::CellCrossing};
            } else if (face_run && scan.prof.z_tgt() == 0.0) {
                ws = {scan.prof.w_src(), g.triples()[tr].w_face};
                kinds = {SegKind::CellCrossing, SegKind::FaceUsing};
            } else {
                ws = {scan.prof.w_src(), scan.prof.w_tgt()};
                kinds = {SegKind::CellCrossing, SegKind::CellCrossing};
            }
        } else {
            double w = scan.prof.z_src() == 0.0 ? scan.prof.w_tgt() : scan.prof.w_src();
            ws = {w};
            kinds = {SegKind::CellCrossing};
        }
        for (int i = 0; i < nb; ++i) path.points.push_back(bends[i]);
        path.points.push_back(vpos);
        for (size_t i = 0; i < ws.size(); ++i) {
            path.seg_weights.push_back(ws[i]);
            path.seg_kinds.push_back(kinds[i]);
        }
    }
    path.cost = res.dist[target];
    return path;
}

EpsilonAuditReport epsilon_audit(const WeightedTetMesh& mesh, int source_vertex,
                                 double eps_coarse, double eps_fine) {
    if (!(eps_fine <= eps_coarse / 4.0))
        throw std::invalid_argument("epsilon_audit requires eps_fine <= eps_coarse/4");
    EpsilonAuditReport rep;
    rep.eps_coarse = eps_coarse;
    rep.eps_fine = eps_fine;

    DiscretizationParams pc, pf;
    pc.epsilon = eps_coarse;
    pf.epsilon = eps_fine;
    Discretization dc(mesh, pc), df(mesh, pf);
    ApproxGraph gc(mesh, dc), gf(mesh, df);
    SolveResult rc = sssp_pruned(gc, source_vertex);
    SolveResult rf = sssp_pruned(gf, source_vertex);

    rep.ok = true;
    for (int v = 0; v < (int)mesh.vertices().size(); ++v) {
        if (v == source_vertex) continue;
        EpsilonAuditRow row;
        row.vertex = v;
        row.d_coarse = rc.dist[v];
        row.d_fine = rf.dist[v];
        row.ratio = row.d_fine > 0 ? row.d_coarse / row.d_fine : 1.0;
        rep.max_ratio = std::max(rep.max_ratio, row.ratio);
        if (!(row.d_coarse <= (1.0 + eps_coarse) * row.d_fine * (1.0 + 1e-12))) rep.ok = false;
        // refinement never worsens a distance
        if (!(row.d_fine <= row.d_coarse * (1.0 + 1e-9))) rep.ok = false;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace wsp3d
