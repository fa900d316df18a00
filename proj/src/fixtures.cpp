#include "wsp3d/fixtures.hpp"

#include <cmath>

namespace wsp3d::fixtures {

namespace {
const double kSqrt3 = std::sqrt(3.0);
const double kHeight = std::sqrt(2.0 / 3.0);
}  // namespace

WeightedTetMesh single_tet(double weight) {
    std::vector<Vec3> v = {{0, 0, 0},
                           {1, 0, 0},
                           {0.5, kSqrt3 / 2.0, 0},
                           {0.5, kSqrt3 / 6.0, kHeight}};
    std::vector<Tet> t = {{{0, 1, 2, 3}, weight}};
    return WeightedTetMesh(std::move(v), std::move(t));
}

WeightedTetMesh two_tets(double w0, double w1) {
    std::vector<Vec3> v = {{0, 0, 0},
                           {1, 0, 0},
                           {0.5, kSqrt3 / 2.0, 0},
                           {0.5, kSqrt3 / 6.0, kHeight},
                           {0.5, kSqrt3 / 6.0, -kHeight}};
    std::vector<Tet> t = {{{0, 1, 2, 3}, w0}, {{0, 1, 2, 4}, w1}};
    return WeightedTetMesh(std::move(v), std::move(t));
}

WeightedTetMesh bipyramid(int k, uint32_t seed, double w_lo, double w_hi) {
    Rng rng(seed + 1);
    bool jitter = seed != 0;
    std::vector<Vec3> v;
    v.push_back({0, 0, 0});  // ring center
    for (int i = 0; i < k; ++i) {
        double th = 2.0 * M_PI * i / k + (jitter ? rng.uniform(-0.2, 0.2) * M_PI / k : 0.0);
        double r = jitter ? rng.uniform(0.85, 1.15) : 1.0;
        double z = jitter ? rng.uniform(-0.12, 0.12) : 0.0;
        v.push_back({r * std::cos(th), r * std::sin(th), z});
    }
    double ht = jitter ? rng.uniform(0.7, 1.1) : 0.9;
    double hb = jitter ? rng.uniform(0.7, 1.1) : 0.9;
    int top = (int)v.size();
    v.push_back({0, 0, ht});
    int bot = (int)v.size();
    v.push_back({0, 0, -hb});

    std::vector<Tet> t;
    for (int i = 0; i < k; ++i) {
        int a = 1 + i, b = 1 + (i + 1) % k;
        double wt = seed ? rng.uniform(w_lo, w_hi) : w_lo;
        double wb = seed ? rng.uniform(w_lo, w_hi) : w_lo;
        t.push_back({{0, a, b, top}, wt});
        t.push_back({{0, a, b, bot}, wb});
    }
    return WeightedTetMesh(std::move(v), std::move(t));
}

WeightedTetMesh kuhn_grid(int nx, int ny, int nz, uint32_t seed, double w_lo, double w_hi) {
    Rng rng(seed + 7);
    auto vid = [&](int x, int y, int z) { return (x * (ny + 1) + y) * (nz + 1) + z; };
    std::vector<Vec3> v((nx + 1) * (ny + 1) * (nz + 1));
    for (int x = 0; x <= nx; ++x)
        for (int y = 0; y <= ny; ++y)
            for (int z = 0; z <= nz; ++z) v[vid(x, y, z)] = {(double)x, (double)y, (double)z};

    // six tets per cube around the main diagonal, one per axis permutation
    static const int kPerm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::vector<Tet> t;
    for (int x = 0; x < nx; ++x)
        for (int y = 0; y < ny; ++y)
            for (int z = 0; z < nz; ++z) {
                for (auto& p : kPerm) {
                    int c[3] = {x, y, z};
                    Tet tet;
                    tet.v[0] = vid(c[0], c[1], c[2]);
                    for (int s = 0; s < 3; ++s) {
                        c[p[s]] += 1;
                        tet.v[s + 1] = vid(c[0], c[1], c[2]);
                    }
                    tet.weight = seed ? rng.uniform(w_lo, w_hi) : w_lo;
                    t.push_back(tet);
                }
            }
    return WeightedTetMesh(std::move(v), std::move(t));
}

WeightedTetMesh fifty_tets(uint32_t seed, double w_lo, double w_hi) {
    WeightedTetMesh grid = kuhn_grid(2, 2, 2, seed, w_lo, w_hi);
    std::vector<Vec3> v = grid.vertices();
    std::vector<Tet> t = grid.tets();
    Rng rng(seed + 13);

    // the x = 0 face of the corner cube is split by the diagonal
    // (0,0,0)-(0,1,1); glue one tet onto each half, sharing the outside apex
    auto find = [&](const Vec3& p) {
        for (int i = 0; i < (int)v.size(); ++i)
            if (dist(v[i], p) < 1e-9) return i;
        return -1;
    };
    int a = find({0, 0, 0}), b = find({0, 1, 1}), c1 = find({0, 1, 0}), c2 = find({0, 0, 1});
    int apex = (int)v.size();
    v.push_back({-0.8, 0.5, 0.5});
    double w1 = seed ? rng.uniform(w_lo, w_hi) : w_lo;
    double w2 = seed ? rng.uniform(w_lo, w_hi) : w_lo;
    t.push_back({{a, b, c1, apex}, w1});
    t.push_back({{a, b, c2, apex}, w2});
    return WeightedTetMesh(std::move(v), std::move(t));
}

}  // namespace wsp3d::fixtures
