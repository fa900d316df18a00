// Deterministic sample meshes shared by tests, the acceptance suite, and the
// bundled data files.
#pragma once

#include <cstdint>

#include "wsp3d/mesh.hpp"

namespace wsp3d::fixtures {

// Regular unit tetrahedron.
WeightedTetMesh single_tet(double weight = 1.0);
// Two regular tets sharing a face (the second is the mirror image).
WeightedTetMesh two_tets(double w0 = 2.0, double w1 = 3.0);
// Bipyramid over a k-ring: 2k tets sharing the ring fan; jittered geometry and
// weights when seed != 0.
WeightedTetMesh bipyramid(int k, uint32_t seed = 0, double w_lo = 1.0, double w_hi = 1.0);
// nx x ny x nz grid of unit cubes, each split into six tets (Freudenthal);
// conforming across cubes. Random weights in [w_lo, w_hi] when seed != 0.
WeightedTetMesh kuhn_grid(int nx, int ny, int nz, uint32_t seed = 0, double w_lo = 1.0,
                          double w_hi = 1.0);
// 50-tet mesh: a 2x2x2 Kuhn grid with two tets glued onto one boundary face.
WeightedTetMesh fifty_tets(uint32_t seed = 0, double w_lo = 1.0, double w_hi = 1.0);

// Simple deterministic generator for fixture jitter.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed * 2654435761u + 1442695040888963407ULL) {}
    uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (double)(next() >> 11) / 9007199254740992.0;
    }
};

}  // namespace wsp3d::fixtures
