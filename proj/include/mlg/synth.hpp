#pragma once

#include <cstdint>
#include <vector>

#include "mlg/types.hpp"

namespace mlg {

struct SynthSpec {
    int k = 3;
    int d = 3;
    int ambient_dim = 30;
    int points_per_cluster = 50;
    double noise_sigma = 0.0;
    int num_layers = 3;
    std::uint64_t seed = 0;
};

struct SynthData {
    LayerStack stack;
    std::vector<int> labels;
};

// Union-of-subspaces generator. Layer 0: per-cluster random orthonormal
// d-dim bases, points = basis * standard-normal coefficients + isotropic
// noise, columns normalized to unit norm. Layers 1.. apply an independent
// random orthogonal map to layer 0's clean points and re-add fresh noise of
// the same scale. Basis sets whose smallest pairwise principal angle is
// below 0.1 rad are redrawn, so cluster separability is guaranteed.
// Deterministic under the seed.
SynthData generate(const SynthSpec& spec);

}  // namespace mlg
