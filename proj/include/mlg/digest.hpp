#pragma once

#include <cstdint>
#include <span>

#include "mlg/types.hpp"

namespace mlg {

// Deterministic sub-seed for an independent stream (trial index, restart
// index, ...); splitmix64 of the pair.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

// FNV-1a over little-endian bytes; used for run-summary checksums.
std::uint64_t digest(const Matrix& m);
std::uint64_t digest(std::span<const int> labels);

}  // namespace mlg
