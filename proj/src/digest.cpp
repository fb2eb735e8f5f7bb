#include "mlg/digest.hpp"

#include <bit>

namespace mlg {

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;

inline std::uint64_t fnv1a_u64(std::uint64_t hash, std::uint64_t word) {
    for (int i = 0; i < 8; ++i) {
        hash ^= (word >> (8 * i)) & 0xff;
        hash *= kFnvPrime;
    }
    return hash;
}

inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed) ^ mix64(stream + 0x517cc1b727220a95ull));
}

std::uint64_t digest(const Matrix& m) {
    std::uint64_t hash = kFnvOffset;
    hash = fnv1a_u64(hash, static_cast<std::uint64_t>(m.rows()));
    hash = fnv1a_u64(hash, static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            hash = fnv1a_u64(hash, std::bit_cast<std::uint64_t>(m(i, j)));
        }
    }
    return hash;
}

std::uint64_t digest(std::span<const int> labels) {
    std::uint64_t hash = kFnvOffset;
    hash = fnv1a_u64(hash, labels.size());
    for (int v : labels) hash = fnv1a_u64(hash, static_cast<std::uint64_t>(v));
    return hash;
}

}  // namespace mlg
