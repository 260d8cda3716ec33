#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace modeda {

// 64-bit FNV-1a. Used for per-document seed derivation and file digests;
// must stay bit-stable, do not swap for std::hash.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Seed for the RNG that owns one document's augmentations. XOR with the id
// hash keeps streams independent of corpus order and worker scheduling.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view id) {
  return seed ^ fnv1a64(id);
}

// All randomness in the library flows through this wrapper. The draw
// primitives are hand-rolled on top of the mt19937_64 word stream because
// std::uniform_*_distribution and std::shuffle are implementation-defined;
// identical seeds must give identical sequences on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n). n must be positive. Modulo bias is ~n/2^64, treated
  // as negligible; determinism is the requirement here, not perfection.
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(next_u64() % static_cast<std::uint64_t>(n));
  }

  // Uniform in [0, 1), 53 random bits.
  double uniform_real() {
    return static_cast<double>(next_u64() >> 11) * (1.0 / 9007199254740992.0);
  }

  // Fisher-Yates, one uniform_index per step.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct indices from [0, n) in draw order; k > n returns all n.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k) {
    if (k > n) k = n;
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + uniform_index(n - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace modeda
