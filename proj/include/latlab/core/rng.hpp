#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "latlab/core/errors.hpp"

namespace latlab {

// 64-bit FNV-1a. Used for seed-stream derivation and content checksums.
constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Deterministic RNG with hand-rolled distributions so that sequences do not
// depend on the standard library implementation. Every consumer derives its
// own stream from (global seed, stream name, index); nothing shares state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t u64() { return eng_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }

  // Inclusive bounds, rejection sampling to stay unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) throw Error("uniform_int: lo > hi");
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(u64());  // full 64-bit range
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do { x = u64(); } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % span);
  }

  // Standard normal via Box-Muller (cached spare).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 1e-300) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // Fisher-Yates; std::shuffle is implementation-defined, this is not.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Index into a weight vector proportionally to the (non-negative) weights.
  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw Error("categorical: negative weight");
      total += w;
    }
    if (total <= 0.0) throw Error("categorical: all weights zero");
    double x = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (x < acc) return i;
    }
    return weights.size() - 1;
  }

  // k distinct indices drawn from [0, n), in random order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    if (k > n) throw Error("sample_without_replacement: k > n");
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle(idx);
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Named-stream derivation: one global seed fans out into independent streams.
inline std::uint64_t mix_seed(std::uint64_t global_seed, std::string_view stream,
                              std::uint64_t index = 0) {
  std::uint64_t s = global_seed ^ (fnv1a64(stream) + 0x632be59bd9b4e019ull);
  splitmix64(s);
  s ^= index * 0xd6e8feb86659fd93ull;
  std::uint64_t out = splitmix64(s);
  return out ? out : 0x2545f4914f6cdd1dull;
}

inline Rng derive_rng(std::uint64_t global_seed, std::string_view stream,
                      std::uint64_t index = 0) {
  return Rng(mix_seed(global_seed, stream, index));
}

}  // namespace latlab
