#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace cbwk {

// SplitMix64 finalizer, used to whiten seeds and derive child streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Derives an independent child seed from a base seed and a list of stream
// ids (e.g. {sweep index, replication index}). Each stream is reproducible
// on its own, so replication k never depends on replication k-1.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> streams) {
  std::uint64_t s = splitmix64(base);
  for (std::uint64_t v : streams) s = splitmix64(s ^ splitmix64(v));
  return s;
}

// Project-wide generator. std::mt19937_64 has a fully specified output
// sequence, and uniform doubles are built from the raw 64-bit output below,
// so draws are bit-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cbwk
