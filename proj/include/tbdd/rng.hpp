#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace tbdd {

// Deterministic, splittable generator: xoshiro256** seeded via splitmix64
// from (seed, FNV-1a(stream_label)). Identical (seed, label) pairs produce
// identical streams on every platform; distinct labels give independent
// streams under the same seed. All derived draws (uniform doubles, bounded
// ints, normals) are implemented here with fixed bit-level semantics instead
// of <random> distributions, whose output is implementation-defined.
class DeterministicRng {
 public:
  DeterministicRng(uint64_t seed, std::string_view stream_label);

  uint64_t next_u64();

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform01();

  // Uniform integer in [0, bound), bound >= 1. Rejection sampling, unbiased.
  uint64_t uniform_below(uint64_t bound);

  // Box-Muller; consumes exactly two uniforms per call.
  double normal(double mean, double sd);

  // Fisher-Yates over indices [0, n).
  std::vector<int> permutation(int n);

  // Child stream scoped under this stream's label ("<label>/<suffix>").
  DeterministicRng split(std::string_view suffix) const;

  uint64_t seed() const { return seed_; }
  const std::string& label() const { return label_; }

 private:
  uint64_t seed_;
  std::string label_;
  std::array<uint64_t, 4> state_;
};

}  // namespace tbdd
