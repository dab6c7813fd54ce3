#include "tbdd/rng.hpp"

#include <cmath>
#include <numbers>

namespace tbdd {
namespace {

uint64_t splitmix64(uint64_t& x) {
  x += 0x9e3779b97f4a7c15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

DeterministicRng::DeterministicRng(uint64_t seed, std::string_view stream_label)
    : seed_(seed), label_(stream_label) {
  uint64_t sm = seed ^ fnv1a(stream_label);
  for (auto& word : state_) word = splitmix64(sm);
}

uint64_t DeterministicRng::next_u64() {
  // xoshiro256** step (Blackman-Vigna).
  uint64_t result = rotl(state_[1] * 5, 7) * 9;
  uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double DeterministicRng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

uint64_t DeterministicRng::uniform_below(uint64_t bound) {
  if (bound <= 1) return 0;
  uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

double DeterministicRng::normal(double mean, double sd) {
  double u1 = uniform01();
  double u2 = uniform01();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double mag = std::sqrt(-2.0 * std::log(u1));
  return mean + sd * mag * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<int> DeterministicRng::permutation(int n) {
  std::vector<int> p(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<size_t>(i)] = i;
  for (int i = n - 1; i > 0; --i) {
    auto j = static_cast<size_t>(uniform_below(static_cast<uint64_t>(i) + 1));
    std::swap(p[static_cast<size_t>(i)], p[j]);
  }
  return p;
}

DeterministicRng DeterministicRng::split(std::string_view suffix) const {
  return DeterministicRng(seed_, label_ + "/" + std::string(suffix));
}

}  // namespace tbdd
