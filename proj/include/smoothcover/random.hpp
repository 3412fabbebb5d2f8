#pragma once

#include <cstdint>
#include <string_view>

namespace smoothcover {

/// splitmix64 finalizer; used both for stream derivation and as the generator step.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a over a purpose tag, so stream ids can be named ("subspace", "shift", ...).
constexpr std::uint64_t tag_hash(std::string_view tag) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Deterministic random stream fully determined by (seed, stream id).
///
/// Streams for parallel work are derived by counter-based splitting: `child(i)`
/// depends only on the parent's identity and `i`, never on how many numbers the
/// parent has produced, so results do not depend on scheduling.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), id_(stream_id), state_(mix64(seed ^ mix64(stream_id + 0x632be59bd9b4e019ULL))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t id() const { return id_; }

  Stream child(std::uint64_t index) const { return Stream(seed_, mix64(id_ ^ mix64(index))); }
  Stream child(std::uint64_t index, std::string_view purpose) const {
    return Stream(seed_, mix64(id_ ^ mix64(index) ^ tag_hash(purpose)));
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound), bound > 0; unbiased (rejection on the top range).
  std::uint64_t uniform_below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t seed_;
  std::uint64_t id_;
  std::uint64_t state_;
};

}  // namespace smoothcover
