#pragma once

// Seeded, splittable random streams. The generator is splitmix64 keyed by
// (seed, stream_id): equal keys replay the same sequence bit for bit, and
// distinct stream ids give statistically independent sequences, so
// replications can each own a stream and run in any order (or in parallel).

#include <cstdint>
#include <vector>

namespace cdist::num {

class RngStream {
 public:
  static constexpr const char* kAlgorithm = "splitmix64";

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id), state_(derive(seed, stream_id)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform draw strictly inside (0,1).
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Independent stream derived from this one's identity; deterministic in
  // (seed, stream_id, id).
  RngStream substream(std::uint64_t id) const {
    return RngStream(mix(seed_ ^ mix(stream_id_ + 0x632be59bd9b4e019ULL)), id);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream_id) {
    return mix(seed + 0x9e3779b97f4a7c15ULL * (stream_id + 1));
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
};

}  // namespace cdist::num
