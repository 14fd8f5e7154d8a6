#pragma once

#include <cstdint>
#include <utility>

namespace psauction {

// Counter-based random stream (Philox2x64-10). A stream is fully determined
// by (seed, stream_id, counter), so replicates can derive their own streams
// without coordination and runs replay bit-exactly.
class RandomStream {
 public:
  RandomStream() : RandomStream(0, 0) {}
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double next_double();
  double uniform(double lo, double hi);
  bool bernoulli(double p) { return next_double() < p; }

  // Independent child stream sharing the seed. Derivations are stable:
  // the same (stream_id, child_id) always yields the same child.
  RandomStream derive(std::uint64_t child_id) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t draws() const { return draws_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
  std::uint64_t draws_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

// SplitMix64 finalizer, used for stream derivation and config hashing.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace psauction
