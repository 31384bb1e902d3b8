#pragma once

#include <cstdint>

namespace popabm {

// Small-state SplitMix64 generator. Every agent owns one, so the state must
// stay at 8 bytes; streams are derived from (master seed, stream id) and do
// not depend on which worker advances them.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream() = default;
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() { return next_u64(); }
  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  // Uniform integer on the inclusive range [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  std::uint64_t state() const noexcept { return state_; }

 private:
  std::uint64_t state_ = 0;
};

// Stream id reserved for world-level draws (immigrant attributes).
inline constexpr std::uint64_t kWorldStreamId = ~std::uint64_t{0};

RandomStream rng_substream(std::uint64_t master_seed, std::uint64_t stream_id);

}  // namespace popabm
