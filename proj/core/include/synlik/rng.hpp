#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace synlik {

/// Philox4x32-10 block function (Salmon et al., Random123).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// What a stream is used for; keeps the simulation, proposal and acceptance
/// draws of the same iteration on disjoint counters.
enum class StreamPurpose : std::uint8_t {
  Simulation = 1,
  Proposal = 2,
  Accept = 3,
  Initial = 4,
  PenaltyRepeat = 5,
  SmokeTest = 6,
  User = 0x7f,
};

/// Packs a purpose tag and an index (iteration, repeat, attempt) into a stream id.
constexpr std::uint64_t make_stream_id(StreamPurpose purpose, std::uint64_t index) {
  return (static_cast<std::uint64_t>(purpose) << 56) | (index & 0x00ff'ffff'ffff'ffffULL);
}

/// Counter-based random stream keyed by (master_seed, stream_id, substream).
///
/// Draws depend only on the key triple and on how many values have been
/// consumed, never on thread scheduling, so a simulation run with stream
/// (seed, id, i) is reproducible on any worker. The key is the master seed,
/// the 128-bit counter holds (block, substream, stream_id).
///
/// A stream is single-owner; do not share one across concurrent tasks.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_id, std::uint32_t substream = 0);

  std::uint64_t master_seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint32_t substream() const noexcept { return substream_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on the open interval (0, 1).
  double uniform_open();
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint32_t substream_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace synlik
