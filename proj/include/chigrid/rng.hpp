#pragma once

#include <cstdint>
#include <random>

namespace chigrid {

/// SplitMix64 finalizer. Bijective avalanche mix on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for replication `index` of an experiment with `master_seed`.
/// Depends only on the pair, never on scheduling, so results are
/// independent of the number of workers.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Random stream used by every sampler.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Uniform and normal variates are derived here rather than
/// through <random> distributions, whose algorithms are
/// implementation-defined, so a given seed yields the same bits on every
/// conforming platform.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  static RngStream for_replication(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(stream_seed(master_seed, index));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform();

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace chigrid
