#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "psim/common/bytes.hpp"

namespace psim {

/// Seeded pseudo-random stream. Streams are forked by label so that each
/// subsystem draws from its own sequence; adding draws in one subsystem
/// never shifts another's.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Child stream determined only by (this stream's seed, label).
  Rng fork(std::string_view label) const;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double uniform(double lo, double hi);
  double normal(double mean, double stddev);
  bool bernoulli(double p);
  Bytes bytes(std::size_t count);

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// FNV-1a, used for label hashing.
std::uint64_t fnv1a64(std::string_view text);

}  // namespace psim
