#include "psim/common/rng.hpp"

namespace psim {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  return std::mt19937_64(seq);
}

// splitmix64 finaliser; bijective on 64-bit words.
std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(make_engine(seed)) {}

Rng Rng::fork(std::string_view label) const {
  return Rng(mix(seed_ ^ mix(fnv1a64(label))));
}

std::uint64_t Rng::next_u64() { return engine_(); }

double Rng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

double Rng::normal(double mean, double stddev) {
  std::normal_distribution<double> dist(mean, stddev);
  return dist(engine_);
}

bool Rng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  std::bernoulli_distribution dist(p);
  return dist(engine_);
}

Bytes Rng::bytes(std::size_t count) {
  Bytes out;
  out.reserve(count);
  while (out.size() < count) {
    std::uint64_t word = engine_();
    for (int i = 0; i < 8 && out.size() < count; ++i) {
      out.push_back(static_cast<std::uint8_t>(word >> (8 * i)));
    }
  }
  return out;
}

}  // namespace psim
