#pragma once

#include <cstdint>
#include <random>

namespace tiletuner {

// Deterministic random source. mt19937_64 output is specified bit-exactly by
// the standard; we convert draws ourselves because the std distributions are
// implementation-defined and would break cross-toolchain reproducibility.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 mantissa bits.
  double next_double() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, n), n > 0.
  std::uint64_t next_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  bool next_bernoulli(double p) { return next_double() < p; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace tiletuner
