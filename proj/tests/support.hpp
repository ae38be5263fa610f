#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "lelab/error.hpp"
#include "lelab/exponents.hpp"

namespace lelab::test {

// Error code raised by f, or nullopt when it returns normally.
template <class F>
std::optional<ErrorCode> code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline double rel_err(double x, double ref) { return std::abs(x - ref) / std::max(std::abs(ref), 1e-300); }

// Reproducible random admissible triples.
class TripleSource {
 public:
  explicit TripleSource(std::uint64_t seed) : rng_(seed) {}

  SystemParams any(double p_max = 10.0, double d_lo = 3.0, double d_hi = 30.0) {
    for (;;) {
      const double p = std::uniform_real_distribution<double>(1.0, p_max)(rng_);
      const double q = std::uniform_real_distribution<double>(1.0, p)(rng_);
      const double d = std::uniform_real_distribution<double>(d_lo, d_hi)(rng_);
      if (SystemParams::admissible(p, q, d)) return SystemParams(p, q, d);
    }
  }

  SystemParams supercritical(double p_max = 10.0, double d_lo = 3.0, double d_hi = 30.0) {
    for (;;) {
      const auto s = any(p_max, d_lo, d_hi);
      if (criticality_gap(s) < -1e-9) return s;
    }
  }

  // Integer dimension, handy for theorem flags.
  SystemParams integer_d(double p_max, int d_lo, int d_hi) {
    for (;;) {
      const double p = std::uniform_real_distribution<double>(1.0, p_max)(rng_);
      const double q = std::uniform_real_distribution<double>(1.0, p)(rng_);
      const int d = std::uniform_int_distribution<int>(d_lo, d_hi)(rng_);
      if (SystemParams::admissible(p, q, d)) return SystemParams(p, q, d);
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace lelab::test
