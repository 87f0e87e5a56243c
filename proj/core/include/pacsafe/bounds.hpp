#pragma once

#include <cstdint>

#include "pacsafe/bigint.hpp"

namespace pacsafe {

/// Sample-size condition L >= 2 h (d + ln h) and the quantities tied to it.
struct PacParams {
  double h = 0.0;
  BigInt d = 0;
  std::uint64_t samples = 0;
  /// max(0, 1 - 1/h)
  double confidence = 0.0;
};

/// 2 h (d + ln h), evaluated in extended precision when d is large.
double sample_bound(double h, const BigInt& d);

/// Smallest integer L with L >= 2 h (d + ln h). Requires h > 1.
std::uint64_t required_samples(double h, const BigInt& d);

/// Clamped to 0 for h <= 1, where the guarantee is vacuous.
double confidence_of(double h);

/// Inverse of confidence_of on (0, 1).
double h_for_confidence(double confidence);

/// Solves 2 h (d + ln h) = L for h by bisection (relative tolerance 1e-10).
PacParams solve_h(std::uint64_t samples, const BigInt& d);

/// x_S / |I|^n, rounded to the nearest double. Throws ValidationError when
/// x_S exceeds |I|^n.
double safety_probability(const BigInt& safe_paths, std::size_t alphabet_size, std::size_t n);

}  // namespace pacsafe
