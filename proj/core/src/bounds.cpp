#include "pacsafe/bounds.hpp"

#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "pacsafe/errors.hpp"

namespace pacsafe {

namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;

const BigInt kMantissaLimit = BigInt(1) << 53;

double bound_wide(double h, const BigInt& d) {
  Wide value = Wide(2) * Wide(h) * (Wide(d) + Wide(std::log(h)));
  return value.convert_to<double>();
}

}  // namespace

double ratio_to_double(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) throw ValidationError("division by zero count");
  if (numerator < kMantissaLimit && denominator < kMantissaLimit) {
    return numerator.convert_to<double>() / denominator.convert_to<double>();
  }
  Wide q = Wide(numerator) / Wide(denominator);
  return q.convert_to<double>();
}

double sample_bound(double h, const BigInt& d) {
  if (!(h > 0.0)) throw ValidationError("h must be positive");
  if (d < 0) throw ValidationError("d must be non-negative");
  if (d < kMantissaLimit) return 2.0 * h * (d.convert_to<double>() + std::log(h));
  return bound_wide(h, d);
}

std::uint64_t required_samples(double h, const BigInt& d) {
  if (!(h > 1.0) || !std::isfinite(h)) throw ValidationError("required_samples needs h > 1");
  double bound = sample_bound(h, d);
  if (bound >= static_cast<double>(std::numeric_limits<std::uint64_t>::max())) {
    throw ResourceError("required sample size overflows 64 bits");
  }
  return static_cast<std::uint64_t>(std::ceil(bound));
}

double confidence_of(double h) { return h <= 1.0 ? 0.0 : 1.0 - 1.0 / h; }

double h_for_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ValidationError("confidence must lie in (0, 1)");
  return 1.0 / (1.0 - confidence);
}

PacParams solve_h(std::uint64_t samples, const BigInt& d) {
  if (samples < 1) throw ValidationError("sample budget must be at least 1");
  if (d < 0) throw ValidationError("d must be non-negative");
  const double target = static_cast<double>(samples);

  // The bound is increasing on h > exp(-(d + 1)) and negative at that point,
  // so the root lies above it. With d = 0 the bound is <= 0 on (0, 1].
  double lo;
  if (d == 0) {
    lo = 1.0;
  } else {
    double dd = d < kMantissaLimit ? d.convert_to<double>() : std::numeric_limits<double>::max();
    lo = std::exp(-(dd + 1.0));
    if (lo == 0.0) lo = std::numeric_limits<double>::denorm_min();
  }
  double hi = std::max(1.0, lo);
  while (sample_bound(hi, d) < target) hi *= 2.0;
  if (sample_bound(lo, d) >= target) hi = lo;

  while (hi - lo > 1e-10 * hi) {
    double mid = lo + (hi - lo) / 2.0;
    if (mid <= lo || mid >= hi) break;
    if (sample_bound(mid, d) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  PacParams p;
  p.h = lo + (hi - lo) / 2.0;
  p.d = d;
  p.samples = samples;
  p.confidence = confidence_of(p.h);
  return p;
}

double safety_probability(const BigInt& safe_paths, std::size_t alphabet_size, std::size_t n) {
  if (alphabet_size == 0) throw ValidationError("alphabet must be non-empty");
  if (safe_paths < 0) throw ValidationError("safe path count must be non-negative");
  BigInt total = ipow(alphabet_size, n);
  if (safe_paths > total) {
    throw ValidationError("safe path count " + safe_paths.str() + " exceeds the " + total.str() + " possible paths");
  }
  return ratio_to_double(safe_paths, total);
}

}  // namespace pacsafe
