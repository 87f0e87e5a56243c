#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace pacsafe {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt ipow(std::uint64_t base, std::size_t exponent) {
  return boost::multiprecision::pow(BigInt(base), static_cast<unsigned>(exponent));
}

/// Nearest double to numerator / denominator.
double ratio_to_double(const BigInt& numerator, const BigInt& denominator);

inline std::string to_string(const BigInt& value) { return value.str(); }

}  // namespace pacsafe
