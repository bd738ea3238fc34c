#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace twinsieve {

// Exact integers and rationals. cpp_int keeps small values inline and grows
// to arbitrary precision on demand.
using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline std::optional<std::int64_t> to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    return std::nullopt;
  }
  return static_cast<std::int64_t>(v);
}

inline std::optional<std::uint64_t> to_uint64(const BigInt& v) {
  if (v < 0 || v > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const BigRational& v) {
  return boost::multiprecision::numerator(v).str() + "/" +
         boost::multiprecision::denominator(v).str();
}

inline double to_double(const BigRational& v) { return v.convert_to<double>(); }

}  // namespace twinsieve
