#pragma once

#include <cmath>
#include <concepts>
#include <cstdio>
#include <string>

#include "addilope/rational.hpp"

namespace addilope {

// The two value lanes: IEEE double for general runs, Rat for exact runs.
template <class S>
concept Scalar = std::same_as<S, double> || std::same_as<S, Rat>;

template <Scalar S>
inline constexpr bool is_exact_v = std::same_as<S, Rat>;

template <Scalar S>
struct scalar_ops;

template <>
struct scalar_ops<double> {
  static double from_int(long long v) { return static_cast<double>(v); }
  static double from_rat(const Rat& r) { return r.to_double(); }
  static double abs(double v) { return std::fabs(v); }
  static bool is_valid(double v) { return !std::isnan(v) && std::isfinite(v); }
  // Relative tolerance scale used where the caller has not pinned one.
  static double default_rel_tol() { return 1e-9; }
  static std::string str(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
};

template <>
struct scalar_ops<Rat> {
  static Rat from_int(long long v) { return Rat(v); }
  static Rat from_rat(const Rat& r) { return r; }
  static Rat abs(const Rat& v) { return v.abs(); }
  static bool is_valid(const Rat&) { return true; }
  static Rat default_rel_tol() { return Rat(0); }
  static std::string str(const Rat& v) { return v.str(); }
};

template <Scalar S>
double to_double(const S& v) {
  if constexpr (is_exact_v<S>)
    return v.to_double();
  else
    return v;
}

template <Scalar S>
std::string scalar_str(const S& v) {
  return scalar_ops<S>::str(v);
}

}  // namespace addilope
