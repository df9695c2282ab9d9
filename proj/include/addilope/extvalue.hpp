#pragma once

#include <compare>
#include <stdexcept>
#include <string>

#include "addilope/scalar.hpp"

namespace addilope {

// Non-negative extended value: a finite scalar >= 0 or an explicit +inf tag.
// Infinity is tagged rather than encoded as an IEEE inf so that divergence
// survives the exact-rational lane and cannot arise from float overflow.
template <Scalar S>
class Ext {
public:
  Ext() : value_(scalar_ops<S>::from_int(0)) {}
  Ext(S v) : value_(std::move(v)) {
    if (!scalar_ops<S>::is_valid(value_) || value_ < scalar_ops<S>::from_int(0))
      throw std::domain_error("extended value must be finite and >= 0, got " +
                              scalar_str(value_));
  }

  static Ext infinity() {
    Ext e;
    e.inf_ = true;
    return e;
  }

  bool is_inf() const { return inf_; }
  bool is_finite() const { return !inf_; }

  const S& finite() const {
    if (inf_) throw std::domain_error("extended value is infinite");
    return value_;
  }

  friend Ext operator+(const Ext& a, const Ext& b) {
    if (a.inf_ || b.inf_) return infinity();
    return Ext(a.value_ + b.value_);
  }

  friend bool operator==(const Ext& a, const Ext& b) {
    if (a.inf_ != b.inf_) return false;
    return a.inf_ || a.value_ == b.value_;
  }
  friend bool operator<(const Ext& a, const Ext& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator>(const Ext& a, const Ext& b) { return b < a; }
  friend bool operator<=(const Ext& a, const Ext& b) { return !(b < a); }
  friend bool operator>=(const Ext& a, const Ext& b) { return !(a < b); }

  std::string str() const { return inf_ ? "inf" : scalar_str(value_); }

private:
  S value_;
  bool inf_ = false;
};

template <Scalar S>
Ext<S> ext_max(const Ext<S>& a, const Ext<S>& b) {
  return a < b ? b : a;
}

template <Scalar S>
Ext<S> ext_min(const Ext<S>& a, const Ext<S>& b) {
  return b < a ? b : a;
}

// |a - b| in the extended order: inf vs finite is inf, inf vs inf is 0.
template <Scalar S>
Ext<S> ext_abs_diff(const Ext<S>& a, const Ext<S>& b) {
  if (a.is_inf() && b.is_inf()) return Ext<S>();
  if (a.is_inf() || b.is_inf()) return Ext<S>::infinity();
  return Ext<S>(scalar_ops<S>::abs(a.finite() - b.finite()));
}

}  // namespace addilope
