#pragma once

#include <cstdint>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace addilope {

// Exact rational on 64-bit integers, always normalized (den > 0, gcd = 1).
// Intermediates run in 128 bits; results that do not fit back into 64 bits
// throw overflow_error instead of wrapping.
class Rat {
public:
  Rat() = default;
  Rat(long long n) : num_(n) {}
  Rat(long long n, long long d) { *this = make(n, d); }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make128(i128(a.num_) * b.den_ + i128(b.num_) * a.den_,
                   i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make128(i128(a.num_) * b.den_ - i128(b.num_) * a.den_,
                   i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return make128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }
  Rat operator-() const {
    Rat r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    return i128(a.num_) * b.den_ <=> i128(b.num_) * a.den_;
  }

  Rat abs() const { return num_ < 0 ? -*this : *this; }

  // x^k for integral k; 0^negative is a domain error.
  Rat pow_int(long long k) const {
    if (k < 0) {
      if (num_ == 0) throw std::domain_error("zero raised to negative power");
      Rat inv;
      inv = make(den_, num_);
      return inv.pow_int(-k);
    }
    Rat base = *this, acc = Rat(1);
    while (k > 0) {
      if (k & 1) acc *= base;
      k >>= 1;
      if (k) base *= base;
    }
    return acc;
  }

  // Parses "123", "-4.75" or "5/6". Decimal digits map to exact tenths, so
  // every literal the expression grammar admits is representable.
  static Rat parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty number");
    bool neg = false;
    size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
      neg = text[0] == '-';
      i = 1;
    }
    i128 num = 0, den = 1;
    bool any_digit = false, seen_dot = false, seen_slash = false;
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (c >= '0' && c <= '9') {
        any_digit = true;
        if (seen_slash) {
          den = den * 10 + (c - '0');
        } else {
          num = num * 10 + (c - '0');
          if (seen_dot) den *= 10;
        }
        if (num > kMax128 || den > kMax128)
          throw std::overflow_error("number literal too large");
      } else if (c == '.' && !seen_dot && !seen_slash) {
        seen_dot = true;
      } else if (c == '/' && !seen_slash && !seen_dot) {
        seen_slash = true;
        den = 0;
      } else {
        throw std::invalid_argument("malformed number: " +
                                    std::string(text));
      }
    }
    if (!any_digit) throw std::invalid_argument("malformed number: " +
                                                std::string(text));
    if (neg) num = -num;
    return make128(num, den);
  }

private:
  using i128 = __int128;
  static constexpr i128 kMax128 = i128(1) << 100;

  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rat make128(i128 n, i128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    i128 g = gcd128(n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    constexpr i128 lo = std::numeric_limits<long long>::min();
    constexpr i128 hi = std::numeric_limits<long long>::max();
    if (n < lo || n > hi || d > hi)
      throw std::overflow_error("rational overflow");
    Rat r;
    r.num_ = static_cast<long long>(n);
    r.den_ = static_cast<long long>(d);
    return r;
  }

  static Rat make(long long n, long long d) { return make128(n, d); }

  long long num_ = 0;
  long long den_ = 1;
};

}  // namespace addilope
