// Exact rational time values. All instants, delays and periods in the
// simulator are rationals; floating point never touches scheduling decisions.
#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tvg {

class Rat {
 public:
  constexpr Rat() : num_(0), den_(1) {}
  constexpr Rat(long long n) : num_(n), den_(1) {}
  Rat(long long n, long long d) { *this = reduce(n, d); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return reduce128((__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_,
                     (__int128)a.den_ * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return reduce128((__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_,
                     (__int128)a.den_ * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return reduce128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return reduce128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
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

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    __int128 l = (__int128)a.num_ * b.den_;
    __int128 r = (__int128)b.num_ * a.den_;
    if (l < r) return std::strong_ordering::less;
    if (l > r) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // floor(*this / m), m > 0.
  long long floorDiv(const Rat& m) const {
    if (m.num_ <= 0) throw std::domain_error("floorDiv by non-positive");
    __int128 a = (__int128)num_ * m.den_;
    __int128 b = (__int128)den_ * m.num_;
    __int128 q = a / b;
    if (a % b != 0 && (a < 0)) q -= 1;
    return (long long)q;
  }

  // *this mod m, result in [0, m).
  Rat mod(const Rat& m) const { return *this - m * Rat(floorDiv(m)); }

  bool isInteger() const { return den_ == 1; }
  bool isZero() const { return num_ == 0; }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  static Rat reduce(long long n, long long d) {
    return reduce128((__int128)n, (__int128)d);
  }
  static Rat reduce128(__int128 n, __int128 d) {
    if (d == 0) throw std::domain_error("rational with zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    __int128 g = gcd128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("rational overflow");
    Rat r;
    r.num_ = (long long)n;
    r.den_ = (long long)d;
    return r;
  }
  static __int128 gcd128(__int128 a, __int128 b) {
    while (b != 0) {
      __int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  long long num_;
  long long den_;
};

using TimeValue = Rat;

}  // namespace tvg
