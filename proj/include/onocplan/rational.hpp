#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace onoc {

// Exact rational number. Stored normalized (gcd 1, den > 0) in 64-bit
// numerator/denominator; all arithmetic runs through 128-bit intermediates
// and throws std::overflow_error rather than silently losing exactness.
// Durations, work amounts and per-period constants stay in Rat end to end;
// conversion to double happens only at reporting boundaries.
class Rat {
 public:
  constexpr Rat() = default;
  constexpr Rat(long long n) : num_(n) {}
  Rat(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("Rat: zero denominator");
    store(n, d);
  }

  // Exact value of a finite double (every finite double is a binary rational).
  // Values whose denominator exceeds 2^62 do not fit and throw.
  static Rat from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("Rat: non-finite value");
    if (v == std::trunc(v)) {
      if (std::abs(v) > 9.0e18) throw std::overflow_error("Rat: value out of range");
      return Rat(static_cast<long long>(v));
    }
    int exp = 0;
    const double fr = std::frexp(v, &exp);  // v = fr * 2^exp, |fr| in [0.5, 1)
    const auto mant = static_cast<long long>(std::ldexp(fr, 53));  // exact
    exp -= 53;
    if (exp >= 0) {
      if (exp > 10) throw std::overflow_error("Rat: value out of range");
      return Rat(mant << exp);
    }
    if (-exp > 62) throw std::overflow_error("Rat: denominator out of range");
    return Rat(mant, 1LL << -exp);
  }

  long long num() const { return num_; }
  long long den() const { return den_; }
  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }

  long long floor_ll() const {
    if (num_ >= 0) return num_ / den_;
    return -((-num_ + den_ - 1) / den_);
  }
  long long ceil_ll() const {
    if (num_ > 0) return (num_ + den_ - 1) / den_;
    return -(-num_ / den_);
  }
  // round half up: floor(x + 1/2)
  long long round_half_up_ll() const { return (*this + Rat(1, 2)).floor_ll(); }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  Rat operator-() const { return Rat(-num_, den_); }

  friend Rat operator+(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rat operator-(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
  }
  friend Rat operator*(const Rat& a, const Rat& b) {
    return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
  }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.num_ == 0) throw std::invalid_argument("Rat: division by zero");
    return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
  }

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  // Cross products of normalized 64-bit values fit in 128 bits: comparisons exact.
  friend bool operator==(const Rat& a, const Rat& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) { return i128(a.num_) * b.den_ < i128(b.num_) * a.den_; }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

 private:
  using i128 = __int128;

  static i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const i128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  static Rat make(i128 n, i128 d) {
    Rat r;
    r.store128(n, d);
    return r;
  }

  void store(long long n, long long d) { store128(i128(n), i128(d)); }

  void store128(i128 n, i128 d) {
    if (d < 0) {
      n = -n;
      d = -d;
    }
    if (n == 0) {
      num_ = 0;
      den_ = 1;
      return;
    }
    const i128 g = gcd128(n, d);
    n /= g;
    d /= g;
    constexpr i128 kMax = 0x7fffffffffffffffLL;
    if (n > kMax || n < -kMax || d > kMax) throw std::overflow_error("Rat: overflow");
    num_ = static_cast<long long>(n);
    den_ = static_cast<long long>(d);
  }

  long long num_ = 0;
  long long den_ = 1;
};

inline double to_double(const Rat& r) { return r.to_double(); }

inline long long ceil_div(long long a, long long b) {
  if (b <= 0) throw std::invalid_argument("ceil_div: divisor must be positive");
  return (a + b - 1) / b;
}

}  // namespace onoc
