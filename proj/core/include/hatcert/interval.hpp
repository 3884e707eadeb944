#pragma once

#include <cmath>
#include <compare>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace hatcert {

/// Raised when an operation is applied outside its mathematical domain
/// (division by an interval containing zero, sqrt of a negative interval,
/// non-finite input).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an enclosure endpoint would leave the finite binary64 range.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

inline double next_up(double x) { return std::nextafter(x, HUGE_VAL); }
inline double next_down(double x) { return std::nextafter(x, -HUGE_VAL); }

/// Closed interval [lo, hi] with finite binary64 endpoints.
///
/// Every arithmetic operation returns an interval that contains the exact
/// real result for all real arguments drawn from the operands. Rounding is
/// handled by stepping each natively rounded endpoint one representable
/// number outward, never by changing the FPU rounding mode.
class Interval {
 public:
  constexpr Interval() = default;
  explicit Interval(double point);
  Interval(double lo, double hi);

  /// Smallest interval guaranteed to contain the real number whose nearest
  /// binary64 value is `rounded` (i.e. `rounded` widened by one ulp each way).
  static Interval around(double rounded);

  /// Hull of two intervals.
  static Interval hull(const Interval& a, const Interval& b);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double width() const { return hi_ - lo_; }
  double mid() const;
  double mag() const { return std::fmax(std::fabs(lo_), std::fabs(hi_)); }

  bool contains(double x) const { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool is_point() const { return lo_ == hi_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

std::ostream& operator<<(std::ostream& os, const Interval& x);
std::string to_string(const Interval& x);

/// Unbounded closed ray [lo, +inf). Intervals never hold infinities, so
/// unbounded domains are carried separately.
struct Ray {
  double lo = 0.0;

  explicit Ray(double start);
  friend bool operator==(const Ray&, const Ray&) = default;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);

inline Interval operator+(const Interval& a, double b) { return a + Interval(b); }
inline Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
inline Interval operator-(const Interval& a, double b) { return a - Interval(b); }
inline Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
inline Interval operator*(const Interval& a, double b) { return a * Interval(b); }
inline Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
inline Interval operator/(const Interval& a, double b) { return a / Interval(b); }
inline Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

Interval abs(const Interval& x);
Interval sqr(const Interval& x);
Interval sqrt(const Interval& x);
/// x^n for any integer n; negative n requires 0 not in x.
Interval pow_int(const Interval& x, int n);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);

/// Enclosure of exp over x: argument reduction t = k ln2 + r with a split
/// ln2, a degree-18 Taylor polynomial in r and an explicit Lagrange
/// remainder, evaluated at both endpoints.
Interval exp_enclosure(const Interval& x);

Interval sin_enclosure(const Interval& x);
Interval cos_enclosure(const Interval& x);
Interval sin_sq_enclosure(const Interval& x);
Interval cos_sq_enclosure(const Interval& x);

namespace constants {

Interval pi();
Interval half_pi();
Interval pi_squared();
Interval two_pi_sq();       // 2 pi^2
Interval four_pi_sq();      // 4 pi^2, equal to (2 pi)^2
Interval two_pi_squared();  // (2 pi)^2
Interval two_pi_fourth();   // (2 pi)^4
Interval inv_two_pi_sq();   // (2 pi)^-2
Interval sqrt2();
Interval ln2();

}  // namespace constants

}  // namespace hatcert
