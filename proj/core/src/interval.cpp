#include "hatcert/interval.hpp"

#include <algorithm>
#include <array>
#include <cfloat>
#include <limits>
#include <ostream>
#include <sstream>

namespace hatcert {

namespace {

void require_finite(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw OverflowError("interval endpoint is not finite");
  }
}

// Outward-rounded result from natively rounded endpoint candidates.
Interval outward(double lo, double hi) {
  double l = next_down(lo);
  double h = next_up(hi);
  require_finite(l, h);
  return Interval(l, h);
}

// Directed rounding without switching the FPU mode: the rounding error of
// the native result is recovered exactly (TwoSum, or an fma residual) and
// the result is stepped only when it was rounded the wrong way. Near the
// subnormal range the residual may itself be inexact, so the step is taken
// unconditionally there.
constexpr double kTiny = 0x1p-969;

double add_down(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return err < 0.0 ? next_down(s) : s;
}

double add_up(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  const double err = (a - (s - bb)) + (b - bb);
  return err > 0.0 ? next_up(s) : s;
}

double mul_down(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double p = a * b;
  if (!std::isfinite(p)) return p;
  if (std::fabs(p) < kTiny) return next_down(p);
  return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}

double mul_up(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  const double p = a * b;
  if (!std::isfinite(p)) return p;
  if (std::fabs(p) < kTiny) return next_up(p);
  return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}

// Sign of a/b - q, from the exact residual a - q b.
int quotient_error_sign(double a, double b, double q) {
  const double r = std::fma(-q, b, a);
  if (r == 0.0) return 0;
  return (r > 0.0) == (b > 0.0) ? 1 : -1;
}

double div_down(double a, double b) {
  if (a == 0.0) return 0.0;
  const double q = a / b;
  if (!std::isfinite(q)) return q;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_down(q);
  return quotient_error_sign(a, b, q) < 0 ? next_down(q) : q;
}

double div_up(double a, double b) {
  if (a == 0.0) return 0.0;
  const double q = a / b;
  if (!std::isfinite(q)) return q;
  if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_up(q);
  return quotient_error_sign(a, b, q) > 0 ? next_up(q) : q;
}

double sqrt_down(double x) {
  if (x == 0.0) return 0.0;
  const double s = std::sqrt(x);
  if (x < kTiny) return std::fmax(0.0, next_down(s));
  return std::fma(-s, s, x) < 0.0 ? next_down(s) : s;
}

double sqrt_up(double x) {
  if (x == 0.0) return 0.0;
  const double s = std::sqrt(x);
  if (x < kTiny) return next_up(s);
  return std::fma(-s, s, x) > 0.0 ? next_up(s) : s;
}

// Upper bound of a^n for a >= 0.
double pow_up_nonneg(double a, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r = mul_up(r, a);
  return r;
}

// Lower bound of a^n for a >= 0.
double pow_down_nonneg(double a, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r = std::fmax(0.0, mul_down(r, a));
  return r;
}

// ln2 = kLn2Hi + kLn2Lo; kLn2Hi carries 32 significant bits so k * kLn2Hi
// is exact for |k| < 2^21.
constexpr double kLn2Hi = 6.93147180369123816490e-01;
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kInvLn2 = 1.44269504088896338700e+00;

// pi/2 = kPio2Hi + kPio2Lo; kPio2Hi carries 33 significant bits.
constexpr double kPio2Hi = 1.57079632673412561417e+00;
constexpr double kPio2Lo = 6.07710050650619224932e-11;
constexpr double kTwoOverPi = 6.36619772367581382433e-01;

constexpr int kExpDegree = 18;

// 1/i! as intervals, i = 0..31. i! is exact in binary64 for i <= 22 and
// the quotient is outward rounded either way.
const std::array<Interval, 32>& inverse_factorials() {
  static const std::array<Interval, 32> table = [] {
    std::array<Interval, 32> t{};
    Interval fact(1.0);
    t[0] = Interval(1.0);
    for (int i = 1; i < 32; ++i) {
      fact = fact * Interval(static_cast<double>(i));
      t[i] = Interval(1.0) / fact;
    }
    return t;
  }();
  return table;
}

// Enclosure of e^t for a single binary64 t.
Interval exp_point(double t) {
  if (!std::isfinite(t)) throw DomainError("exp of non-finite argument");
  if (t > 709.78) throw OverflowError("exp overflows binary64");
  if (t < -745.2) return Interval(0.0, std::numeric_limits<double>::denorm_min());
  if (t == 0.0) return Interval(1.0);

  const int k = static_cast<int>(std::nearbyint(t * kInvLn2));
  const Interval ln2_lo = Interval::around(kLn2Lo);
  Interval r = Interval(t) - Interval(k * kLn2Hi) - Interval(static_cast<double>(k)) * ln2_lo;

  const auto& inv_fact = inverse_factorials();
  Interval p = inv_fact[kExpDegree];
  for (int i = kExpDegree - 1; i >= 0; --i) p = p * r + inv_fact[i];

  // Lagrange remainder: |R| <= e^|r| |r|^(N+1)/(N+1)! and e^|r| < 2 for |r| < ln2.
  const double rmag = r.mag();
  if (rmag >= 0.69) throw DomainError("exp argument reduction failed");
  const double rem = (Interval(2.0) * pow_int(Interval(rmag), kExpDegree + 1) * inv_fact[kExpDegree + 1]).hi();
  p = p + Interval(-rem, rem);

  double lo = std::ldexp(p.lo(), k);
  double hi = std::ldexp(p.hi(), k);
  // Scaling is exact for normal results; subnormal results may round.
  if (std::fabs(lo) < DBL_MIN) lo = next_down(lo);
  if (std::fabs(hi) < DBL_MIN) hi = next_up(hi);
  lo = std::fmax(lo, 0.0);
  require_finite(lo, hi);
  return Interval(lo, hi);
}

enum class Trig { kSin, kCos };

Interval signed_inverse_factorial(int k, int i) {
  const Interval& c = inverse_factorials()[k];
  return i % 2 == 0 ? c : -c;
}

// Series below are used for |r| <= pi/4 + tiny.

// r * sum_{i<=12} (-1)^i r^(2i) / (2i+1)!  plus remainder |r|^27/27!.
Interval sin_series(const Interval& r) {
  const Interval s = sqr(r);
  Interval p = signed_inverse_factorial(25, 12);
  for (int i = 11; i >= 0; --i) p = signed_inverse_factorial(2 * i + 1, i) + s * p;
  const double rem = (pow_int(Interval(r.mag()), 27) * inverse_factorials()[27]).hi();
  return r * p + Interval(-rem, rem);
}

// sum_{i<=13} (-1)^i r^(2i) / (2i)!  plus remainder |r|^28/28!.
Interval cos_series(const Interval& r) {
  const Interval s = sqr(r);
  Interval p = signed_inverse_factorial(26, 13);
  for (int i = 12; i >= 0; --i) p = signed_inverse_factorial(2 * i, i) + s * p;
  const double rem = (pow_int(Interval(r.mag()), 28) * inverse_factorials()[28]).hi();
  return p + Interval(-rem, rem);
}

Interval clamp_unit(const Interval& x, double floor) {
  return Interval(std::clamp(x.lo(), floor, 1.0), std::clamp(x.hi(), floor, 1.0));
}

// Enclosure of sin(t) or cos(t) for a single binary64 t.
Interval trig_point(double t, Trig which) {
  if (!std::isfinite(t)) throw DomainError("trig of non-finite argument");
  if (std::fabs(t) > 1.0e5) return Interval(-1.0, 1.0);
  const double kd = std::nearbyint(t * kTwoOverPi);
  const Interval r = Interval(t) - Interval(kd * kPio2Hi) - Interval(kd) * Interval::around(kPio2Lo);
  const int quadrant = static_cast<int>(((static_cast<long long>(kd) % 4) + 4) % 4);
  // sin(r + q pi/2) and cos(r + q pi/2) by quadrant.
  const int shift = which == Trig::kSin ? quadrant : (quadrant + 1) % 4;
  Interval v;
  switch (shift) {
    case 0: v = sin_series(r); break;
    case 1: v = cos_series(r); break;
    case 2: v = -sin_series(r); break;
    default: v = -cos_series(r); break;
  }
  return clamp_unit(v, -1.0);
}

// Extremes of sin lie at pi/2 + j pi (value (-1)^j), of cos at j pi.
Interval trig_enclosure(const Interval& x, Trig which) {
  if (x.width() >= 6.3) return Interval(-1.0, 1.0);
  Interval out = Interval::hull(trig_point(x.lo(), which), trig_point(x.hi(), which));
  const Interval pi = constants::pi();
  const Interval offset = which == Trig::kSin ? constants::half_pi() : Interval(0.0);
  const double base = (x.lo() - offset.lo()) / pi.lo();
  const long long j0 = static_cast<long long>(std::floor(base)) - 1;
  for (long long j = j0; j <= j0 + 4; ++j) {
    const Interval crit = offset + Interval(static_cast<double>(j)) * pi;
    if (crit.hi() >= x.lo() && crit.lo() <= x.hi()) {
      const double v = (j % 2 == 0) ? 1.0 : -1.0;
      out = Interval::hull(out, Interval(v));
    }
  }
  return clamp_unit(out, -1.0);
}

}  // namespace

Interval::Interval(double point) : Interval(point, point) {}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("interval endpoints must be finite");
  }
  if (!(lo <= hi)) throw DomainError("interval requires lo <= hi");
}

Interval Interval::around(double rounded) { return outward(rounded, rounded); }

Interval Interval::hull(const Interval& a, const Interval& b) {
  return Interval(std::fmin(a.lo_, b.lo_), std::fmax(a.hi_, b.hi_));
}

double Interval::mid() const {
  const double m = 0.5 * lo_ + 0.5 * hi_;
  return std::clamp(m, lo_, hi_);
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
  std::ostringstream s;
  s.precision(17);
  s << '[' << x.lo() << ", " << x.hi() << ']';
  return os << s.str();
}

std::string to_string(const Interval& x) {
  std::ostringstream s;
  s << x;
  return s.str();
}

Ray::Ray(double start) : lo(start) {
  if (!std::isfinite(start)) throw DomainError("ray start must be finite");
}

Interval operator+(const Interval& a, const Interval& b) {
  const double lo = add_down(a.lo(), b.lo());
  const double hi = add_up(a.hi(), b.hi());
  require_finite(lo, hi);
  return Interval(lo, hi);
}

Interval operator-(const Interval& a, const Interval& b) {
  const double lo = add_down(a.lo(), -b.hi());
  const double hi = add_up(a.hi(), -b.lo());
  require_finite(lo, hi);
  return Interval(lo, hi);
}

Interval operator-(const Interval& a) { return Interval(-a.hi(), -a.lo()); }

Interval operator*(const Interval& a, const Interval& b) {
  if ((a.lo() == 0.0 && a.hi() == 0.0) || (b.lo() == 0.0 && b.hi() == 0.0)) {
    return Interval(0.0);
  }
  const double lo = std::min({mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi()), mul_down(a.hi(), b.lo()),
                              mul_down(a.hi(), b.hi())});
  const double hi = std::max({mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi()), mul_up(a.hi(), b.lo()),
                              mul_up(a.hi(), b.hi())});
  require_finite(lo, hi);
  return Interval(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) throw DomainError("division by an interval containing zero");
  if (a.lo() == 0.0 && a.hi() == 0.0) return Interval(0.0);
  const double lo = std::min({div_down(a.lo(), b.lo()), div_down(a.lo(), b.hi()), div_down(a.hi(), b.lo()),
                              div_down(a.hi(), b.hi())});
  const double hi = std::max({div_up(a.lo(), b.lo()), div_up(a.lo(), b.hi()), div_up(a.hi(), b.lo()),
                              div_up(a.hi(), b.hi())});
  require_finite(lo, hi);
  return Interval(lo, hi);
}

Interval abs(const Interval& x) {
  if (x.lo() >= 0.0) return x;
  if (x.hi() <= 0.0) return -x;
  return Interval(0.0, x.mag());
}

Interval sqr(const Interval& x) {
  const Interval a = abs(x);
  const double lo = std::fmax(0.0, mul_down(a.lo(), a.lo()));
  const double hi = mul_up(a.hi(), a.hi());
  require_finite(lo, hi);
  return Interval(lo, hi);
}

Interval sqrt(const Interval& x) {
  if (x.lo() < 0.0) throw DomainError("sqrt of an interval with negative part");
  return Interval(sqrt_down(x.lo()), sqrt_up(x.hi()));
}

Interval pow_int(const Interval& x, int n) {
  if (n == 0) return Interval(1.0);
  if (n < 0) {
    if (x.contains_zero()) throw DomainError("negative power of an interval containing zero");
    return Interval(1.0) / pow_int(x, -n);
  }
  if (n == 1) return x;
  if (n % 2 == 0) {
    const Interval a = abs(x);
    const double hi = pow_up_nonneg(a.hi(), n);
    require_finite(0.0, hi);
    return Interval(pow_down_nonneg(a.lo(), n), hi);
  }
  // odd power is increasing; (-a)^n = -(a^n)
  const double lo = x.lo() >= 0.0 ? pow_down_nonneg(x.lo(), n) : -pow_up_nonneg(-x.lo(), n);
  const double hi = x.hi() >= 0.0 ? pow_up_nonneg(x.hi(), n) : -pow_down_nonneg(-x.hi(), n);
  require_finite(lo, hi);
  return Interval(lo, hi);
}

Interval min(const Interval& a, const Interval& b) {
  return Interval(std::fmin(a.lo(), b.lo()), std::fmin(a.hi(), b.hi()));
}

Interval max(const Interval& a, const Interval& b) {
  return Interval(std::fmax(a.lo(), b.lo()), std::fmax(a.hi(), b.hi()));
}

Interval exp_enclosure(const Interval& x) {
  if (x.is_point()) return exp_point(x.lo());
  return Interval(exp_point(x.lo()).lo(), exp_point(x.hi()).hi());
}

Interval sin_enclosure(const Interval& x) { return trig_enclosure(x, Trig::kSin); }
Interval cos_enclosure(const Interval& x) { return trig_enclosure(x, Trig::kCos); }

Interval sin_sq_enclosure(const Interval& x) { return clamp_unit(sqr(sin_enclosure(x)), 0.0); }
Interval cos_sq_enclosure(const Interval& x) { return clamp_unit(sqr(cos_enclosure(x)), 0.0); }

namespace constants {

// Each literal is the correctly rounded value of the constant; widening by
// one ulp on each side yields a rigorous enclosure of width 2 ulp.
Interval pi() { return Interval::around(3.14159265358979323846264338); }
Interval half_pi() { return Interval::around(1.57079632679489661923132169); }
Interval pi_squared() { return Interval::around(9.86960440108935861883449099); }
Interval two_pi_sq() { return Interval::around(19.7392088021787172376689820); }
Interval four_pi_sq() { return Interval::around(39.4784176043574344753379640); }
Interval two_pi_squared() { return four_pi_sq(); }
Interval two_pi_fourth() { return Interval::around(1558.54545654403899578304532); }
Interval inv_two_pi_sq() { return Interval::around(0.0253302959105844428609698658); }
Interval sqrt2() { return Interval::around(1.41421356237309504880168872); }
Interval ln2() { return Interval::around(0.693147180559945309417232121); }

}  // namespace constants

}  // namespace hatcert
