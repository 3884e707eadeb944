#include "hatcert/functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace hatcert {

namespace {

using Real = long double;

constexpr Real kPi = std::numbers::pi_v<long double>;
constexpr Real kTwoPiSq = 2 * kPi * kPi;
constexpr Real kFourPiSq = 4 * kPi * kPi;
constexpr Real kInvFourPiSq = 1 / kFourPiSq;

// Subdivision granularity for wide pieces inside eval_interval.
constexpr double kMaxPieceWidth = 1.0 / 64.0;

bool support_based(FunctionTag t) {
  switch (t) {
    case FunctionTag::kKappa:
    case FunctionTag::kKappaPrime:
    case FunctionTag::kPhi:
    case FunctionTag::kTheta:
    case FunctionTag::kGamma:
    case FunctionTag::kThetaMajorant:
      return true;
    default:
      return false;
  }
}

void require_finite(double x) {
  if (!std::isfinite(x)) throw DomainError("function argument must be finite");
}

// ---- pointwise, x > 0 --------------------------------------------------

enum class Piece { kZero, kRising, kFalling };

Piece piece_of(Real x) {
  if (x <= 1.0L / 12) return Piece::kZero;
  if (x <= 1.0L / 6) return Piece::kRising;
  if (x <= 1.0L / 3) return Piece::kFalling;
  return Piece::kZero;
}

Real kappa_pos(Real x) {
  switch (piece_of(x)) {
    case Piece::kRising: {
      const Real s = std::sin((12 * x - 1) * kPi / 2);
      return s * s;
    }
    case Piece::kFalling: {
      const Real c = std::cos((6 * x - 1) * kPi / 2);
      return c * c;
    }
    default:
      return 0;
  }
}

Real kappa_prime_pos(Real x) {
  switch (piece_of(x)) {
    case Piece::kRising:
      return 6 * kPi * std::sin((12 * x - 1) * kPi);
    case Piece::kFalling:
      return -3 * kPi * std::sin((6 * x - 1) * kPi);
    default:
      return 0;
  }
}

Real theta_bound_pos(Real x) {
  const Real g = kInvFourPiSq * std::exp(kTwoPiSq * x * x);
  const Real rising = 6 * kPi / x + 2 / (x * x);
  const Real falling = 3 * kPi / x + (kFourPiSq / 9 - 2) / (x * x);
  if (x < 1.0L / 12 || x > 1.0L / 3) return 0;
  if (x < 1.0L / 6) return g * rising;
  if (x > 1.0L / 6) return g * falling;
  return g * std::max(rising, falling);
}

// Value at |x| for functions defined on the positive axis by formula.
Real support_pos(FunctionTag t, Real x) {
  if (t == FunctionTag::kThetaMajorant) return theta_bound_pos(x);
  if (piece_of(x) == Piece::kZero) return 0;
  const Real k = kappa_pos(x);
  const Real g = kInvFourPiSq * std::exp(kTwoPiSq * x * x);
  switch (t) {
    case FunctionTag::kKappa:
      return k;
    case FunctionTag::kKappaPrime:
      return kappa_prime_pos(x);
    case FunctionTag::kPhi:
      return k * g / (x * x);
    case FunctionTag::kGamma:
      return k * g / x;
    case FunctionTag::kTheta:
      return g * (kappa_prime_pos(x) / x + k * (kFourPiSq - 2 / (x * x)));
    default:
      return 0;
  }
}

Real gauss(Real x) { return std::exp(-kTwoPiSq * x * x); }

// ---- interval pieces, x > 0 ---------------------------------------------

Interval kappa_rising(const Interval& x) {
  return sin_sq_enclosure((12.0 * x - 1.0) * constants::half_pi());
}
Interval kappa_falling(const Interval& x) {
  return cos_sq_enclosure((6.0 * x - 1.0) * constants::half_pi());
}
Interval kappa_prime_rising(const Interval& x) {
  return 6.0 * constants::pi() * sin_enclosure((12.0 * x - 1.0) * constants::pi());
}
Interval kappa_prime_falling(const Interval& x) {
  return -(3.0 * constants::pi() * sin_enclosure((6.0 * x - 1.0) * constants::pi()));
}

// (2 pi)^-2 exp(2 pi^2 x^2)
Interval inverse_gauss_scaled(const Interval& x) {
  return constants::inv_two_pi_sq() * exp_enclosure(constants::two_pi_sq() * sqr(x));
}

Interval formula_on_piece(FunctionTag t, Piece piece, const Interval& x) {
  const bool rising = piece == Piece::kRising;
  if (t == FunctionTag::kThetaMajorant) {
    const Interval inv = 1.0 / x;
    const Interval bracket = rising ? 6.0 * constants::pi() * inv + 2.0 * sqr(inv)
                                    : 3.0 * constants::pi() * inv + (constants::four_pi_sq() / 9.0 - 2.0) * sqr(inv);
    return inverse_gauss_scaled(x) * bracket;
  }
  const Interval k = rising ? kappa_rising(x) : kappa_falling(x);
  switch (t) {
    case FunctionTag::kKappa:
      return k;
    case FunctionTag::kKappaPrime:
      return rising ? kappa_prime_rising(x) : kappa_prime_falling(x);
    case FunctionTag::kPhi:
      return k * inverse_gauss_scaled(x) / sqr(x);
    case FunctionTag::kGamma:
      return k * inverse_gauss_scaled(x) / x;
    case FunctionTag::kTheta: {
      const Interval kp = rising ? kappa_prime_rising(x) : kappa_prime_falling(x);
      return inverse_gauss_scaled(x) * (kp / x + k * (constants::four_pi_sq() - 2.0 / sqr(x)));
    }
    default:
      throw DomainError("not a support-based function");
  }
}

void accumulate(std::optional<Interval>& acc, const Interval& v) {
  acc = acc ? Interval::hull(*acc, v) : v;
}

void accumulate_subdivided(std::optional<Interval>& acc, FunctionTag t, Piece piece, double lo, double hi) {
  const double width = hi - lo;
  const int parts = std::max(1, static_cast<int>(std::ceil(width / kMaxPieceWidth)));
  for (int i = 0; i < parts; ++i) {
    const double a = i == 0 ? lo : lo + width * i / parts;
    const double b = i == parts - 1 ? hi : lo + width * (i + 1) / parts;
    accumulate(acc, formula_on_piece(t, piece, Interval(std::min(a, b), std::max(a, b))));
  }
}

// Enclosure over a box in [0, inf). Each inexact knot is replaced by its
// one-ulp enclosure and adjacent pieces overlap across it.
Interval support_interval_pos(FunctionTag t, const Interval& y) {
  const Interval k1 = Interval::around(1.0 / 12.0);
  const Interval k2 = Interval::around(1.0 / 6.0);
  const Interval k3 = Interval::around(1.0 / 3.0);
  std::optional<Interval> acc;
  if (y.lo() <= k1.hi()) accumulate(acc, Interval(0.0));
  if (y.hi() >= k3.lo()) accumulate(acc, Interval(0.0));
  if (y.hi() >= k1.lo() && y.lo() <= k2.hi()) {
    accumulate_subdivided(acc, t, Piece::kRising, std::max(y.lo(), k1.lo()), std::min(y.hi(), k2.hi()));
  }
  if (y.hi() >= k2.lo() && y.lo() <= k3.hi()) {
    accumulate_subdivided(acc, t, Piece::kFalling, std::max(y.lo(), k2.lo()), std::min(y.hi(), k3.hi()));
  }
  return *acc;
}

Interval smooth_interval(FunctionId f, const Interval& x) {
  const Interval e = exp_enclosure(-(constants::two_pi_sq() * sqr(x)));
  switch (f.tag()) {
    case FunctionTag::kPsi:
      return constants::four_pi_sq() * sqr(x) * e;
    case FunctionTag::kPsiPrime:
      return 2.0 * constants::four_pi_sq() * (x * (1.0 - constants::two_pi_sq() * sqr(x))) * e;
    case FunctionTag::kGmn: {
      if (f.m() > 0 && x.contains_zero()) throw DomainError("G_mn with m > 0 is singular at 0");
      return pow_int(x, -f.m()) * pow_int(1.0 - x, f.n()) * exp_enclosure(constants::four_pi_sq() * x);
    }
    case FunctionTag::kPsiPrimeShiftMajorant: {
      // 2 (2pi)^2 e^{-2pi^2} ((1-x) + 2pi^2 (1-x)^3) e^{4pi^2 x} e^{-2pi^2 x^2},
      // with the three exponentials combined into e^{-2pi^2 (1-x)^2}.
      const Interval u = 1.0 - x;
      return 2.0 * constants::four_pi_sq() * (u + constants::two_pi_sq() * pow_int(u, 3)) *
             exp_enclosure(-(constants::two_pi_sq() * sqr(u)));
    }
    default:
      throw DomainError("not a smooth closed-form function");
  }
}

}  // namespace

FunctionId FunctionId::gmn(int m, int n) {
  if (m < 0 || m > 3 || n < 0 || n > 3) throw DomainError("G_mn requires 0 <= m, n <= 3");
  return FunctionId(FunctionTag::kGmn, m, n);
}

std::string FunctionId::name() const {
  switch (tag_) {
    case FunctionTag::kZero: return "Zero";
    case FunctionTag::kKappa: return "Kappa";
    case FunctionTag::kKappaPrime: return "KappaPrime";
    case FunctionTag::kPsi: return "Psi";
    case FunctionTag::kPsiPrime: return "PsiPrime";
    case FunctionTag::kPhi: return "Phi";
    case FunctionTag::kTheta: return "Theta";
    case FunctionTag::kGamma: return "Gamma";
    case FunctionTag::kGmn: return "G_" + std::to_string(m_) + std::to_string(n_);
    case FunctionTag::kThetaMajorant: return "ThetaMajorant";
    case FunctionTag::kPsiPrimeShiftMajorant: return "PsiPrimeShiftMajorant";
  }
  return "?";
}

Parity parity(FunctionId f) {
  switch (f.tag()) {
    case FunctionTag::kZero:
    case FunctionTag::kKappa:
    case FunctionTag::kPsi:
    case FunctionTag::kPhi:
    case FunctionTag::kTheta:
    case FunctionTag::kThetaMajorant:
      return Parity::kEven;
    case FunctionTag::kKappaPrime:
    case FunctionTag::kPsiPrime:
    case FunctionTag::kGamma:
      return Parity::kOdd;
    default:
      return Parity::kNone;
  }
}

Support support(FunctionId f) {
  if (f.tag() == FunctionTag::kZero) return Support{{}, true};
  if (!support_based(f.tag())) return Support{{}, false};
  const double lo = next_down(1.0 / 12.0);
  const double hi = next_up(1.0 / 3.0);
  return Support{{Interval(-hi, -lo), Interval(lo, hi)}, true};
}

const std::array<double, 7>& knots() {
  static const std::array<double, 7> k{-1.0 / 3.0, -1.0 / 6.0, -1.0 / 12.0, 0.0,
                                       1.0 / 12.0,  1.0 / 6.0,  1.0 / 3.0};
  return k;
}

double eval_point(FunctionId f, double x) {
  require_finite(x);
  const Real t = x;
  const Real sign = x < 0 ? -1 : 1;
  switch (f.tag()) {
    case FunctionTag::kZero:
      return 0.0;
    case FunctionTag::kPsi:
      return static_cast<double>(kFourPiSq * t * t * gauss(t));
    case FunctionTag::kPsiPrime:
      return static_cast<double>(2 * kFourPiSq * (t - kTwoPiSq * t * t * t) * gauss(t));
    case FunctionTag::kGmn: {
      if (f.m() > 0 && x == 0.0) throw DomainError("G_mn with m > 0 is singular at 0");
      return static_cast<double>(std::pow(t, -f.m()) * std::pow(1 - t, f.n()) * std::exp(kFourPiSq * t));
    }
    case FunctionTag::kPsiPrimeShiftMajorant: {
      const Real u = 1 - t;
      return static_cast<double>(2 * kFourPiSq * (u + kTwoPiSq * u * u * u) * gauss(u));
    }
    default:
      break;
  }
  const Real v = support_pos(f.tag(), std::fabs(t));
  return static_cast<double>(parity(f) == Parity::kOdd ? sign * v : v);
}

Interval eval_interval(FunctionId f, const Interval& x) {
  switch (f.tag()) {
    case FunctionTag::kZero:
      return Interval(0.0);
    case FunctionTag::kPsi:
    case FunctionTag::kPsiPrime:
    case FunctionTag::kGmn:
    case FunctionTag::kPsiPrimeShiftMajorant:
      return smooth_interval(f, x);
    default:
      break;
  }
  std::optional<Interval> acc;
  if (x.hi() >= 0.0) {
    accumulate(acc, support_interval_pos(f.tag(), Interval(std::max(x.lo(), 0.0), x.hi())));
  }
  if (x.lo() < 0.0) {
    const Interval mirrored = support_interval_pos(f.tag(), Interval(std::max(-x.hi(), 0.0), -x.lo()));
    accumulate(acc, parity(f) == Parity::kOdd ? -mirrored : mirrored);
  }
  return *acc;
}

double kappa_prime(double x) { return eval_point(FunctionTag::kKappaPrime, x); }
Interval kappa_prime(const Interval& x) { return eval_interval(FunctionTag::kKappaPrime, x); }

double theta_closed_form(double x) { return eval_point(FunctionTag::kTheta, x); }

}  // namespace hatcert
