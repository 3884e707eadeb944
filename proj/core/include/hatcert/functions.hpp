#pragma once

#include <array>
#include <string>
#include <vector>

#include "hatcert/interval.hpp"

namespace hatcert {

enum class FunctionTag {
  kZero,
  kKappa,
  kKappaPrime,
  kPsi,
  kPsiPrime,
  kPhi,
  kTheta,
  kGamma,
  kGmn,
  kThetaMajorant,
  kPsiPrimeShiftMajorant,
};

/// Names one of the closed-form frequency-side functions.
///
///   Psi(x)   = (2 pi x)^2 exp(-2 pi^2 x^2)
///   Kappa    = the even sin^2 / cos^2 double bump on [1/12, 1/3]
///   Phi      = Kappa / Psi,  Theta(x) = x Phi'(x),  Gamma(x) = x Phi(x)
///   Gmn(x)   = x^-m (1-x)^n exp(4 pi^2 x),  0 <= m, n <= 3
///
/// ThetaMajorant is the piecewise majorant of |Theta| on the support and
/// PsiPrimeShiftMajorant the majorant of |Psi'(1-x)| for x < 1. Zero is the
/// identically vanishing function.
class FunctionId {
 public:
  constexpr FunctionId(FunctionTag tag) : tag_(tag) {}  // NOLINT(implicit)

  /// Throws DomainError unless 0 <= m, n <= 3.
  static FunctionId gmn(int m, int n);

  FunctionTag tag() const { return tag_; }
  int m() const { return m_; }
  int n() const { return n_; }
  std::string name() const;

  friend bool operator==(const FunctionId&, const FunctionId&) = default;

 private:
  constexpr FunctionId(FunctionTag tag, int m, int n) : tag_(tag), m_(m), n_(n) {}

  FunctionTag tag_;
  int m_ = 0;
  int n_ = 0;
};

enum class Parity { kEven, kOdd, kNone };

/// Closed pieces on which the function may be nonzero. Piece endpoints are
/// widened outward so each piece contains the exact real support.
struct Support {
  std::vector<Interval> pieces;
  bool compact = false;
};

Parity parity(FunctionId f);
Support support(FunctionId f);

/// Piecewise knots {0, +-1/12, +-1/6, +-1/3}, each rounded to nearest.
const std::array<double, 7>& knots();

/// Pointwise closed-form value, computed in extended precision and rounded.
/// Phi, Theta, Gamma are exactly 0 off the support of Kappa.
double eval_point(FunctionId f, double x);

/// Enclosure of {f(t) : t in x}. The box is split at the knots (with
/// overlapping pieces around each inexact knot) and wide pieces are further
/// subdivided into equal parts before enclosure.
Interval eval_interval(FunctionId f, const Interval& x);

double kappa_prime(double x);
Interval kappa_prime(const Interval& x);

/// (2 pi)^-2 e^{2 pi^2 x^2} [Kappa'(x)/x + Kappa(x)(4 pi^2 - 2/x^2)] on the
/// support, 0 elsewhere.
double theta_closed_form(double x);

}  // namespace hatcert
