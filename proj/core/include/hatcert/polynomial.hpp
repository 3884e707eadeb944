#pragma once

#include <vector>

#include "hatcert/interval.hpp"

namespace hatcert {

/// Univariate polynomial with interval coefficients, lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Interval> coeffs);

  const std::vector<Interval>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  Interval operator()(const Interval& x) const;
  Polynomial derivative() const;
  /// Coefficients of p(a + t) as a polynomial in t (Ruffini-Horner shift).
  Polynomial shifted(const Interval& a) const;

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  friend Polynomial operator*(const Interval& c, const Polynomial& p);
  friend Polynomial operator-(const Polynomial& p);

 private:
  std::vector<Interval> coeffs_;
};

/// Outcome of the coefficient test for p >= 0 on [a, inf): every
/// coefficient of p(a + t) has a nonnegative lower bound and at least one
/// is strictly positive. `margin` is the smallest coefficient lower bound.
struct ShiftTest {
  bool nonnegative = false;
  double margin = 0.0;
  int worst_coefficient = -1;
};

ShiftTest shift_test(const Polynomial& p, double a);

}  // namespace hatcert
