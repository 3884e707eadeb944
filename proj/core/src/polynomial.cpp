#include "hatcert/polynomial.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace hatcert {

Polynomial::Polynomial(std::vector<Interval> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.emplace_back(0.0);
}

Interval Polynomial::operator()(const Interval& x) const {
  Interval acc = coeffs_.back();
  for (int i = degree() - 1; i >= 0; --i) acc = acc * x + coeffs_[i];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (degree() == 0) return Polynomial({Interval(0.0)});
  std::vector<Interval> d;
  d.reserve(coeffs_.size() - 1);
  for (int i = 1; i <= degree(); ++i) d.push_back(Interval(static_cast<double>(i)) * coeffs_[i]);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::shifted(const Interval& a) const {
  std::vector<Interval> c = coeffs_;
  const int n = degree();
  for (int i = 0; i < n; ++i) {
    for (int j = n - 1; j >= i; --j) c[j] = c[j] + a * c[j + 1];
  }
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& p, const Polynomial& q) {
  const std::size_t n = std::max(p.coeffs_.size(), q.coeffs_.size());
  std::vector<Interval> c(n, Interval(0.0));
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i) c[i] = c[i] + p.coeffs_[i];
  for (std::size_t i = 0; i < q.coeffs_.size(); ++i) c[i] = c[i] + q.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& p, const Polynomial& q) {
  std::vector<Interval> c(p.coeffs_.size() + q.coeffs_.size() - 1, Interval(0.0));
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < q.coeffs_.size(); ++j) c[i + j] = c[i + j] + p.coeffs_[i] * q.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial operator*(const Interval& s, const Polynomial& p) {
  std::vector<Interval> c = p.coeffs_;
  for (auto& x : c) x = s * x;
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& p) {
  std::vector<Interval> c = p.coeffs_;
  for (auto& x : c) x = -x;
  return Polynomial(std::move(c));
}

ShiftTest shift_test(const Polynomial& p, double a) {
  const Polynomial s = p.shifted(Interval(a));
  ShiftTest out;
  out.margin = std::numeric_limits<double>::infinity();
  bool any_positive = false;
  for (int i = 0; i <= s.degree(); ++i) {
    const Interval& c = s.coeffs()[i];
    if (c.lo() < out.margin) {
      out.margin = c.lo();
      out.worst_coefficient = i;
    }
    any_positive = any_positive || c.lo() > 0.0;
  }
  out.nonnegative = any_positive && out.margin >= 0.0;
  return out;
}

}  // namespace hatcert
