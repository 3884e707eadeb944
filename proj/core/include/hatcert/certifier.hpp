#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

#include "hatcert/functions.hpp"
#include "hatcert/interval.hpp"
#include "hatcert/polynomial.hpp"

namespace hatcert {

using IntervalFunction = std::function<Interval(const Interval&)>;

struct SearchOptions {
  double tol = 1e-4;
  int max_depth = 48;
  /// Worker threads for box evaluation. Never changes results.
  int workers = 1;
};

enum class BoundStatus { kProven, kDepthExhausted };

/// Proven upper bound for sup |f| over a compact domain.
///
/// `upper` is always a valid bound; `status` records whether the search
/// closed every box within `tol` of the witness before `max_depth`.
struct CertifiedBound {
  double upper = 0.0;
  double witness_lower = 0.0;
  long long boxes = 0;
  int max_depth_used = 0;
  BoundStatus status = BoundStatus::kProven;

  bool proven() const { return status == BoundStatus::kProven; }
};

/// Branch and bound for sup |f| over `domain`.
///
/// Boxes are processed level by level as a complete bisection tree. The
/// witness (largest certified lower bound of |f| at a box midpoint) is
/// updated once per level, and a box is closed when its enclosure upper
/// bound is within `tol` of that witness. The result is the maximum over
/// closed (and depth-exhausted) boxes, so it does not depend on the order
/// or the number of workers. `split_points` inside the domain seed the
/// initial partition.
CertifiedBound sup_norm(const IntervalFunction& f, const Interval& domain, const SearchOptions& opts = {},
                        std::span<const double> split_points = {});

CertifiedBound sup_norm(FunctionId f, const Interval& domain, const SearchOptions& opts = {});

enum class Direction { kIncreasing, kDecreasing };

enum class MonotoneMethod {
  kIntervalDerivativeSign,
  kPolynomialFactorShiftTest,
  /// Shift test from a later start plus interval sign search before it.
  kShiftTestWithIntervalPrefix,
};

using MonotoneDomain = std::variant<Interval, Ray>;

std::string to_string(Direction d);
std::string to_string(MonotoneMethod m);
std::string to_string(const MonotoneDomain& d);

/// A machine-checked monotonicity statement. Only the certifier can create
/// one, and only after the proof obligation succeeded.
class MonotoneCertificate {
 public:
  const std::string& function() const { return function_; }
  const MonotoneDomain& domain() const { return domain_; }
  Direction direction() const { return direction_; }
  MonotoneMethod method() const { return method_; }
  /// Smallest certified lower bound of the (sign-normalised) obligation.
  double margin() const { return margin_; }
  long long boxes() const { return boxes_; }

 private:
  MonotoneCertificate(std::string function, MonotoneDomain domain, Direction direction, MonotoneMethod method,
                      double margin, long long boxes)
      : function_(std::move(function)),
        domain_(domain),
        direction_(direction),
        method_(method),
        margin_(margin),
        boxes_(boxes) {}

  friend MonotoneCertificate check_monotone_interval(const std::string&, const IntervalFunction&, const Interval&,
                                                     Direction, const SearchOptions&);
  friend MonotoneCertificate check_monotone_ray(FunctionId, const Ray&, Direction, const SearchOptions&);

  std::string function_;
  MonotoneDomain domain_;
  Direction direction_;
  MonotoneMethod method_;
  double margin_;
  long long boxes_;
};

enum class FailureKind {
  /// Sign could not be resolved within the search budget.
  kInconclusive,
  /// A box was found on which the obligation has the wrong sign.
  kRefuted,
};

class CertificationFailure : public std::runtime_error {
 public:
  CertificationFailure(FailureKind kind, std::string diagnostic, double worst_margin);

  FailureKind kind() const { return kind_; }
  const std::string& diagnostic() const { return diagnostic_; }
  /// Lowest lower bound of the obligation seen in the search (<= 0).
  double worst_margin() const { return worst_margin_; }

 private:
  FailureKind kind_;
  std::string diagnostic_;
  double worst_margin_;
};

/// Certify that a function is monotone on `domain` given an enclosure of a
/// quantity with the same sign as its derivative.
MonotoneCertificate check_monotone_interval(const std::string& name, const IntervalFunction& derivative_sign,
                                            const Interval& domain, Direction direction,
                                            const SearchOptions& opts = {});

/// Same, using the registered derivative obligation of `f`:
/// G_mn uses the log-derivative 4 pi^2 - m/x - n/(1-x); Psi, PsiPrime and
/// Kappa use their closed-form derivatives.
MonotoneCertificate check_monotone_interval(FunctionId f, const Interval& domain, Direction direction,
                                            const SearchOptions& opts = {});

/// f = p(x) exp(-a x^2) with p a polynomial.
struct GaussianFactorForm {
  Polynomial poly;
  Interval decay;
};

/// Factor form for Psi and PsiPrime; throws DomainError otherwise.
GaussianFactorForm gaussian_factor_form(FunctionId f);

/// Certify that |f| is monotone on [ray.lo, inf) for f = p(x) exp(-a x^2).
///
/// With q = p' - 2 a x p (so f' = q exp(-a x^2)), |f| is decreasing when
/// s p >= 0 and s q <= 0 for a fixed sign s. Both polynomial conditions are
/// proved by the shift test; when a shift test fails the ray is split into
/// [lo, lo + R] (interval sign search) and [lo + R, inf) (shift test).
MonotoneCertificate check_monotone_ray(FunctionId f, const Ray& ray, Direction direction,
                                       const SearchOptions& opts = {});

}  // namespace hatcert
