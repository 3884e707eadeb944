#include "hatcert/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "parallel.hpp"

namespace hatcert {

namespace {

struct Box {
  Interval x;
};

// Splits `domain` at the given interior points, in sorted order.
std::vector<Box> initial_boxes(const Interval& domain, std::span<const double> split_points) {
  std::vector<double> cuts;
  for (double c : split_points) {
    if (c > domain.lo() && c < domain.hi()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Box> boxes;
  double lo = domain.lo();
  for (double c : cuts) {
    boxes.push_back({Interval(lo, c)});
    lo = c;
  }
  boxes.push_back({Interval(lo, domain.hi())});
  return boxes;
}

bool splittable(const Interval& x) {
  const double m = x.mid();
  return m > x.lo() && m < x.hi();
}

void validate(const SearchOptions& opts) {
  if (!(opts.tol > 0.0) || !std::isfinite(opts.tol)) throw DomainError("tolerance must be positive and finite");
  if (opts.max_depth < 0) throw DomainError("max_depth must be nonnegative");
}

std::string describe_box(const Interval& x) {
  std::ostringstream s;
  s.precision(17);
  s << '[' << x.lo() << ", " << x.hi() << ']';
  return s.str();
}

struct SignSearch {
  double margin = std::numeric_limits<double>::infinity();
  long long boxes = 0;
};

// Proves g > 0 on `domain` by bisection. Throws CertificationFailure with
// kRefuted if some box has g < 0 throughout, kInconclusive if boxes remain
// undecided at max_depth.
SignSearch prove_positive(const std::string& what, const IntervalFunction& g, const Interval& domain,
                          const SearchOptions& opts) {
  validate(opts);
  SignSearch out;
  double worst = std::numeric_limits<double>::infinity();
  // Smallest midpoint value seen so far; positive boxes are refined until
  // their lower bound is within tol of it, so the margin is sharp.
  double witness = std::numeric_limits<double>::infinity();
  std::vector<Box> level{{domain}};
  std::vector<Interval> values;
  std::vector<double> midpoint_hi;
  for (int depth = 0; !level.empty(); ++depth) {
    values.assign(level.size(), Interval(0.0));
    midpoint_hi.assign(level.size(), 0.0);
    detail::parallel_for(level.size(), opts.workers, [&](std::size_t i) {
      values[i] = g(level[i].x);
      midpoint_hi[i] = g(Interval(level[i].x.mid())).hi();
    });
    out.boxes += static_cast<long long>(level.size());
    for (double w : midpoint_hi) witness = std::min(witness, w);
    std::vector<Box> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const Interval& v = values[i];
      worst = std::min(worst, v.lo());
      const bool can_split = depth < opts.max_depth && splittable(level[i].x);
      if (v.lo() > 0.0 && (v.lo() >= witness - opts.tol || !can_split)) {
        out.margin = std::min(out.margin, v.lo());
        continue;
      }
      if (v.hi() < 0.0) {
        throw CertificationFailure(FailureKind::kRefuted,
                                   what + ": obligation negative on " + describe_box(level[i].x), worst);
      }
      if (!can_split) {
        throw CertificationFailure(FailureKind::kInconclusive,
                                   what + ": sign unresolved on " + describe_box(level[i].x), worst);
      }
      const double m = level[i].x.mid();
      next.push_back({Interval(level[i].x.lo(), m)});
      next.push_back({Interval(m, level[i].x.hi())});
    }
    level = std::move(next);
  }
  return out;
}

struct RayProof {
  double margin = 0.0;
  long long boxes = 0;
  bool used_prefix = false;
};

// Proves p >= 0 on [a, inf), strictly positive coefficients after the shift
// (or strictly positive values on the compact prefix).
RayProof prove_nonnegative_on_ray(const std::string& what, const Polynomial& p, double a,
                                  const SearchOptions& opts) {
  const ShiftTest direct = shift_test(p, a);
  if (direct.nonnegative) return RayProof{direct.margin, 0, false};

  // Find a later start where the shift test succeeds, then cover the prefix.
  for (int k = 0; k <= 10; ++k) {
    const double start = a + std::ldexp(1.0, k);
    const ShiftTest tail = shift_test(p, start);
    if (!tail.nonnegative) continue;
    const SignSearch prefix =
        prove_positive(what, [&p](const Interval& x) { return p(x); }, Interval(a, start), opts);
    return RayProof{std::min(tail.margin, prefix.margin), prefix.boxes, true};
  }
  std::ostringstream s;
  s << what << ": shift test failed at coefficient " << direct.worst_coefficient
    << " (lower bound " << direct.margin << ") and no later start succeeded";
  throw CertificationFailure(FailureKind::kInconclusive, s.str(), direct.margin);
}

IntervalFunction derivative_obligation(FunctionId f) {
  switch (f.tag()) {
    case FunctionTag::kGmn: {
      const int m = f.m();
      const int n = f.n();
      return [m, n](const Interval& x) {
        Interval v = constants::four_pi_sq();
        if (m > 0) v = v - static_cast<double>(m) / x;
        if (n > 0) v = v - static_cast<double>(n) / (1.0 - x);
        return v;
      };
    }
    case FunctionTag::kPsi:
      return [](const Interval& x) { return eval_interval(FunctionTag::kPsiPrime, x); };
    case FunctionTag::kPsiPrime:
      return [](const Interval& x) {
        // Psi'' = 2 (2pi)^2 (1 - 10 pi^2 x^2 + 8 pi^4 x^4) exp(-2 pi^2 x^2)
        const Interval u = constants::pi_squared() * sqr(x);
        const Interval poly = 1.0 - 10.0 * u + 8.0 * sqr(u);
        return 2.0 * constants::four_pi_sq() * poly * exp_enclosure(-(constants::two_pi_sq() * sqr(x)));
      };
    case FunctionTag::kKappa:
      return [](const Interval& x) { return kappa_prime(x); };
    default:
      throw DomainError("no derivative obligation registered for " + f.name());
  }
}

}  // namespace

CertifiedBound sup_norm(const IntervalFunction& f, const Interval& domain, const SearchOptions& opts,
                        std::span<const double> split_points) {
  validate(opts);
  CertifiedBound out;
  double witness = 0.0;
  double closed_upper = 0.0;
  bool exhausted = false;

  std::vector<Box> level = initial_boxes(domain, split_points);
  std::vector<double> enclosure_hi;
  std::vector<double> midpoint_lo;
  for (int depth = 0; !level.empty(); ++depth) {
    enclosure_hi.assign(level.size(), 0.0);
    midpoint_lo.assign(level.size(), 0.0);
    detail::parallel_for(level.size(), opts.workers, [&](std::size_t i) {
      enclosure_hi[i] = abs(f(level[i].x)).hi();
      midpoint_lo[i] = abs(f(Interval(level[i].x.mid()))).lo();
    });
    out.boxes += static_cast<long long>(level.size());
    out.max_depth_used = depth;
    for (double w : midpoint_lo) witness = std::max(witness, w);

    std::vector<Box> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const double hi = enclosure_hi[i];
      if (hi <= witness + opts.tol) {
        closed_upper = std::max(closed_upper, hi);
      } else if (depth >= opts.max_depth || !splittable(level[i].x)) {
        closed_upper = std::max(closed_upper, hi);
        exhausted = true;
      } else {
        const double m = level[i].x.mid();
        next.push_back({Interval(level[i].x.lo(), m)});
        next.push_back({Interval(m, level[i].x.hi())});
      }
    }
    level = std::move(next);
  }
  out.upper = closed_upper;
  out.witness_lower = std::min(witness, closed_upper);
  out.status = exhausted ? BoundStatus::kDepthExhausted : BoundStatus::kProven;
  return out;
}

CertifiedBound sup_norm(FunctionId f, const Interval& domain, const SearchOptions& opts) {
  return sup_norm([f](const Interval& x) { return eval_interval(f, x); }, domain, opts, knots());
}

std::string to_string(Direction d) { return d == Direction::kIncreasing ? "increasing" : "decreasing"; }

std::string to_string(MonotoneMethod m) {
  switch (m) {
    case MonotoneMethod::kIntervalDerivativeSign: return "interval-derivative-sign";
    case MonotoneMethod::kPolynomialFactorShiftTest: return "polynomial-factor-shift-test";
    case MonotoneMethod::kShiftTestWithIntervalPrefix: return "shift-test-with-interval-prefix";
  }
  return "?";
}

std::string to_string(const MonotoneDomain& d) {
  if (const auto* x = std::get_if<Interval>(&d)) return describe_box(*x);
  std::ostringstream s;
  s.precision(17);
  s << '[' << std::get<Ray>(d).lo << ", inf)";
  return s.str();
}

CertificationFailure::CertificationFailure(FailureKind kind, std::string diagnostic, double worst_margin)
    : std::runtime_error(std::string(kind == FailureKind::kRefuted ? "refuted: " : "inconclusive: ") + diagnostic),
      kind_(kind),
      diagnostic_(std::move(diagnostic)),
      worst_margin_(worst_margin) {}

MonotoneCertificate check_monotone_interval(const std::string& name, const IntervalFunction& derivative_sign,
                                            const Interval& domain, Direction direction,
                                            const SearchOptions& opts) {
  const double s = direction == Direction::kIncreasing ? 1.0 : -1.0;
  const SignSearch r = prove_positive(
      name + " " + to_string(direction), [&](const Interval& x) { return s * derivative_sign(x); }, domain, opts);
  return MonotoneCertificate(name, domain, direction, MonotoneMethod::kIntervalDerivativeSign, r.margin, r.boxes);
}

MonotoneCertificate check_monotone_interval(FunctionId f, const Interval& domain, Direction direction,
                                            const SearchOptions& opts) {
  return check_monotone_interval(f.name(), derivative_obligation(f), domain, direction, opts);
}

GaussianFactorForm gaussian_factor_form(FunctionId f) {
  const Interval zero(0.0);
  switch (f.tag()) {
    case FunctionTag::kPsi:
      return {Polynomial({zero, zero, constants::four_pi_sq()}), constants::two_pi_sq()};
    case FunctionTag::kPsiPrime: {
      const Interval c = 2.0 * constants::four_pi_sq();
      return {Polynomial({zero, c, zero, -(c * constants::two_pi_sq())}), constants::two_pi_sq()};
    }
    default:
      throw DomainError("no Gaussian factor form for " + f.name());
  }
}

MonotoneCertificate check_monotone_ray(FunctionId f, const Ray& ray, Direction direction,
                                       const SearchOptions& opts) {
  validate(opts);
  const GaussianFactorForm form = gaussian_factor_form(f);
  const Polynomial& p = form.poly;
  // f' = q exp(-a x^2) with q = p' - 2 a x p
  const Polynomial q = p.derivative() + -((2.0 * form.decay) * (Polynomial({Interval(0.0), Interval(1.0)}) * p));
  const std::string name = "|" + f.name() + "|";

  // Fix the sign of f on the ray.
  double sign = 1.0;
  RayProof sign_proof;
  try {
    sign_proof = prove_nonnegative_on_ray(name + " sign", p, ray.lo, opts);
  } catch (const CertificationFailure&) {
    sign = -1.0;
    sign_proof = prove_nonnegative_on_ray(name + " sign", -p, ray.lo, opts);
  }

  // |f| increasing <=> sign * q >= 0; decreasing <=> -sign * q >= 0.
  const double s = direction == Direction::kIncreasing ? sign : -sign;
  const RayProof slope_proof = prove_nonnegative_on_ray(name + " " + to_string(direction), Interval(s) * q, ray.lo, opts);

  const bool prefix = sign_proof.used_prefix || slope_proof.used_prefix;
  return MonotoneCertificate(name, ray, direction,
                             prefix ? MonotoneMethod::kShiftTestWithIntervalPrefix
                                    : MonotoneMethod::kPolynomialFactorShiftTest,
                             std::min(sign_proof.margin, slope_proof.margin), sign_proof.boxes + slope_proof.boxes);
}

}  // namespace hatcert
