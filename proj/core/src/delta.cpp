#include "hatcert/delta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "parallel.hpp"

namespace hatcert {

namespace {

Interval one_third() { return Interval(1.0) / Interval(3.0); }

// r = e^{1 - pi^2}
Interval ratio() { return exp_enclosure(1.0 - constants::pi_squared()); }

// Prefactor c with |B(l - 1/3)| <= c r^l for l >= 2.
Interval majorant_prefactor(FunctionId b) {
  switch (b.tag()) {
    case FunctionTag::kPsi:
      return constants::four_pi_sq() * 4.0 * exp_enclosure(Interval(-2.0));
    case FunctionTag::kPsiPrime:
      return constants::two_pi_fourth() * 27.0 * exp_enclosure(Interval(-3.0));
    default:
      throw DomainError("tail bound is only available for Psi and PsiPrime, not " + b.name());
  }
}

bool within_admissible_support(const Interval& piece) {
  const double lo = next_down(1.0 / 12.0);
  const double hi = next_up(1.0 / 3.0);
  return (piece.lo() >= lo && piece.hi() <= hi) || (piece.lo() >= -hi && piece.hi() <= -lo);
}

// Double-precision B for the grid estimate; the long double path in
// eval_point is an order of magnitude slower and buys nothing here.
double decay_point(FunctionId b, double x) {
  constexpr double kTwoPiSq = 2.0 * std::numbers::pi * std::numbers::pi;
  const double e = kTwoPiSq * x * x;
  if (e > 800.0) return 0.0;
  const double g = std::exp(-e);
  switch (b.tag()) {
    case FunctionTag::kPsi:
      return 2.0 * e * g;
    case FunctionTag::kPsiPrime:
      return 4.0 * kTwoPiSq * x * (1.0 - e) * g;
    default:
      return eval_point(b, x);
  }
}

}  // namespace

std::string to_string(DeltaMode mode) { return mode == DeltaMode::kRigorous ? "rigorous" : "numeric-grid"; }

HypothesisFailure::HypothesisFailure(std::string hypothesis, const std::string& detail)
    : std::runtime_error("hypothesis '" + hypothesis + "' not certified: " + detail),
      hypothesis_(std::move(hypothesis)) {}

Interval tail_sum_bound_from(FunctionId b, int first_l) {
  if (first_l < 2) throw DomainError("tail majorant holds for l >= 2");
  const Interval c = majorant_prefactor(b);
  const Interval r = ratio();
  // sum_{l >= L} c r^l = c r^L / (1 - r)
  return c * pow_int(r, first_l) / (1.0 - r);
}

Interval tail_sum_bound(FunctionId b) { return tail_sum_bound_from(b, 2); }

Interval certified_tail(FunctionId b, int last_l) {
  if (last_l < 2) throw DomainError("certified_tail needs last_l >= 2");
  Interval sum(0.0);
  for (int l = 2; l <= last_l; ++l) {
    sum = sum + abs(eval_interval(b, Interval(static_cast<double>(l)) - one_third()));
  }
  const Interval rest = tail_sum_bound_from(b, last_l + 1);
  return sum + Interval(0.0, rest.hi());
}

Interval support_range() { return Interval(next_down(1.0 / 12.0), next_up(1.0 / 3.0)); }

DeltaResult delta_bound(const PairSpec& pair, const SearchOptions& opts) {
  DeltaResult out;
  out.pair = pair;
  out.mode = DeltaMode::kRigorous;

  const Support supp = support(pair.a);
  if (!supp.compact) throw HypothesisFailure("support", pair.a.name() + " is not compactly supported");
  for (const auto& piece : supp.pieces) {
    if (!within_admissible_support(piece)) {
      throw HypothesisFailure("support", pair.a.name() + " has support piece " + to_string(piece) +
                                             " outside [-1/3,-1/12] U [1/12,1/3]");
    }
  }
  out.hypotheses.push_back({"support", pair.a.name() + " supported in [-1/3,-1/12] U [1/12,1/3]"});

  for (FunctionId f : {pair.a, pair.b}) {
    if (parity(f) == Parity::kNone) throw HypothesisFailure("evenness", "|" + f.name() + "| is not even");
  }
  out.hypotheses.push_back({"evenness", "|" + pair.a.name() + "| and |" + pair.b.name() + "| even"});

  try {
    // The double nearest 2/3 lies below 2/3, and one more step keeps the ray
    // a superset of [2/3, inf).
    out.certificates.push_back(
        check_monotone_ray(pair.b, Ray(next_down(2.0 / 3.0)), Direction::kDecreasing, opts));
  } catch (const CertificationFailure& e) {
    throw HypothesisFailure("decreasing", e.what());
  } catch (const DomainError& e) {
    throw HypothesisFailure("decreasing", e.what());
  }
  out.hypotheses.push_back({"decreasing", "|" + pair.b.name() + "| decreasing on [2/3, inf)"});

  const FunctionId a = pair.a;
  const FunctionId b = pair.b;
  const Interval range = support_range();
  out.first_term = sup_norm(
      [a, b](const Interval& x) { return eval_interval(a, x) * eval_interval(b, 1.0 - x); }, range, opts, knots());
  out.a_norm = sup_norm(a, range, opts);
  out.tail_term = tail_sum_bound(b);

  const Interval product = Interval(out.a_norm.upper) * out.tail_term;
  out.tail_product = product.hi();
  const Interval two_sqrt2 = 2.0 * constants::sqrt2();
  out.value = (two_sqrt2 * Interval(out.first_term.upper) + two_sqrt2 * product).hi();
  return out;
}

DeltaResult delta_numeric(const PairSpec& pair, int grid_points, int l_cutoff, int workers) {
  if (grid_points < 1000) throw DomainError("delta_numeric needs at least 1000 grid points");
  if (l_cutoff < 2) throw DomainError("delta_numeric needs l_cutoff >= 2");
  const FunctionId a = pair.a;
  const FunctionId b = pair.b;

  DeltaResult out;
  out.pair = pair;
  out.mode = DeltaMode::kNumericGrid;

  std::vector<int> ls;
  for (int l = -l_cutoff; l <= l_cutoff; ++l) {
    if (l != 0) ls.push_back(l);
  }
  out.terms.assign(ls.size(), LTerm{});

  const double step_dilation = (1.0 / 6.0) / (grid_points - 1);
  const double step_support = (1.0 / 3.0 - 1.0 / 12.0) / (grid_points - 1);

  // A at the dilates of every grid point does not depend on l.
  struct Dilate {
    double y;
    double a;
  };
  struct GridPoint {
    std::vector<Dilate> dilates;  // x 2^-j with A(x 2^-j) != 0
    double y = 0.0;               // point of the translated grid, before shifting by l
    double a = 0.0;               // A(y)
  };
  std::vector<GridPoint> grid(2 * static_cast<std::size_t>(grid_points));
  detail::parallel_for(grid.size(), workers, [&](std::size_t idx) {
    const int sign = idx < static_cast<std::size_t>(grid_points) ? 1 : -1;
    const int i = static_cast<int>(idx % grid_points);
    // |x| in [1/6, 1/3] is a fundamental domain for x -> 2x; the dilates
    // x 2^-j inside the support of A have j in [log2(3|x|), log2(12|x|)].
    const double x = sign * (1.0 / 6.0 + i * step_dilation);
    const double ax = std::fabs(x);
    const int j_lo = static_cast<int>(std::ceil(std::log2(3.0 * ax))) - 1;
    const int j_hi = static_cast<int>(std::floor(std::log2(12.0 * ax))) + 1;
    GridPoint& g = grid[idx];
    for (int j = j_lo; j <= j_hi; ++j) {
      const double y = std::ldexp(x, -j);
      const double av = eval_point(a, y);
      if (av != 0.0) g.dilates.push_back({y, av});
    }
    g.y = sign * (1.0 / 12.0 + i * step_support);
    g.a = eval_point(a, g.y);
  });

  detail::parallel_for(ls.size(), workers, [&](std::size_t idx) {
    const int l = ls[idx];
    const double al = std::fabs(static_cast<double>(l));
    double dilation = 0.0;
    double translation = 0.0;
    for (const GridPoint& g : grid) {
      double sum = 0.0;
      for (const Dilate& d : g.dilates) sum += std::fabs(d.a * decay_point(b, d.y - l));
      dilation = std::max(dilation, sum);

      // y = g.y - l has y + l in the support of A. Other dilates y 2^k with
      // y 2^k + l in the support satisfy |y| 2^k in [|l| - 1/3, |l| + 1/3].
      const double y = g.y - l;
      const double ay = std::fabs(y);
      const int k_lo = static_cast<int>(std::floor(std::log2((al - 1.0 / 3.0) / ay))) - 1;
      const int k_hi = static_cast<int>(std::ceil(std::log2((al + 1.0 / 3.0) / ay))) + 1;
      double tsum = 0.0;
      for (int k = k_lo; k <= k_hi; ++k) {
        const double z = std::ldexp(y, k);
        const double av = k == 0 ? g.a : eval_point(a, z + l);
        if (av != 0.0) tsum += std::fabs(av * decay_point(b, z));
      }
      translation = std::max(translation, tsum);
    }
    out.terms[idx] = LTerm{l, dilation, translation, std::sqrt(dilation * translation)};
  });

  double a_max = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    a_max = std::max(a_max, std::fabs(eval_point(a, 1.0 / 12.0 + i * step_support)));
  }

  // For |l| >= 2 each term is at most sqrt2 ||A|| |B(|l| - 1/3)|.
  Interval sum(0.0);
  for (const auto& t : out.terms) sum = sum + Interval(t.term);
  if (a.tag() != FunctionTag::kZero) {
    const Interval rest = 2.0 * constants::sqrt2() * Interval(a_max) * tail_sum_bound_from(b, l_cutoff + 1);
    out.remainder = rest.hi();
  }
  out.value = (sum + Interval(out.remainder)).hi();
  return out;
}

double combine_delta_star(double phi_psi, double theta_psi, double gamma_psiprime) {
  return (Interval(phi_psi) + 2.0 * Interval(theta_psi) + 2.0 * Interval(gamma_psiprime)).hi();
}

DeltaStarResult delta_star(DeltaMode mode, const DeltaStarConfig& config) {
  DeltaStarResult out;
  out.mode = mode;
  const std::array<PairSpec, 3> pairs{kPhiPsi, kThetaPsi, kGammaPsiPrime};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.parts[i] = mode == DeltaMode::kRigorous
                       ? delta_bound(pairs[i], config.search)
                       : delta_numeric(pairs[i], config.grid_points, config.l_cutoff, config.search.workers);
  }
  out.value = combine_delta_star(out.parts[0].value, out.parts[1].value, out.parts[2].value);
  return out;
}

}  // namespace hatcert
