#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "hatcert/delta.hpp"
#include "support/oracles.hpp"

using namespace hatcert;
using std::numbers::pi;

namespace {

// Closed forms evaluated in long double.
long double psi_tail_oracle() {
  const long double p = std::numbers::pi_v<long double>;
  return 4 * p * p * 4 * std::exp(-2 * p * p) / (1 - std::exp(1 - p * p));
}

long double psiprime_tail_oracle() {
  const long double p = std::numbers::pi_v<long double>;
  const long double tp4 = 16 * p * p * p * p;
  return 27 * tp4 * std::exp(-1 - 2 * p * p) / (1 - std::exp(1 - p * p));
}

}  // namespace

TEST_CASE("closed-form tail bounds") {
  const Interval psi = tail_sum_bound(FunctionTag::kPsi);
  CHECK(psi.contains(static_cast<double>(psi_tail_oracle())));
  CHECK(psi.hi() == doctest::Approx(4.2252395e-7).epsilon(1e-7));
  CHECK(psi.width() <= 1e-6 * psi.hi());

  const Interval psip = tail_sum_bound(FunctionTag::kPsiPrime);
  CHECK(psip.contains(static_cast<double>(psiprime_tail_oracle())));
  CHECK(psip.hi() == doctest::Approx(4.142098e-5).epsilon(1e-6));

  CHECK_THROWS_AS(tail_sum_bound(FunctionTag::kPhi), DomainError);
  CHECK_THROWS_AS(tail_sum_bound_from(FunctionTag::kPsi, 1), DomainError);
}

TEST_CASE("partial sums never exceed the tail bound") {
  for (FunctionTag b : {FunctionTag::kPsi, FunctionTag::kPsiPrime}) {
    const double bound = tail_sum_bound(b).hi();
    for (int n = 2; n <= 200; ++n) REQUIRE(testing::psi_term_sum(b, n) <= bound);
  }
  CHECK(testing::psi_term_sum(FunctionTag::kPsi, 50) <= tail_sum_bound(FunctionTag::kPsi).hi());
}

TEST_CASE("per-term majorants") {
  // |Psi(l - 1/3)| <= (2pi)^2 4 e^{-2} r^l and |Psi'(l - 1/3)| <= 27 (2pi)^4 e^{-3} r^l.
  const double r = std::exp(1 - pi * pi);
  for (int l = 2; l <= 6; ++l) {
    const double rl = std::pow(r, l);
    CHECK(std::fabs(eval_point(FunctionTag::kPsi, l - 1.0 / 3.0)) <= 4 * pi * pi * 4 * std::exp(-2.0) * rl);
    CHECK(std::fabs(eval_point(FunctionTag::kPsiPrime, l - 1.0 / 3.0)) <=
          27 * std::pow(2 * pi, 4) * std::exp(-3.0) * rl);
  }
  // The sum from L on shrinks geometrically.
  const double a = tail_sum_bound_from(FunctionTag::kPsi, 5).hi();
  const double b = tail_sum_bound_from(FunctionTag::kPsi, 6).hi();
  CHECK(b / a == doctest::Approx(r).epsilon(1e-10));
}

TEST_CASE("certified tail encloses the true sum") {
  const Interval t = certified_tail(FunctionTag::kPsi);
  CHECK(t.contains(testing::psi_term_sum(FunctionTag::kPsi, 200)));
  CHECK(t.hi() == doctest::Approx(1.687e-22).epsilon(1e-3));
  CHECK(t.hi() < tail_sum_bound(FunctionTag::kPsi).lo());
  const Interval tp = certified_tail(FunctionTag::kPsiPrime);
  CHECK(tp.contains(testing::psi_term_sum(FunctionTag::kPsiPrime, 200)));
  CHECK(tp.hi() < tail_sum_bound(FunctionTag::kPsiPrime).lo());
}

TEST_CASE("rigorous bounds for the three pairs") {
  const DeltaResult phi = delta_bound(kPhiPsi);
  CHECK(phi.value < 0.02);
  CHECK(phi.first_term.proven());
  CHECK(phi.first_term.upper < 0.006);
  CHECK(phi.tail_product < 0.000003);
  CHECK(phi.hypotheses.size() == 3);
  REQUIRE(phi.certificates.size() == 1);
  CHECK(phi.certificates[0].direction() == Direction::kDecreasing);

  const DeltaResult theta = delta_bound(kThetaPsi);
  CHECK(theta.value < 0.09);
  CHECK(theta.first_term.upper < 0.031);
  CHECK(theta.tail_product < 0.000007);

  const DeltaResult gamma = delta_bound(kGammaPsiPrime);
  CHECK(gamma.value < 0.16);
  CHECK(gamma.first_term.upper < 0.055);
  CHECK(gamma.tail_product < 0.00004);

  // The bound is composed exactly from its parts.
  for (const DeltaResult* r : {&phi, &theta, &gamma}) {
    const Interval c = 2.0 * constants::sqrt2();
    const Interval expected = c * Interval(r->first_term.upper) + c * (Interval(r->a_norm.upper) * r->tail_term);
    CHECK(r->value == expected.hi());
  }
}

TEST_CASE("hypotheses gate the bound") {
  // Psi is not compactly supported: no bound.
  try {
    delta_bound({FunctionTag::kPsi, FunctionTag::kPsi});
    FAIL("bound emitted without the support hypothesis");
  } catch (const HypothesisFailure& e) {
    CHECK(e.hypothesis() == "support");
  }
  // G_mn is neither compactly supported nor even.
  CHECK_THROWS_AS(delta_bound({FunctionId::gmn(0, 0), FunctionTag::kPsi}), HypothesisFailure);
  // Kappa is supported correctly, but Phi has no certifiable decreasing tail.
  try {
    delta_bound({FunctionTag::kKappa, FunctionTag::kPhi});
    FAIL("bound emitted without the decreasing hypothesis");
  } catch (const HypothesisFailure& e) {
    CHECK(e.hypothesis() == "decreasing");
  }
}

TEST_CASE("zero analyzer gives a zero bound") {
  const DeltaResult r = delta_bound({FunctionTag::kZero, FunctionTag::kPsi});
  CHECK(r.value == 0.0);
  const DeltaResult n = delta_numeric({FunctionTag::kZero, FunctionTag::kPsi}, 1000, 4);
  CHECK(n.value == 0.0);
}

TEST_CASE("grid estimate") {
  const DeltaResult r = delta_numeric(kPhiPsi, 100000, 20);
  CHECK(r.value == doctest::Approx(0.000544197).epsilon(1e-4));
  CHECK(r.remainder <= 1e-6);
  CHECK(r.remainder > 0.0);
  REQUIRE(r.terms.size() == 40);
  CHECK(r.value <= delta_bound(kPhiPsi).value);

  // |A| and |B| are even, so the l and -l terms agree.
  for (std::size_t i = 0; i < r.terms.size() / 2; ++i) {
    const LTerm& neg = r.terms[i];
    const LTerm& pos = r.terms[r.terms.size() - 1 - i];
    REQUIRE(neg.l == -pos.l);
    CHECK(neg.term == doctest::Approx(pos.term).epsilon(1e-9));
  }

  // A smaller cutoff never exceeds a larger one plus its remainder.
  const DeltaResult small = delta_numeric(kPhiPsi, 100000, 2);
  CHECK(small.value - small.remainder <= r.value);
  CHECK(r.value <= small.value + 1e-15);
  CHECK_THROWS_AS(delta_numeric(kPhiPsi, 10, 20), DomainError);
  CHECK_THROWS_AS(delta_numeric(kPhiPsi, 100000, 1), DomainError);
}

TEST_CASE("grid estimates stay below the rigorous bounds") {
  for (const PairSpec& p : {kPhiPsi, kThetaPsi, kGammaPsiPrime}) {
    for (int grid : {2000, 20000}) {
      INFO(p.name() << " grid " << grid);
      CHECK(delta_numeric(p, grid, 20).value <= delta_bound(p).value);
    }
  }
}

TEST_CASE("Delta* in both modes") {
  const DeltaStarResult rig = delta_star(DeltaMode::kRigorous);
  const DeltaStarResult num = delta_star(DeltaMode::kNumericGrid);
  CHECK(rig.value < 0.52);
  CHECK(num.value < 0.03);
  CHECK(rig.value >= num.value);
  CHECK(num.value == doctest::Approx(0.0209712).epsilon(1e-4));
  CHECK(rig.value == combine_delta_star(rig.parts[0].value, rig.parts[1].value, rig.parts[2].value));
  CHECK(rig.value >= rig.parts[0].value + 2 * rig.parts[1].value + 2 * rig.parts[2].value);

  DeltaStarConfig threaded;
  threaded.search.workers = 4;
  CHECK(delta_star(DeltaMode::kNumericGrid, threaded).value == num.value);
  CHECK(delta_star(DeltaMode::kRigorous, threaded).value == rig.value);
}
