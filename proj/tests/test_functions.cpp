#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cfloat>
#include <cmath>
#include <numbers>
#include <random>

#include "hatcert/functions.hpp"
#include "support/oracles.hpp"

using namespace hatcert;
using std::numbers::pi;

namespace {

double f(FunctionTag t, double x) { return eval_point(t, x); }

}  // namespace

TEST_CASE("pointwise values") {
  CHECK(f(FunctionTag::kPsi, 0.0) == 0.0);
  CHECK(f(FunctionTag::kKappa, 0.125) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f(FunctionTag::kKappa, 1.0 / 12.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(f(FunctionTag::kKappa, -1.0 / 6.0) == f(FunctionTag::kKappa, 1.0 / 6.0));
  CHECK(f(FunctionTag::kKappa, 1.0 / 6.0) == doctest::Approx(1.0).epsilon(1e-15));

  // kappa(1/6) = 1, so Phi(1/6) = 1 / ((pi/3)^2 e^{-pi^2/18}).
  const double phi_oracle = 1.0 / ((pi / 3) * (pi / 3) * std::exp(-pi * pi / 18));
  CHECK(f(FunctionTag::kPhi, 1.0 / 6.0) == doctest::Approx(phi_oracle).epsilon(1e-14));
  CHECK(f(FunctionTag::kPhi, 1.0 / 6.0) == doctest::Approx(1.577870512786452).epsilon(1e-14));

  // Unique positive critical point of Psi, where it equals 2/e.
  CHECK(f(FunctionTag::kPsi, 1.0 / (pi * std::sqrt(2.0))) == doctest::Approx(2.0 / std::numbers::e).epsilon(1e-15));
  CHECK(f(FunctionTag::kTheta, 1.0 / 12.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("kappa derivative at junctions") {
  CHECK(kappa_prime(1.0 / 12.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(kappa_prime(1.0 / 6.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(kappa_prime(1.0 / 3.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(kappa_prime(0.0) == 0.0);
  CHECK(kappa_prime(0.125) == doctest::Approx(6 * pi).epsilon(1e-15));
  CHECK(kappa_prime(-0.125) == doctest::Approx(-6 * pi).epsilon(1e-15));
  // One-sided formulas agree at 1/6: both sine arguments are multiples of pi.
  const double below = std::nextafter(1.0 / 6.0, 0.0);
  const double above = std::nextafter(1.0 / 6.0, 1.0);
  CHECK(std::fabs(kappa_prime(below)) < 1e-12);
  CHECK(std::fabs(kappa_prime(above)) < 1e-12);
  for (double x = -0.5; x <= 0.5; x += 1e-4) REQUIRE(std::fabs(kappa_prime(x)) <= 6 * pi + 1e-12);
}

TEST_CASE("theta closed form") {
  CHECK(theta_closed_form(1.0 / 12.0) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  // (2pi)^-2 e^{pi^2/18} (4pi^2 - 72) with kappa(1/6) = 1, kappa'(1/6) = 0.
  const double oracle = std::exp(pi * pi / 18) * (4 * pi * pi - 72) / (4 * pi * pi);
  CHECK(theta_closed_form(1.0 / 6.0) == doctest::Approx(oracle).epsilon(1e-13));
  CHECK(theta_closed_form(1.0 / 6.0) == doctest::Approx(-1.425412385867761).epsilon(1e-13));

  const double x = 0.1;
  const double majorant = std::exp(2 * pi * pi * x * x) / (4 * pi * pi) * (6 * pi / x + 2 / (x * x));
  CHECK(std::fabs(theta_closed_form(x)) <= majorant);
}

TEST_CASE("theta majorant holds across the support") {
  for (int i = 0; i <= 4000; ++i) {
    const double x = 1.0 / 12.0 + (1.0 / 3.0 - 1.0 / 12.0) * i / 4000.0;
    INFO("x = " << x);
    REQUIRE(std::fabs(f(FunctionTag::kTheta, x)) <= f(FunctionTag::kThetaMajorant, x) * (1 + 1e-15));
  }
}

TEST_CASE("non-finite input is rejected") {
  CHECK_THROWS_AS(eval_point(FunctionTag::kPsi, NAN), DomainError);
  CHECK_THROWS_AS(eval_point(FunctionTag::kPhi, INFINITY), DomainError);
  CHECK_THROWS_AS(FunctionId::gmn(4, 0), DomainError);
  CHECK_THROWS_AS(FunctionId::gmn(0, -1), DomainError);
  CHECK_THROWS_AS(eval_point(FunctionId::gmn(1, 0), 0.0), DomainError);
}

TEST_CASE("support and parity metadata") {
  for (FunctionTag t : {FunctionTag::kKappa, FunctionTag::kPhi, FunctionTag::kTheta, FunctionTag::kGamma}) {
    const Support s = support(t);
    REQUIRE(s.compact);
    const Interval pos(std::nextafter(1.0 / 12.0, 0.0), std::nextafter(1.0 / 3.0, 1.0));
    bool covers_pos = false, covers_neg = false;
    for (const Interval& p : s.pieces) {
      CHECK((pos.contains(p) || (-pos).contains(p)));
      covers_pos = covers_pos || p.contains(Interval(1.0 / 12.0, 1.0 / 3.0));
      covers_neg = covers_neg || p.contains(Interval(-1.0 / 3.0, -1.0 / 12.0));
    }
    CHECK(covers_pos);
    CHECK(covers_neg);
  }
  CHECK_FALSE(support(FunctionTag::kPsi).compact);
  CHECK(parity(FunctionTag::kPsi) == Parity::kEven);
  CHECK(parity(FunctionTag::kPsiPrime) == Parity::kOdd);
  CHECK(parity(FunctionTag::kKappaPrime) == Parity::kOdd);
  CHECK(parity(FunctionTag::kGamma) == Parity::kOdd);
  CHECK(parity(FunctionId::gmn(1, 1)) == Parity::kNone);
}

TEST_CASE("evenness of |f|") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(0.0, 1.5);
  for (int i = 0; i < 20000; ++i) {
    const double x = pos(rng);
    for (FunctionTag t : {FunctionTag::kKappa, FunctionTag::kPsi, FunctionTag::kPhi, FunctionTag::kTheta,
                          FunctionTag::kGamma}) {
      REQUIRE(std::fabs(f(t, -x)) == std::fabs(f(t, x)));
    }
    REQUIRE(f(FunctionTag::kPsiPrime, -x) == -f(FunctionTag::kPsiPrime, x));
  }
}

TEST_CASE("partition of unity") {
  CHECK(testing::partition_of_unity_error(1.0 / 24.0, 2.0 / 3.0, 10000) <= 1e-12);
  for (int i = 0; i <= 10000; ++i) {
    const double x = 1.0 / 12.0 + (1.0 / 3.0 - 1.0 / 12.0) * i / 10000.0;
    const double s = f(FunctionTag::kKappa, x) + f(FunctionTag::kKappa, x / 2) + f(FunctionTag::kKappa, 2 * x);
    REQUIRE(std::fabs(s - 1.0) <= 1e-12);
  }
}

TEST_CASE("Gamma is x Phi and matches its direct closed form") {
  for (double x : testing::support_samples(2000, 1e-6)) {
    const long double kappa = f(FunctionTag::kKappa, x);
    const long double lx = x;
    const long double direct =
        kappa / (4 * std::numbers::pi_v<long double> * std::numbers::pi_v<long double>) / lx *
        std::exp(2 * std::numbers::pi_v<long double> * std::numbers::pi_v<long double> * lx * lx);
    const double g = f(FunctionTag::kGamma, x);
    const double ulp = std::nextafter(std::fabs(g), INFINITY) - std::fabs(g);
    INFO("x = " << x);
    REQUIRE(std::fabs(g - static_cast<double>(direct)) <= 4 * ulp);
    REQUIRE(std::fabs(g - static_cast<double>(lx * f(FunctionTag::kPhi, x))) <= 4 * ulp);
  }
}

TEST_CASE("closed-form derivatives agree with finite differences") {
  const auto phi = [](double x) { return f(FunctionTag::kPhi, x); };
  const auto psi = [](double x) { return f(FunctionTag::kPsi, x); };
  const auto kappa = [](double x) { return f(FunctionTag::kKappa, x); };
  testing::OracleComparison theta, psip, kp;
  for (double x : testing::support_samples(1000, 1e-3)) {
    const double h = 1e-4;
    testing::compare(theta, f(FunctionTag::kTheta, x), x * testing::central_difference(phi, x, h), x, DBL_MIN);
    testing::compare(psip, f(FunctionTag::kPsiPrime, x), testing::central_difference(psi, x, h), x, DBL_MIN);
    testing::compare(kp, kappa_prime(x), testing::central_difference(kappa, x, h), x, DBL_MIN);
  }
  INFO("Theta worst at " << theta.at << ", Psi' at " << psip.at << ", kappa' at " << kp.at);
  CHECK(theta.worst_relative <= 1e-6);
  CHECK(psip.worst_relative <= 1e-6);
  CHECK(kp.worst_relative <= 1e-6);
}

TEST_CASE("|B(l + x)| <= |B(l - x)| on the support") {
  for (FunctionTag b : {FunctionTag::kPsi, FunctionTag::kPsiPrime}) {
    for (int l = 1; l <= 10; ++l) {
      for (int i = 0; i <= 1000; ++i) {
        const double x = 1.0 / 12.0 + (1.0 / 3.0 - 1.0 / 12.0) * i / 1000.0;
        REQUIRE(std::fabs(f(b, l + x)) <= std::fabs(f(b, l - x)));
      }
    }
  }
}

TEST_CASE("Psi' shift majorant dominates |Psi'(1 - x)|") {
  for (int i = 0; i <= 2000; ++i) {
    const double x = 1.0 / 12.0 + (1.0 / 3.0 - 1.0 / 12.0) * i / 2000.0;
    REQUIRE(std::fabs(f(FunctionTag::kPsiPrime, 1.0 - x)) <= f(FunctionTag::kPsiPrimeShiftMajorant, x) * (1 + 1e-15));
  }
}

TEST_CASE("interval enclosures") {
  const Interval outside = eval_interval(FunctionTag::kKappa, Interval(1.0 / 3.0, 2.0));
  CHECK(outside.contains(0.0));
  CHECK(outside.width() <= 1e-15);

  const Interval degenerate = eval_interval(FunctionTag::kPsi, Interval(0.1));
  CHECK(degenerate.contains(f(FunctionTag::kPsi, 0.1)));

  CHECK(eval_interval(FunctionTag::kPhi, Interval(1.0 / 12.0, 1.0 / 3.0)).hi() <
        200 / (4 * pi * pi));
}

TEST_CASE("point values lie in degenerate enclosures") {
  std::mt19937_64 rng(17);
  for (FunctionId id : testing::all_function_ids()) {
    const Interval dom = testing::sampling_domain(id);
    std::uniform_real_distribution<double> pos(dom.lo(), dom.hi());
    for (int i = 0; i < 10000; ++i) {
      const double x = pos(rng);
      INFO(id.name() << " at " << x);
      REQUIRE(eval_interval(id, Interval(x)).contains(eval_point(id, x)));
    }
  }
}

TEST_CASE("randomized enclosure containment for every function") {
  const auto t = testing::function_containment(0xf00d, 400, 4);
  INFO(t.first_violation);
  CHECK(t.checks >= 25000);
  CHECK(t.violations == 0);
}

TEST_CASE("enclosures include knot neighbourhoods") {
  // Boxes straddling a knot must cover both pieces.
  for (double k : knots()) {
    for (FunctionTag t : {FunctionTag::kKappa, FunctionTag::kPhi, FunctionTag::kTheta, FunctionTag::kGamma,
                          FunctionTag::kKappaPrime}) {
      const Interval box(k - 1e-3, k + 1e-3);
      const Interval e = eval_interval(t, box);
      for (int i = 0; i <= 200; ++i) {
        const double x = box.lo() + box.width() * i / 200.0;
        REQUIRE(e.contains(eval_point(t, x)));
      }
    }
  }
}
