#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "hatcert/certifier.hpp"
#include "hatcert/functions.hpp"
#include "hatcert/interval.hpp"

namespace hatcert {

/// Analyzer/synthesizer pair for the Delta functional: `a` fills the
/// compactly supported slot, `b` the decaying slot.
struct PairSpec {
  FunctionId a;
  FunctionId b;

  std::string name() const { return "(" + a.name() + ", " + b.name() + ")"; }
  friend bool operator==(const PairSpec&, const PairSpec&) = default;
};

inline constexpr PairSpec kPhiPsi{FunctionTag::kPhi, FunctionTag::kPsi};
inline constexpr PairSpec kThetaPsi{FunctionTag::kTheta, FunctionTag::kPsi};
inline constexpr PairSpec kGammaPsiPrime{FunctionTag::kGamma, FunctionTag::kPsiPrime};

enum class DeltaMode { kRigorous, kNumericGrid };

std::string to_string(DeltaMode mode);

struct HypothesisRecord {
  std::string name;
  std::string detail;
};

/// Thrown by delta_bound when a hypothesis cannot be certified; no bound
/// is produced in that case.
class HypothesisFailure : public std::runtime_error {
 public:
  HypothesisFailure(std::string hypothesis, const std::string& detail);
  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

struct LTerm {
  int l = 0;
  double dilation_norm = 0.0;     // || sum_j |A(x 2^-j) B(x 2^-j - l)| ||
  double translation_norm = 0.0;  // || sum_j |A(x 2^-j + l) B(x 2^-j)| ||
  double term = 0.0;              // sqrt of the product
};

struct DeltaResult {
  PairSpec pair{FunctionTag::kZero, FunctionTag::kZero};
  DeltaMode mode = DeltaMode::kRigorous;
  /// Rigorous: proven upper bound for Delta(A, B). NumericGrid: estimate.
  double value = 0.0;

  // Rigorous mode.
  CertifiedBound first_term;   // sup |A(x) B(1 - x)| on [1/12, 1/3]
  CertifiedBound a_norm;       // sup |A| on [1/12, 1/3]
  Interval tail_term{0.0};     // closed-form bound of sum_{l>=2} |B(l - 1/3)|
  double tail_product = 0.0;   // upper bound of ||A|| * tail
  std::vector<MonotoneCertificate> certificates;
  std::vector<HypothesisRecord> hypotheses;

  // NumericGrid mode.
  std::vector<LTerm> terms;    // sorted by l
  double remainder = 0.0;      // bound for |l| > l_cutoff
};

/// Geometric-series bound for sum_{l >= first_l} |B(l - 1/3)|, b in
/// {Psi, PsiPrime}, built from the per-term majorants
///   |Psi(l - 1/3)|  <= (2pi)^2 4 e^{-2} r^l,
///   |Psi'(l - 1/3)| <= 27 (2pi)^4 e^{-3} r^l,   r = e^{1 - pi^2}.
Interval tail_sum_bound_from(FunctionId b, int first_l);

/// sum_{l >= 2}: (2pi)^2 4 e^{-2pi^2}/(1 - e^{1-pi^2}) for Psi and
/// 27 (2pi)^4 e^{-1-2pi^2}/(1 - e^{1-pi^2}) for PsiPrime.
Interval tail_sum_bound(FunctionId b);

/// Enclosure of the true tail sum_{l >= 2} |b(l - 1/3)|: interval sum of
/// the first terms up to `last_l`, plus tail_sum_bound_from(b, last_l + 1).
Interval certified_tail(FunctionId b, int last_l = 50);

/// The compact range [1/12, 1/3], widened outward by one ulp.
Interval support_range();

/// Upper bound
///   Delta(A, B) <= 2 sqrt2 ||A(x) B(1 - x)|| + 2 sqrt2 ||A|| sum_{l>=2} |B(l - 1/3)|
/// (norms over [1/12, 1/3]) after certifying its hypotheses: A supported in
/// +-[1/12, 1/3], |A| and |B| even, |B| decreasing on [2/3, inf).
DeltaResult delta_bound(const PairSpec& pair, const SearchOptions& opts = {});

/// Non-rigorous direct evaluation of Delta(A, B) from its definition. Sup
/// norms are grid maxima over fundamental domains of the dyadic dilation;
/// the contributing j of each grid point are enumerated from the support of
/// A. Terms with |l| > l_cutoff are bounded through the tail majorant.
DeltaResult delta_numeric(const PairSpec& pair, int grid_points = 100000, int l_cutoff = 20, int workers = 1);

struct DeltaStarConfig {
  SearchOptions search;
  int grid_points = 100000;
  int l_cutoff = 20;
};

struct DeltaStarResult {
  DeltaMode mode = DeltaMode::kRigorous;
  double value = 0.0;
  std::array<DeltaResult, 3> parts;  // (Phi,Psi), (Theta,Psi), (Gamma,Psi')
};

/// Delta(Phi,Psi) + 2 Delta(Theta,Psi) + 2 Delta(Gamma,Psi'), summed in
/// interval arithmetic.
DeltaStarResult delta_star(DeltaMode mode, const DeltaStarConfig& config = {});

/// The same combination of three already computed parts.
double combine_delta_star(double phi_psi, double theta_psi, double gamma_psiprime);

}  // namespace hatcert
