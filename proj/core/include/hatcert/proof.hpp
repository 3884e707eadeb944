#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hatcert/certifier.hpp"
#include "hatcert/delta.hpp"
#include "hatcert/interval.hpp"

namespace hatcert {

inline constexpr const char* kToolVersion = "1.0.0";

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class RunMode { kRigorous, kNumeric, kBoth };

std::string to_string(RunMode mode);
RunMode parse_run_mode(std::string_view text);

/// Everything that can influence a report. Worker count is deliberately
/// not part of it: it changes speed only.
struct RunConfig {
  double tol = 1e-4;
  int max_depth = 48;
  int grid = 100000;
  int l_cutoff = 20;
  RunMode mode = RunMode::kBoth;
  /// Record wall-clock time per step. Off by default so reports are
  /// byte-reproducible.
  bool timing = false;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct ProofStep {
  std::string id;
  std::string description;
  std::string paper_threshold;  // exact decimal or closed-form expression
  double certified_value = 0.0;
  bool pass = false;
  std::string method;
  double elapsed_ms = 0.0;

  friend bool operator==(const ProofStep&, const ProofStep&) = default;
};

/// A hypothesis certificate issued during the run (monotonicity, support,
/// evenness).
struct CertificateRecord {
  std::string id;
  std::string statement;
  std::string method;

  friend bool operator==(const CertificateRecord&, const CertificateRecord&) = default;
};

struct ProofReport {
  std::string version = kToolVersion;
  RunConfig config;
  std::vector<ProofStep> steps;
  std::optional<double> delta_star_rigorous;
  std::optional<double> delta_star_numeric;
  std::vector<CertificateRecord> certificates;
  bool pass = false;

  friend bool operator==(const ProofReport&, const ProofReport&) = default;
};

struct StepInfo {
  std::string id;
  std::string description;
  std::string threshold;
  bool rigorous;
};

/// All known steps in execution order.
const std::vector<StepInfo>& step_catalog();
std::vector<std::string> step_ids(RunMode mode);

/// Certificates that must be present for an overall pass in `mode`.
std::vector<std::string> required_certificates(RunMode mode);

/// Interval enclosure of a threshold string: a plain decimal, or one of the
/// closed-form expressions used by the catalog.
Interval threshold_enclosure(const std::string& text);

/// Pass iff every step passed and every required certificate is present.
bool verdict(const ProofReport& report);

/// Runs steps on demand and memoises shared sub-results (sup norms, Delta
/// bounds, certificates) so prerequisites execute at most once.
class ProofSession {
 public:
  explicit ProofSession(RunConfig config, int workers = 1);
  ~ProofSession();
  ProofSession(const ProofSession&) = delete;
  ProofSession& operator=(const ProofSession&) = delete;

  /// Throws UsageError for an unknown id.
  ProofStep run(const std::string& id);

  const std::vector<CertificateRecord>& certificates() const;
  std::optional<double> delta_star_rigorous() const;
  std::optional<double> delta_star_numeric() const;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

ProofReport run_all(const RunConfig& config, int workers = 1);
ProofStep run_step(const std::string& id, const RunConfig& config, int workers = 1);

enum class ReportFormat { kJson, kText };

std::string serialize_report(const ProofReport& report, ReportFormat format);
/// Inverse of serialize_report(report, kJson). Throws UsageError on
/// malformed input.
ProofReport parse_report(std::string_view json);

}  // namespace hatcert
