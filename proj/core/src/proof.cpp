#include "hatcert/proof.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <limits>
#include <regex>

#include "json.hpp"

namespace hatcert {

namespace {

using Json = nlohmann::ordered_json;

// Value recorded when a step produced no bound at all.
constexpr double kNoBound = std::numeric_limits<double>::max();

const std::array<PairSpec, 3> kPairs{kPhiPsi, kThetaPsi, kGammaPsiPrime};

std::string fmt_value(double v) { return fmt::format("{:.6g}", v); }

std::string bound_method(const CertifiedBound& b) {
  return fmt::format("branch-and-bound ({}, {} boxes, depth {}, witness {})",
                     b.proven() ? "proven" : "depth-exhausted", b.boxes, b.max_depth_used,
                     fmt_value(b.witness_lower));
}

std::string pair_key(const PairSpec& p) { return p.a.name() + "-" + p.b.name(); }

template <typename T>
struct Cached {
  std::optional<T> value;
  std::string error;
  bool done = false;
};

template <typename T, typename Fn>
const Cached<T>& compute_once(Cached<T>& slot, Fn&& fn) {
  if (!slot.done) {
    slot.done = true;
    try {
      slot.value.emplace(fn());
    } catch (const std::exception& e) {
      slot.error = e.what();
    }
  }
  return slot;
}

struct MonotoneOutcome {
  std::vector<MonotoneCertificate> certificates;
  std::vector<std::string> labels;
  double worst_value = -std::numeric_limits<double>::infinity();  // max of negated margins
  std::string failure;
};

struct Evaluation {
  double value = kNoBound;
  std::string method;
};

}  // namespace

struct ProofSession::State {
  RunConfig config;
  SearchOptions opts;
  std::map<std::string, Cached<CertifiedBound>> sup;
  std::map<std::string, Cached<DeltaResult>> pair_bounds;
  std::map<std::string, Cached<Interval>> tail;
  std::map<std::string, std::optional<MonotoneOutcome>> monotone;
  Cached<DeltaStarResult> numeric;
  std::vector<CertificateRecord> certificates;

  void add_certificate(CertificateRecord r) {
    const bool known = std::any_of(certificates.begin(), certificates.end(),
                                   [&](const CertificateRecord& c) { return c.id == r.id; });
    if (!known) certificates.push_back(std::move(r));
  }

  void add_monotone(const std::string& id, const MonotoneCertificate& c) {
    add_certificate({id, c.function() + " " + to_string(c.direction()) + " on " + to_string(c.domain()),
                     to_string(c.method())});
  }

  const MonotoneOutcome& fact1(FunctionId b, const std::string& id) {
    auto& slot = monotone[id];
    if (!slot) {
      MonotoneOutcome out;
      try {
        out.certificates.push_back(check_monotone_ray(b, Ray(next_down(2.0 / 3.0)), Direction::kDecreasing, opts));
        out.worst_value = -out.certificates.back().margin();
        add_monotone(id, out.certificates.back());
      } catch (const CertificationFailure& e) {
        out.worst_value = std::isfinite(e.worst_margin()) ? -e.worst_margin() : kNoBound;
        out.failure = e.what();
      }
      slot = std::move(out);
    }
    return *slot;
  }

  const MonotoneOutcome& fact2() {
    auto& slot = monotone["fact2-grid"];
    if (!slot) {
      MonotoneOutcome out;
      for (int m = 0; m <= 3; ++m) {
        for (int n = 0; n <= 3; ++n) {
          const std::string id = fmt::format("fact2-m{}n{}", m, n);
          try {
            out.certificates.push_back(
                check_monotone_interval(FunctionId::gmn(m, n), support_range(), Direction::kIncreasing, opts));
            out.worst_value = std::max(out.worst_value, -out.certificates.back().margin());
            out.labels.push_back(id);
            add_monotone(id, out.certificates.back());
          } catch (const CertificationFailure& e) {
            out.worst_value =
                std::max(out.worst_value, std::isfinite(e.worst_margin()) ? -e.worst_margin() : kNoBound);
            if (out.failure.empty()) out.failure = id + ": " + e.what();
          }
        }
      }
      slot = std::move(out);
    }
    return *slot;
  }

  const Cached<CertifiedBound>& sup_of(FunctionId f) {
    return compute_once(sup[f.name()], [&] { return sup_norm(f, support_range(), opts); });
  }

  const Cached<DeltaResult>& pair_bound(const PairSpec& pair) {
    const auto& slot = compute_once(pair_bounds[pair_key(pair)], [&] { return delta_bound(pair, opts); });
    if (slot.value) {
      const auto& r = *slot.value;
      add_certificate({"support-" + pair.a.name(), r.hypotheses[0].detail, "structural"});
      add_certificate({"evenness-" + pair_key(pair), r.hypotheses[1].detail, "structural"});
      add_monotone(pair.b.tag() == FunctionTag::kPsi ? "fact1-psi" : "fact1-psiprime", r.certificates.front());
    }
    return slot;
  }

  const Cached<Interval>& tail_of(FunctionId b) {
    return compute_once(tail[b.name()], [&] { return certified_tail(b); });
  }

  const Cached<DeltaStarResult>& numeric_star() {
    return compute_once(numeric, [&] {
      DeltaStarConfig cfg;
      cfg.search = opts;
      cfg.grid_points = config.grid;
      cfg.l_cutoff = config.l_cutoff;
      return delta_star(DeltaMode::kNumericGrid, cfg);
    });
  }

  Evaluation monotone_eval(const MonotoneOutcome& m, std::size_t expected) {
    if (!m.failure.empty()) return {m.worst_value, "failed: " + m.failure};
    std::string method = to_string(m.certificates.front().method());
    if (expected > 1) method = fmt::format("{} ({}/{} certificates)", method, m.certificates.size(), expected);
    return {m.worst_value, method};
  }

  Evaluation sup_eval(FunctionId f) {
    const auto& s = sup_of(f);
    if (!s.value) return {kNoBound, "failed: " + s.error};
    return {s.value->upper, bound_method(*s.value)};
  }

  template <typename Pick>
  Evaluation pair_eval(const PairSpec& pair, Pick&& pick) {
    const auto& s = pair_bound(pair);
    if (!s.value) return {kNoBound, "failed: " + s.error};
    return pick(*s.value);
  }

  Evaluation evaluate(const std::string& id) {
    if (id == "fact1-psi") return monotone_eval(fact1(FunctionTag::kPsi, id), 1);
    if (id == "fact1-psiprime") return monotone_eval(fact1(FunctionTag::kPsiPrime, id), 1);
    if (id == "fact2-grid") return monotone_eval(fact2(), 16);
    if (id == "sup-phi") return sup_eval(FunctionTag::kPhi);
    if (id == "sup-theta") return sup_eval(FunctionTag::kTheta);
    if (id == "sup-gamma") return sup_eval(FunctionTag::kGamma);
    if (id == "psiltwo" || id == "psiprime-tail") {
      const auto& t = tail_of(id == "psiltwo" ? FunctionTag::kPsi : FunctionTag::kPsiPrime);
      if (!t.value) return {kNoBound, "failed: " + t.error};
      return {t.value->hi(), "interval partial sum l=2..50 + geometric remainder"};
    }

    static const std::map<std::string, std::pair<int, int>> pair_steps{
        // id -> (pair index, 0 first term / 1 tail product / 2 full bound)
        {"est2", {0, 0}}, {"phi-tail", {0, 1}}, {"est3", {0, 2}},
        {"est5", {1, 0}}, {"est4", {1, 1}},     {"est6", {1, 2}},
        {"est8", {2, 0}}, {"est9", {2, 1}},     {"est10", {2, 2}},
    };
    if (auto it = pair_steps.find(id); it != pair_steps.end()) {
      const int part = it->second.second;
      return pair_eval(kPairs[it->second.first], [part](const DeltaResult& r) -> Evaluation {
        switch (part) {
          case 0: return {r.first_term.upper, bound_method(r.first_term)};
          case 1: return {r.tail_product, "certified sup norm x closed-form tail, interval product"};
          default: return {r.value, "2 sqrt2 (first term + norm x tail), hypotheses certified"};
        }
      });
    }
    if (id == "delta-star-rigorous") {
      std::array<double, 3> v{};
      for (std::size_t i = 0; i < kPairs.size(); ++i) {
        const auto& s = pair_bound(kPairs[i]);
        if (!s.value) return {kNoBound, "failed: " + s.error};
        v[i] = s.value->value;
      }
      return {combine_delta_star(v[0], v[1], v[2]), "interval sum of certified bounds"};
    }
    if (id == "delta-star-numeric") {
      const auto& s = numeric_star();
      if (!s.value) return {kNoBound, "failed: " + s.error};
      return {s.value->value, fmt::format("non-rigorous grid ({} points, |l| <= {})", config.grid, config.l_cutoff)};
    }
    throw UsageError("unknown step id: " + id);
  }
};

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kRigorous: return "rigorous";
    case RunMode::kNumeric: return "numeric";
    case RunMode::kBoth: return "both";
  }
  return "?";
}

RunMode parse_run_mode(std::string_view text) {
  if (text == "rigorous") return RunMode::kRigorous;
  if (text == "numeric") return RunMode::kNumeric;
  if (text == "both") return RunMode::kBoth;
  throw UsageError("mode must be rigorous, numeric or both");
}

const std::vector<StepInfo>& step_catalog() {
  static const std::vector<StepInfo> catalog{
      {"fact1-psi", "|Psi| decreasing on [2/3, inf); value is the negated certified margin", "0", true},
      {"fact1-psiprime", "|Psi'| decreasing on [2/3, inf); value is the negated certified margin", "0", true},
      {"fact2-grid", "x^-m (1-x)^n exp(4 pi^2 x) increasing on [1/12, 1/3], m, n in 0..3; negated margin", "0",
       true},
      {"sup-phi", "sup |Phi| on [1/12, 1/3]", "200*(2*pi)^-2", true},
      {"est2", "sup |Phi(x) Psi(1 - x)| on [1/12, 1/3]", "0.006", true},
      {"psiltwo", "sum over l >= 2 of |Psi(l - 1/3)|", "(2*pi)^2*4*exp(-2*pi^2)/(1-exp(1-pi^2))", true},
      {"phi-tail", "sup |Phi| times the Psi tail bound", "0.000003", true},
      {"est3", "upper bound for Delta(Phi, Psi)", "0.02", true},
      {"sup-theta", "sup |Theta| on [1/12, 1/3]", "600*(2*pi)^-2", true},
      {"est4", "sup |Theta| times the Psi tail bound", "0.000007", true},
      {"est5", "sup |Theta(x) Psi(1 - x)| on [1/12, 1/3]", "0.031", true},
      {"est6", "upper bound for Delta(Theta, Psi)", "0.09", true},
      {"sup-gamma", "sup |Gamma| on [1/12, 1/3]", "30*(2*pi)^-2", true},
      {"psiprime-tail", "sum over l >= 2 of |Psi'(l - 1/3)|", "27*(2*pi)^4*exp(-1-2*pi^2)/(1-exp(1-pi^2))",
       true},
      {"est8", "sup |Gamma(x) Psi'(1 - x)| on [1/12, 1/3]", "0.055", true},
      {"est9", "sup |Gamma| times the Psi' tail bound", "0.00004", true},
      {"est10", "upper bound for Delta(Gamma, Psi')", "0.16", true},
      {"delta-star-rigorous", "Delta(Phi,Psi) + 2 Delta(Theta,Psi) + 2 Delta(Gamma,Psi'), certified", "0.52",
       true},
      {"delta-star-numeric", "Delta(Phi,Psi) + 2 Delta(Theta,Psi) + 2 Delta(Gamma,Psi'), grid estimate", "0.03",
       false},
  };
  return catalog;
}

std::vector<std::string> step_ids(RunMode mode) {
  std::vector<std::string> ids;
  for (const auto& s : step_catalog()) {
    if (mode == RunMode::kBoth || s.rigorous == (mode == RunMode::kRigorous)) ids.push_back(s.id);
  }
  return ids;
}

std::vector<std::string> required_certificates(RunMode mode) {
  if (mode == RunMode::kNumeric) return {};
  std::vector<std::string> ids{"fact1-psi", "fact1-psiprime"};
  for (int m = 0; m <= 3; ++m) {
    for (int n = 0; n <= 3; ++n) ids.push_back(fmt::format("fact2-m{}n{}", m, n));
  }
  for (const auto& p : kPairs) {
    ids.push_back("support-" + p.a.name());
    ids.push_back("evenness-" + pair_key(p));
  }
  return ids;
}

Interval threshold_enclosure(const std::string& text) {
  using namespace constants;
  const Interval r_term = 1.0 - exp_enclosure(1.0 - pi_squared());
  if (text == "200*(2*pi)^-2") return 200.0 * inv_two_pi_sq();
  if (text == "600*(2*pi)^-2") return 600.0 * inv_two_pi_sq();
  if (text == "30*(2*pi)^-2") return 30.0 * inv_two_pi_sq();
  if (text == "(2*pi)^2*4*exp(-2*pi^2)/(1-exp(1-pi^2))") {
    return two_pi_squared() * 4.0 * exp_enclosure(-two_pi_sq()) / r_term;
  }
  if (text == "27*(2*pi)^4*exp(-1-2*pi^2)/(1-exp(1-pi^2))") {
    return 27.0 * two_pi_fourth() * exp_enclosure(-1.0 - two_pi_sq()) / r_term;
  }
  static const std::regex decimal(R"(^[0-9]+(\.[0-9]+)?$)");
  if (!std::regex_match(text, decimal)) throw UsageError("unrecognised threshold: " + text);
  // strtod rounds to nearest, so one ulp either way encloses the decimal.
  return Interval::around(std::strtod(text.c_str(), nullptr));
}

bool verdict(const ProofReport& report) {
  if (report.steps.empty()) return false;
  for (const auto& s : report.steps) {
    if (!s.pass) return false;
  }
  for (const auto& id : required_certificates(report.config.mode)) {
    const bool present = std::any_of(report.certificates.begin(), report.certificates.end(),
                                     [&](const CertificateRecord& c) { return c.id == id; });
    if (!present) return false;
  }
  return true;
}

ProofSession::ProofSession(RunConfig config, int workers) : state_(std::make_unique<State>()) {
  if (!(config.tol > 0.0)) throw UsageError("tol must be positive");
  if (config.max_depth < 0) throw UsageError("max-depth must be nonnegative");
  if (config.grid < 1000) throw UsageError("grid must be at least 1000");
  if (config.l_cutoff < 2) throw UsageError("l-cutoff must be at least 2");
  state_->config = config;
  state_->opts = SearchOptions{config.tol, config.max_depth, std::max(workers, 1)};
}

ProofSession::~ProofSession() = default;

ProofStep ProofSession::run(const std::string& id) {
  const auto& catalog = step_catalog();
  const auto it = std::find_if(catalog.begin(), catalog.end(), [&](const StepInfo& s) { return s.id == id; });
  if (it == catalog.end()) {
    std::string valid;
    for (const auto& s : catalog) valid += (valid.empty() ? "" : ", ") + s.id;
    throw UsageError("unknown step id '" + id + "'; valid ids: " + valid);
  }
  const auto start = std::chrono::steady_clock::now();
  const Evaluation e = state_->evaluate(id);
  const auto stop = std::chrono::steady_clock::now();

  ProofStep step;
  step.id = it->id;
  step.description = it->description;
  step.paper_threshold = it->threshold;
  step.certified_value = e.value;
  step.pass = e.value < threshold_enclosure(it->threshold).lo();
  step.method = e.method;
  if (state_->config.timing) {
    step.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  }
  return step;
}

const std::vector<CertificateRecord>& ProofSession::certificates() const { return state_->certificates; }

std::optional<double> ProofSession::delta_star_rigorous() const {
  std::array<double, 3> v{};
  for (std::size_t i = 0; i < kPairs.size(); ++i) {
    const auto it = state_->pair_bounds.find(pair_key(kPairs[i]));
    if (it == state_->pair_bounds.end() || !it->second.value) return std::nullopt;
    v[i] = it->second.value->value;
  }
  return combine_delta_star(v[0], v[1], v[2]);
}

std::optional<double> ProofSession::delta_star_numeric() const {
  if (!state_->numeric.value) return std::nullopt;
  return state_->numeric.value->value;
}

ProofReport run_all(const RunConfig& config, int workers) {
  ProofSession session(config, workers);
  ProofReport report;
  report.config = config;
  for (const auto& id : step_ids(config.mode)) report.steps.push_back(session.run(id));
  report.delta_star_rigorous = session.delta_star_rigorous();
  report.delta_star_numeric = session.delta_star_numeric();
  report.certificates = session.certificates();
  report.pass = verdict(report);
  return report;
}

ProofStep run_step(const std::string& id, const RunConfig& config, int workers) {
  ProofSession session(config, workers);
  return session.run(id);
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string to_json(const ProofReport& r) {
  Json j;
  j["version"] = r.version;
  j["config"] = Json{{"tol", r.config.tol},   {"max_depth", r.config.max_depth},
                     {"grid", r.config.grid}, {"l_cutoff", r.config.l_cutoff},
                     {"mode", to_string(r.config.mode)}, {"timing", r.config.timing}};
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    steps.push_back(Json{{"id", s.id},
                         {"description", s.description},
                         {"paper_threshold", s.paper_threshold},
                         {"certified_value", s.certified_value},
                         {"pass", s.pass},
                         {"method", s.method},
                         {"elapsed_ms", s.elapsed_ms}});
  }
  j["steps"] = std::move(steps);
  j["delta_star"] = Json{{"rigorous", optional_number(r.delta_star_rigorous)},
                         {"numeric", optional_number(r.delta_star_numeric)}};
  j["pass"] = r.pass;
  Json certs = Json::array();
  for (const auto& c : r.certificates) {
    certs.push_back(Json{{"id", c.id}, {"statement", c.statement}, {"method", c.method}});
  }
  j["certificates"] = std::move(certs);
  return j.dump(2) + "\n";
}

std::string to_text(const ProofReport& r) {
  std::string out = fmt::format("hatcert {}  tol={} max_depth={} grid={} l_cutoff={} mode={}\n\n", r.version,
                                r.config.tol, r.config.max_depth, r.config.grid, r.config.l_cutoff,
                                to_string(r.config.mode));
  out += fmt::format("{:<20} {:>14}  {:<44} {:<5} {}\n", "step", "certified", "threshold", "pass", "method");
  for (const auto& s : r.steps) {
    out += fmt::format("{:<20} {:>14}  {:<44} {:<5} {}", s.id, fmt_value(s.certified_value), s.paper_threshold,
                       s.pass ? "yes" : "NO", s.method);
    if (r.config.timing) out += fmt::format("  [{:.1f} ms]", s.elapsed_ms);
    out += "\n";
  }
  const auto opt = [](const std::optional<double>& v) { return v ? fmt_value(*v) : std::string("-"); };
  out += fmt::format("\nDelta* rigorous bound: {}\nDelta* grid estimate:  {} (non-rigorous)\n",
                     opt(r.delta_star_rigorous), opt(r.delta_star_numeric));
  out += fmt::format("certificates issued:   {}\n", r.certificates.size());
  out += fmt::format("verdict:               {}\n", r.pass ? "PASS" : "FAIL");
  return out;
}

std::optional<double> read_optional(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string serialize_report(const ProofReport& report, ReportFormat format) {
  return format == ReportFormat::kJson ? to_json(report) : to_text(report);
}

ProofReport parse_report(std::string_view json) {
  try {
    const Json j = Json::parse(json);
    ProofReport r;
    r.version = j.at("version").get<std::string>();
    const Json& c = j.at("config");
    r.config.tol = c.at("tol").get<double>();
    r.config.max_depth = c.at("max_depth").get<int>();
    r.config.grid = c.at("grid").get<int>();
    r.config.l_cutoff = c.at("l_cutoff").get<int>();
    r.config.mode = parse_run_mode(c.at("mode").get<std::string>());
    r.config.timing = c.value("timing", false);
    for (const Json& s : j.at("steps")) {
      r.steps.push_back(ProofStep{s.at("id").get<std::string>(), s.at("description").get<std::string>(),
                                  s.at("paper_threshold").get<std::string>(), s.at("certified_value").get<double>(),
                                  s.at("pass").get<bool>(), s.at("method").get<std::string>(),
                                  s.at("elapsed_ms").get<double>()});
    }
    r.delta_star_rigorous = read_optional(j.at("delta_star").at("rigorous"));
    r.delta_star_numeric = read_optional(j.at("delta_star").at("numeric"));
    r.pass = j.at("pass").get<bool>();
    if (j.contains("certificates")) {
      for (const Json& cr : j.at("certificates")) {
        r.certificates.push_back(CertificateRecord{cr.at("id").get<std::string>(),
                                                   cr.at("statement").get<std::string>(),
                                                   cr.at("method").get<std::string>()});
      }
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace hatcert
