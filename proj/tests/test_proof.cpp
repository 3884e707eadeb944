#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "hatcert/proof.hpp"
#include "json.hpp"

using namespace hatcert;

namespace {

// Every step of the chain, in execution order.
// Adding or removing a step must be reflected here.
const std::vector<std::pair<std::string, std::string>> kExpectedSteps{
    {"fact1-psi", "0"},
    {"fact1-psiprime", "0"},
    {"fact2-grid", "0"},
    {"sup-phi", "200*(2*pi)^-2"},
    {"est2", "0.006"},
    {"psiltwo", "(2*pi)^2*4*exp(-2*pi^2)/(1-exp(1-pi^2))"},
    {"phi-tail", "0.000003"},
    {"est3", "0.02"},
    {"sup-theta", "600*(2*pi)^-2"},
    {"est4", "0.000007"},
    {"est5", "0.031"},
    {"est6", "0.09"},
    {"sup-gamma", "30*(2*pi)^-2"},
    {"psiprime-tail", "27*(2*pi)^4*exp(-1-2*pi^2)/(1-exp(1-pi^2))"},
    {"est8", "0.055"},
    {"est9", "0.00004"},
    {"est10", "0.16"},
    {"delta-star-rigorous", "0.52"},
    {"delta-star-numeric", "0.03"},
};

RunConfig rigorous_config() {
  RunConfig c;
  c.mode = RunMode::kRigorous;
  return c;
}

// One full run shared by the tests that only inspect a report.
const ProofReport& default_report() {
  static const ProofReport r = run_all(RunConfig{});
  return r;
}

}  // namespace

TEST_CASE("step catalog covers exactly the expected steps") {
  const auto& catalog = step_catalog();
  REQUIRE(catalog.size() == kExpectedSteps.size());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    CHECK(catalog[i].id == kExpectedSteps[i].first);
    CHECK(catalog[i].threshold == kExpectedSteps[i].second);
    CHECK(seen.insert(catalog[i].id).second);
    CHECK_FALSE(catalog[i].description.empty());
  }
  CHECK(step_ids(RunMode::kBoth).size() == catalog.size());
  CHECK(step_ids(RunMode::kNumeric) == std::vector<std::string>{"delta-star-numeric"});
  CHECK(step_ids(RunMode::kRigorous).size() == catalog.size() - 1);
}

TEST_CASE("threshold enclosures") {
  CHECK(threshold_enclosure("0.006").contains(0.006));
  CHECK(threshold_enclosure("0.006").width() <= 4e-18);
  CHECK(threshold_enclosure("0").contains(0.0));
  CHECK(threshold_enclosure("200*(2*pi)^-2").contains(5.066059182116889));
  CHECK(threshold_enclosure("600*(2*pi)^-2").contains(15.198177546350666));
  CHECK(threshold_enclosure("30*(2*pi)^-2").contains(0.7599088773175333));
  CHECK(threshold_enclosure("(2*pi)^2*4*exp(-2*pi^2)/(1-exp(1-pi^2))").hi() ==
        doctest::Approx(4.2252395e-7).epsilon(1e-7));
  CHECK(threshold_enclosure("27*(2*pi)^4*exp(-1-2*pi^2)/(1-exp(1-pi^2))").hi() ==
        doctest::Approx(4.142098e-5).epsilon(1e-6));
  CHECK_THROWS_AS(threshold_enclosure("1e-3"), UsageError);
  CHECK_THROWS_AS(threshold_enclosure("pi"), UsageError);
}

TEST_CASE("run modes parse and print") {
  CHECK(parse_run_mode("rigorous") == RunMode::kRigorous);
  CHECK(parse_run_mode("numeric") == RunMode::kNumeric);
  CHECK(parse_run_mode("both") == RunMode::kBoth);
  CHECK(to_string(RunMode::kNumeric) == "numeric");
  CHECK_THROWS_AS(parse_run_mode("fast"), UsageError);
}

TEST_CASE("default run passes every step") {
  const ProofReport& r = default_report();
  CHECK(r.pass);
  CHECK(r.version == kToolVersion);
  REQUIRE(r.steps.size() == kExpectedSteps.size());
  for (const auto& s : r.steps) {
    INFO(s.id << " = " << s.certified_value);
    CHECK(s.pass);
    CHECK(s.certified_value < threshold_enclosure(s.paper_threshold).lo());
    CHECK(s.elapsed_ms == 0.0);
  }
  REQUIRE(r.delta_star_rigorous.has_value());
  REQUIRE(r.delta_star_numeric.has_value());
  CHECK(*r.delta_star_rigorous < 0.52);
  CHECK(*r.delta_star_numeric < 0.03);
  CHECK(*r.delta_star_rigorous >= *r.delta_star_numeric);
  CHECK(r.certificates.size() == required_certificates(RunMode::kRigorous).size());
}

TEST_CASE("single steps") {
  const ProofStep est2 = run_step("est2", rigorous_config());
  CHECK(est2.pass);
  CHECK(est2.certified_value < 0.006);
  CHECK(est2.paper_threshold == "0.006");

  try {
    run_step("bogus", RunConfig{});
    FAIL("unknown id accepted");
  } catch (const UsageError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bogus") != std::string::npos);
    CHECK(msg.find("est10") != std::string::npos);
  }
}

TEST_CASE("fact2 issues sixteen certificates") {
  ProofSession session(rigorous_config());
  const ProofStep s = session.run("fact2-grid");
  CHECK(s.pass);
  CHECK(s.certified_value == doctest::Approx(-0.2057).epsilon(1e-3));
  int fact2 = 0;
  for (const auto& c : session.certificates()) {
    if (c.id.rfind("fact2-", 0) == 0) ++fact2;
  }
  CHECK(fact2 == 16);
  CHECK(s.method.find("16/16") != std::string::npos);
}

TEST_CASE("prerequisites run once and are shared") {
  ProofSession session(rigorous_config());
  const ProofStep est3 = session.run("est3");
  CHECK(est3.pass);
  const std::size_t after_first = session.certificates().size();
  CHECK(after_first > 0);
  session.run("est2");
  session.run("phi-tail");
  CHECK(session.certificates().size() == after_first);
  CHECK_FALSE(session.delta_star_rigorous().has_value());
}

TEST_CASE("report round-trips through JSON") {
  const ProofReport& r = default_report();
  const std::string json = serialize_report(r, ReportFormat::kJson);
  CHECK(parse_report(json) == r);
  CHECK(serialize_report(parse_report(json), ReportFormat::kJson) == json);

  const auto j = nlohmann::json::parse(json);
  CHECK(j.contains("version"));
  CHECK(j.contains("config"));
  CHECK(j.at("steps").at(4).at("id") == "est2");
  CHECK(j.at("steps").at(4).at("paper_threshold") == "0.006");
  CHECK(json.find("\"paper_threshold\": \"0.006\"") != std::string::npos);
  CHECK(json.back() == '\n');

  CHECK_THROWS_AS(parse_report("{"), UsageError);
  CHECK_THROWS_AS(parse_report(R"({"version": "1"})"), UsageError);
}

TEST_CASE("partial modes leave the other value null") {
  RunConfig c;
  c.mode = RunMode::kNumeric;
  const ProofReport r = run_all(c);
  CHECK(r.pass);
  CHECK_FALSE(r.delta_star_rigorous.has_value());
  CHECK(r.certificates.empty());
  const std::string json = serialize_report(r, ReportFormat::kJson);
  CHECK(nlohmann::json::parse(json).at("delta_star").at("rigorous").is_null());
  CHECK(parse_report(json) == r);
}

TEST_CASE("identical configurations give identical bytes") {
  const RunConfig c = rigorous_config();
  const std::string a = serialize_report(run_all(c, 1), ReportFormat::kJson);
  const std::string b = serialize_report(run_all(c, 1), ReportFormat::kJson);
  const std::string t = serialize_report(run_all(c, 3), ReportFormat::kJson);
  CHECK(a == b);
  CHECK(a == t);
}

TEST_CASE("deleting any required certificate flips the verdict") {
  const ProofReport& full = default_report();
  REQUIRE(verdict(full));
  for (const auto& id : required_certificates(RunMode::kBoth)) {
    ProofReport r = full;
    const auto n = std::erase_if(r.certificates, [&](const CertificateRecord& c) { return c.id == id; });
    REQUIRE(n == 1);
    INFO(id);
    CHECK_FALSE(verdict(r));
  }
  ProofReport failed_step = full;
  failed_step.steps[7].pass = false;
  CHECK_FALSE(verdict(failed_step));
  ProofReport empty = full;
  empty.steps.clear();
  CHECK_FALSE(verdict(empty));
}

TEST_CASE("an under-resourced search fails without aborting") {
  RunConfig c = rigorous_config();
  c.max_depth = 1;
  const ProofReport r = run_all(c);
  CHECK_FALSE(r.pass);
  CHECK(r.steps.size() == step_ids(RunMode::kRigorous).size());
  const auto failed = std::count_if(r.steps.begin(), r.steps.end(), [](const ProofStep& s) { return !s.pass; });
  CHECK(failed > 0);
  for (const auto& s : r.steps) {
    if (!s.pass) CHECK_FALSE(s.method.empty());
  }
}

TEST_CASE("invalid configurations are usage errors") {
  RunConfig c;
  c.tol = 0.0;
  CHECK_THROWS_AS(run_all(c), UsageError);
  c = RunConfig{};
  c.grid = 10;
  CHECK_THROWS_AS(run_all(c), UsageError);
  c = RunConfig{};
  c.l_cutoff = 1;
  CHECK_THROWS_AS(run_step("est2", c), UsageError);
}

TEST_CASE("text report") {
  const std::string text = serialize_report(default_report(), ReportFormat::kText);
  CHECK(text.find("verdict:               PASS") != std::string::npos);
  for (const auto& [id, threshold] : kExpectedSteps) CHECK(text.find(id) != std::string::npos);
}
