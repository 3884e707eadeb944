// hatcert: runs the certified Delta* proof chain and reports the verdict.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "hatcert/proof.hpp"
#include "json.hpp"

namespace {

struct Options {
  std::optional<double> tol;
  std::optional<int> max_depth;
  std::optional<int> grid;
  std::optional<int> l_cutoff;
  std::optional<std::string> mode;
  std::optional<std::string> config_path;
  std::string out_path;
  std::string format = "json";
  bool timing = false;
};

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--tol", o.tol, "Absolute tolerance of the sup-norm search (default 1e-4)");
  cmd->add_option("--max-depth", o.max_depth, "Maximum bisection depth (default 48)");
  cmd->add_option("--grid", o.grid, "Grid points for the numeric estimate (default 100000)");
  cmd->add_option("--l-cutoff", o.l_cutoff, "Largest |l| evaluated directly in numeric mode (default 20)");
  cmd->add_option("--mode", o.mode, "rigorous, numeric or both (default both)")
      ->check(CLI::IsMember({"rigorous", "numeric", "both"}));
  cmd->add_option("--config", o.config_path, "JSON file with any of tol, max_depth, grid, l_cutoff, mode, timing");
  cmd->add_option("--out", o.out_path, "Write the report to this file instead of stdout");
  cmd->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  cmd->add_flag("--timing", o.timing, "Record per-step wall-clock time (makes output non-reproducible)");
}

// File values first, then flags on top.
hatcert::RunConfig resolve_config(const Options& o) {
  hatcert::RunConfig c;
  if (o.config_path) {
    std::ifstream in(*o.config_path);
    if (!in) throw hatcert::UsageError("cannot read config file " + *o.config_path);
    const auto j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw hatcert::UsageError("config file is not a JSON object");
    c.tol = j.value("tol", c.tol);
    c.max_depth = j.value("max_depth", c.max_depth);
    c.grid = j.value("grid", c.grid);
    c.l_cutoff = j.value("l_cutoff", c.l_cutoff);
    if (j.contains("mode")) c.mode = hatcert::parse_run_mode(j.at("mode").get<std::string>());
    c.timing = j.value("timing", c.timing);
  }
  if (o.tol) c.tol = *o.tol;
  if (o.max_depth) c.max_depth = *o.max_depth;
  if (o.grid) c.grid = *o.grid;
  if (o.l_cutoff) c.l_cutoff = *o.l_cutoff;
  if (o.mode) c.mode = hatcert::parse_run_mode(*o.mode);
  if (o.timing) c.timing = true;
  return c;
}

int worker_count() {
  const char* env = std::getenv("HATCERT_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) throw hatcert::UsageError("HATCERT_THREADS must be a positive integer");
  return static_cast<int>(n);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hatcert::UsageError("cannot write " + path);
  out << text;
}

std::string render_step(const hatcert::ProofStep& s, const std::string& format) {
  if (format == "json") {
    nlohmann::ordered_json j{{"id", s.id},
                             {"description", s.description},
                             {"paper_threshold", s.paper_threshold},
                             {"certified_value", s.certified_value},
                             {"pass", s.pass},
                             {"method", s.method},
                             {"elapsed_ms", s.elapsed_ms}};
    return j.dump(2) + "\n";
  }
  std::ostringstream o;
  o.precision(6);
  o << s.id << ": " << s.certified_value << " < " << s.paper_threshold << "  " << (s.pass ? "pass" : "FAIL")
    << "  [" << s.method << "]\n";
  return o.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified bounds for the Mexican hat Delta* constant"};
  app.require_subcommand(1);

  Options run_opts;
  auto* run_all_cmd = app.add_subcommand("run-all", "Run every proof step and print the report");
  add_run_options(run_all_cmd, run_opts);

  Options step_opts;
  std::string step_id;
  auto* step_cmd = app.add_subcommand("step", "Run one step together with its prerequisites");
  step_cmd->add_option("id", step_id, "Step id (see list-steps)")->required();
  add_run_options(step_cmd, step_opts);

  app.add_subcommand("list-steps", "List step ids, thresholds and descriptions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every other parse failure is a usage error.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("list-steps")) {
      for (const auto& s : hatcert::step_catalog()) {
        std::cout << s.id << "\t" << s.threshold << "\t" << s.description << "\n";
      }
      return 0;
    }
    const int workers = worker_count();
    if (app.got_subcommand(run_all_cmd)) {
      const auto report = hatcert::run_all(resolve_config(run_opts), workers);
      const auto format = run_opts.format == "json" ? hatcert::ReportFormat::kJson : hatcert::ReportFormat::kText;
      emit(hatcert::serialize_report(report, format), run_opts.out_path);
      return report.pass ? 0 : 1;
    }
    const auto step = hatcert::run_step(step_id, resolve_config(step_opts), workers);
    emit(render_step(step, step_opts.format), step_opts.out_path);
    return step.pass ? 0 : 1;
  } catch (const hatcert::UsageError& e) {
    std::cerr << "hatcert: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "hatcert: " << e.what() << "\n";
    return 3;
  }
}
