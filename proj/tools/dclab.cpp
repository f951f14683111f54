// dclab command-line front end.
//
// Exit status: 0 when every expectation matched, 1 on a mismatch, 2 on
// any error (bad input, unknown instance, inapplicable check, I/O).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dclab/catalog.hpp"
#include "dclab/errors.hpp"

namespace {

dclab::IndexWindow parse_window(const std::string& text) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) throw dclab::ParseError("window must look like lo:hi, got \"" + text + "\"");
  try {
    std::size_t used = 0;
    const long long lo = std::stoll(text.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument("lo");
    const std::string rest = text.substr(colon + 1);
    const long long hi = std::stoll(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("hi");
    dclab::IndexWindow w{lo, hi};
    if (w.empty()) throw dclab::ParseError("window " + text + " is empty");
    return w;
  } catch (const std::logic_error&) {
    throw dclab::ParseError("window must look like lo:hi, got \"" + text + "\"");
  }
}

std::vector<std::string> split_checks(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct RunFlags {
  std::string instance;
  std::string checks;
  std::string out;
  std::string tol;
  std::string radius;
  std::string window;
  std::uint64_t max_n = 0;
  std::uint64_t k_max = 0;
  std::uint64_t seed = 0;
  std::size_t targets = 0;
  std::size_t ball_pairs = 0;
  std::uint64_t growth_n = 0;
  unsigned threads = 1;
  bool timing = false;
};

int cmd_catalog() {
  for (const auto& name : dclab::catalog_names()) {
    std::cout << name << "\t" << dclab::builtin_instance(name).description << "\n";
  }
  return 0;
}

int cmd_show(const std::string& name) {
  std::cout << dclab::instance_to_json(dclab::resolve_instance(name)).dump(2) << "\n";
  return 0;
}

int cmd_run(const RunFlags& f, CLI::App& run) {
  const dclab::Instance inst = dclab::resolve_instance(f.instance);
  dclab::RunParameters p = inst.parameters;
  if (run.count("--tol")) p.tol = dclab::parse_rational(f.tol);
  if (run.count("--radius")) p.radius = dclab::parse_rational(f.radius);
  if (run.count("--window")) p.window = parse_window(f.window);
  if (run.count("--max-n")) p.max_n = f.max_n;
  if (run.count("--k-max")) p.k_max = f.k_max;
  if (run.count("--seed")) p.seed = f.seed;
  if (run.count("--targets")) p.targets = f.targets;
  if (run.count("--ball-pairs")) p.ball_pairs = f.ball_pairs;
  if (run.count("--growth-n")) p.growth_n = f.growth_n;
  if (const char* env = std::getenv("DCLAB_SEED"); env && *env) {
    try {
      p.seed = std::stoull(env);
    } catch (const std::logic_error&) {
      throw dclab::ParseError(std::string("DCLAB_SEED is not an unsigned integer: ") + env);
    }
  }
  if (sgn(p.tol) <= 0) throw dclab::PreconditionViolation("--tol must be positive");
  if (sgn(p.radius) <= 0) throw dclab::PreconditionViolation("--radius must be positive");
  if (p.k_max == 0) throw dclab::PreconditionViolation("--k-max must be positive");
  p.threads = f.threads == 0 ? 1 : f.threads;
  p.timing = f.timing;

  const dclab::RunReport report = dclab::run_report(inst, split_checks(f.checks), p);
  dclab::write_report(report, f.out);

  for (const auto& [key, verdict] : report.verdicts) {
    std::cout << key << ": " << (verdict ? "pass" : "fail");
    if (auto it = inst.expected.find(key); it != inst.expected.end()) {
      std::cout << " (expected " << (it->second ? "pass" : "fail") << ")";
    }
    std::cout << "\n";
  }
  for (const auto& m : report.mismatches) std::cerr << "mismatch: " << m << "\n";
  std::cout << "status: " << (report.ok() ? "ok" : "mismatch") << "\nreport: " << f.out << "\n";
  return report.ok() ? 0 : 1;
}

int cmd_export_csv(const std::string& report_path, const std::string& out_path, const std::string& check) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) throw dclab::Error("cannot open report " + report_path);
  dclab::Json report;
  try {
    report = dclab::Json::parse(in);
  } catch (const dclab::Json::parse_error& e) {
    throw dclab::ParseError(report_path + ": " + e.what());
  }
  const std::string csv = dclab::export_csv(report, check);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw dclab::Error("cannot write " + out_path);
  out << csv;
  if (!out) throw dclab::Error("write failed for " + out_path);
  return 0;
}

int cmd_gen_fd(std::int64_t dim, const std::string& out) {
  const dclab::Instance inst = dclab::generate_finite_dim_instance(dim);
  dclab::write_json_atomic(dclab::instance_to_json(inst), out);
  std::cout << inst.name;
  for (const auto& flag : inst.flags) std::cout << " [" << flag << "]";
  std::cout << " -> " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dclab: disk orbits, coverage and criterion checks for linear operators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", dclab::kVersion);

  app.add_subcommand("catalog", "List built-in instances");

  auto* show = app.add_subcommand("show", "Print an instance as JSON");
  std::string show_name;
  show->add_option("name", show_name, "Catalog name or instance file")->required();

  auto* run = app.add_subcommand("run", "Run checks on an instance and write a report");
  RunFlags flags;
  run->add_option("--instance", flags.instance, "Catalog name or instance file")->required();
  run->add_option("--checks", flags.checks, "Comma list from coverage,criterion,transitivity,growth,bounded,cone");
  run->add_option("--out", flags.out, "Report path")->required();
  run->add_option("--tol", flags.tol, "Hit tolerance (default 1e-9)");
  run->add_option("--max-n", flags.max_n, "Largest power searched (default 80)");
  run->add_option("--k-max", flags.k_max, "Criterion horizon (default 50)");
  run->add_option("--seed", flags.seed, "Sampling seed (default 42; DCLAB_SEED overrides)");
  run->add_option("--targets", flags.targets, "Number of coverage targets (default 200)");
  run->add_option("--radius", flags.radius, "Target ball radius (default 10)");
  run->add_option("--window", flags.window, "Index window lo:hi (default -9:9)");
  run->add_option("--ball-pairs", flags.ball_pairs, "Transitivity ball pairs (default 50)");
  run->add_option("--growth-n", flags.growth_n, "Growth certificate horizon (default 20)");
  run->add_option("--threads", flags.threads, "Worker threads (default 1)");
  run->add_flag("--timing", flags.timing, "Record wall time in the report");

  auto* csv = app.add_subcommand("export-csv", "Write coverage rows of a report as CSV");
  std::string csv_report;
  std::string csv_out;
  std::string csv_check = "coverage";
  csv->add_option("--report", csv_report, "Report JSON")->required();
  csv->add_option("--out", csv_out, "CSV path")->required();
  csv->add_option("--check", csv_check, "Coverage section, e.g. coverage@2");

  auto* gen = app.add_subcommand("gen-fd", "Write the finite-dimensional instance 2I on C^n");
  std::int64_t gen_dim = 2;
  std::string gen_out;
  gen->add_option("--dim", gen_dim, "Dimension n >= 1")->required();
  gen->add_option("--out", gen_out, "Instance path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("catalog")) return cmd_catalog();
    if (show->parsed()) return cmd_show(show_name);
    if (run->parsed()) return cmd_run(flags, *run);
    if (csv->parsed()) return cmd_export_csv(csv_report, csv_out, csv_check);
    if (gen->parsed()) return cmd_gen_fd(gen_dim, gen_out);
  } catch (const std::exception& e) {
    std::cerr << "dclab: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
