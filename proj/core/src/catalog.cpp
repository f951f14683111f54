#include "dclab/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "dclab/errors.hpp"

namespace dclab {

using detail::require_field;
using detail::require_int;
using detail::require_string;
using detail::require_uint;

namespace {

std::string base_check(const std::string& key) { return key.substr(0, key.find('@')); }

bool known_verdict_key(const std::string& key) {
  const std::string base = base_check(key);
  if (base == "fixtures") return key == base;
  if (std::find(all_checks().begin(), all_checks().end(), base) == all_checks().end()) return false;
  return key == base || base == "coverage";
}

Instance make_flagship() {
  Instance inst{
      "flagship_shift",
      "Bilateral forward shift with weights 3 on n >= 0 and 4 on n < 0, odd-index subspace; its inverse B "
      "drives the criterion with n_k = 2k.",
      OperatorSpec::forward_shift(IndexLattice::integers(), WeightRule::split(3, 4)),
      SubspaceSpec::odd_indices(),
      SupportVector::basis(IndexLattice::integers(), 1),
  };
  const OperatorSpec back = invert(inst.op);
  inst.criterion = CriterionInstance{inst.op, inst.sub, {2, 0}, back, {-9, 9}, 50};
  inst.seed_construction = SeedConstruction{back, 200};
  inst.expected = {{"criterion", true}, {"coverage", true}, {"growth", true}};
  inst.parameters.targets = 16;
  inst.parameters.radius = 1;
  inst.parameters.max_n = 3200;
  return inst;
}

Instance scalar_instance(std::string name, std::string description, std::int64_t dim, ExactComplex k) {
  return Instance{
      std::move(name),
      std::move(description),
      OperatorSpec::scalar(dim, std::move(k)),
      Axis{dim, 0},
      SupportVector::basis(IndexLattice::finite(dim), 0),
  };
}

Instance make_identity() {
  Instance inst{
      "identity_supercyclic",
      "Identity on C^3 with M the first coordinate axis: cone orbits fill M, disk orbits stay in the unit ball.",
      OperatorSpec::identity(IndexLattice::finite(3)),
      Axis{3, 0},
      SupportVector::basis(IndexLattice::finite(3), 0),
  };
  inst.expected = {{"cone", true}, {"coverage", false}, {"transitivity", false}, {"bounded", true}};
  return inst;
}

Instance make_scalar() {
  Instance inst = scalar_instance("scalar_diskcyclic", "2I on C^2 with M the first coordinate axis.", 2, 2);
  inst.expected = {{"coverage", true}, {"cone", true}, {"transitivity", true}, {"growth", true}};
  return inst;
}

Instance make_adjoint() {
  Instance inst =
      scalar_instance("scalar_adjoint", "Adjoint of (1+i)I on C^2, i.e. (1-i)I, with M the first coordinate axis.", 2,
                      1);
  inst.op = adjoint(OperatorSpec::scalar(2, ExactComplex(1, 1)));
  inst.expected = {{"coverage", true}, {"cone", true}};
  return inst;
}

Instance make_inverse() {
  Instance inst = scalar_instance("inverse_halving", "(1/2)I on C^2 with M the first coordinate axis.", 2,
                                  ExactComplex(Rational(1, 2)));
  inst.coverage_radii = {Rational(9, 10), Rational(2)};
  inst.expected = {{"bounded", true}, {"coverage@9/10", true}, {"coverage@2", false}};
  return inst;
}

Instance make_direct_sum() {
  Instance inst{
      "direct_sum_s",
      "S = (2) + I_2 on C^3, the scalar diskcyclic operator on C summed with the identity; N is the first axis.",
      OperatorSpec::direct_sum({OperatorSpec::scalar(1, 2), OperatorSpec::identity(IndexLattice::finite(2))}),
      Axis{3, 0},
      SupportVector::basis(IndexLattice::finite(3), 0),
  };
  inst.expected = {{"coverage", true}};
  return inst;
}

bool has_flag(const Instance& inst, const char* flag) {
  return std::find(inst.flags.begin(), inst.flags.end(), flag) != inst.flags.end();
}

}  // namespace

bool operator==(const Instance& a, const Instance& b) {
  auto same_seed = [](const std::optional<SeedConstruction>& x, const std::optional<SeedConstruction>& y) {
    if (x.has_value() != y.has_value()) return false;
    return !x || (x->back_map == y->back_map && x->spacing == y->spacing);
  };
  return a.name == b.name && a.description == b.description && a.op == b.op && a.sub == b.sub &&
         a.seed_vector == b.seed_vector && a.criterion == b.criterion &&
         same_seed(a.seed_construction, b.seed_construction) && a.coverage_radii == b.coverage_radii &&
         a.expected == b.expected && a.flags == b.flags && a.fixtures == b.fixtures && a.parameters == b.parameters;
}

void validate(const Instance& inst) {
  if (inst.name.empty()) throw InvariantViolation("name", "must not be empty");
  const IndexLattice lat = inst.op.lattice();
  if (!(inst.sub.lattice() == lat)) throw InvariantViolation("sub", "lattice differs from the operator's");
  validate(inst.sub, has_flag(inst, "trivial_subspace"));
  if (!(inst.seed_vector.lattice() == lat)) throw InvariantViolation("seed_vector", "lattice differs from the operator's");
  if (inst.seed_vector.is_zero()) throw InvariantViolation("seed_vector", "must be nonzero");
  if (inst.criterion) {
    try {
      validate(*inst.criterion);
    } catch (const InvariantViolation& e) {
      throw InvariantViolation("criterion/" + e.field(), e.what());
    }
    if (!(inst.criterion->op.lattice() == lat)) throw InvariantViolation("criterion/op", "lattice differs");
  }
  if (inst.seed_construction) {
    if (!(inst.seed_construction->back_map.lattice() == lat))
      throw InvariantViolation("seed_construction/back_map", "lattice differs from the operator's");
    if (inst.seed_construction->spacing == 0) throw InvariantViolation("seed_construction/spacing", "must be positive");
  }
  for (std::size_t k = 0; k < inst.coverage_radii.size(); ++k) {
    if (sgn(inst.coverage_radii[k]) <= 0)
      throw InvariantViolation("coverage_radii/" + std::to_string(k), "radius must be positive");
  }
  for (const auto& [key, value] : inst.expected) {
    if (!known_verdict_key(key)) throw InvariantViolation("expected/" + key, "unknown check");
  }
  for (std::size_t k = 0; k < inst.fixtures.size(); ++k) {
    if (!(inst.fixtures[k].target.lattice() == lat))
      throw InvariantViolation("fixtures/" + std::to_string(k) + "/target", "lattice differs from the operator's");
  }
  const RunParameters& p = inst.parameters;
  if (sgn(p.tol) <= 0) throw InvariantViolation("parameters/tol", "must be positive");
  if (sgn(p.radius) <= 0) throw InvariantViolation("parameters/radius", "must be positive");
  if (p.window.empty()) throw InvariantViolation("parameters/window", "empty window");
  if (p.k_max == 0) throw InvariantViolation("parameters/k_max", "must be positive");
}

std::vector<std::string> catalog_names() {
  return {"flagship_shift", "identity_supercyclic", "scalar_diskcyclic", "scalar_adjoint", "inverse_halving",
          "direct_sum_s"};
}

Instance builtin_instance(const std::string& name) {
  Instance inst = [&] {
    if (name == "flagship_shift") return make_flagship();
    if (name == "identity_supercyclic") return make_identity();
    if (name == "scalar_diskcyclic") return make_scalar();
    if (name == "scalar_adjoint") return make_adjoint();
    if (name == "inverse_halving") return make_inverse();
    if (name == "direct_sum_s") return make_direct_sum();
    throw PreconditionViolation("unknown catalog instance \"" + name + "\"");
  }();
  validate(inst);
  return inst;
}

Instance generate_finite_dim_instance(std::int64_t n) {
  if (n < 1) throw PreconditionViolation("generate_finite_dim_instance: dimension must be positive");
  Instance inst = scalar_instance("fd_" + std::to_string(n), "2I on C^" + std::to_string(n) + " with M = axis 0.", n, 2);
  if (n == 1) {
    inst.flags.push_back("trivial_subspace");
    inst.description += " M is the whole line, so this is plain disk-cyclicity on C.";
  }
  inst.expected = {{"coverage", true}};
  validate(inst);
  return inst;
}

Json parameters_to_json(const RunParameters& p) {
  Json j;
  j["tol"] = rational_to_json(p.tol);
  j["max_n"] = p.max_n;
  j["k_max"] = p.k_max;
  j["window"] = window_to_json(p.window);
  j["seed"] = p.seed;
  j["targets"] = p.targets;
  j["radius"] = rational_to_json(p.radius);
  j["ball_pairs"] = p.ball_pairs;
  j["growth_n"] = p.growth_n;
  return j;
}

RunParameters parameters_from_json(const Json& j, const std::string& path, RunParameters base) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  if (auto it = j.find("tol"); it != j.end()) base.tol = rational_from_json(*it, path + "/tol");
  if (auto it = j.find("max_n"); it != j.end()) base.max_n = require_uint(*it, path + "/max_n");
  if (auto it = j.find("k_max"); it != j.end()) base.k_max = require_uint(*it, path + "/k_max");
  if (auto it = j.find("window"); it != j.end()) base.window = window_from_json(*it, path + "/window");
  if (auto it = j.find("seed"); it != j.end()) base.seed = require_uint(*it, path + "/seed");
  if (auto it = j.find("targets"); it != j.end()) base.targets = require_uint(*it, path + "/targets");
  if (auto it = j.find("radius"); it != j.end()) base.radius = rational_from_json(*it, path + "/radius");
  if (auto it = j.find("ball_pairs"); it != j.end()) base.ball_pairs = require_uint(*it, path + "/ball_pairs");
  if (auto it = j.find("growth_n"); it != j.end()) base.growth_n = require_uint(*it, path + "/growth_n");
  return base;
}

Json instance_to_json(const Instance& inst) {
  Json j;
  j["name"] = inst.name;
  j["description"] = inst.description;
  j["op"] = operator_to_json(inst.op);
  j["sub"] = subspace_to_json(inst.sub);
  j["seed_vector"] = vector_to_json(inst.seed_vector);
  if (inst.criterion) j["criterion"] = criterion_instance_to_json(*inst.criterion);
  if (inst.seed_construction) {
    j["seed_construction"] = {{"back_map", operator_to_json(inst.seed_construction->back_map)},
                              {"spacing", inst.seed_construction->spacing}};
  }
  if (!inst.coverage_radii.empty()) {
    Json radii = Json::array();
    for (const auto& r : inst.coverage_radii) radii.push_back(rational_to_json(r));
    j["coverage_radii"] = std::move(radii);
  }
  Json expected = Json::object();
  for (const auto& [k, v] : inst.expected) expected[k] = v;
  j["expected"] = std::move(expected);
  j["flags"] = inst.flags;
  if (!inst.fixtures.empty()) {
    Json fixtures = Json::array();
    for (const auto& f : inst.fixtures) {
      fixtures.push_back({{"target", vector_to_json(f.target)}, {"n", f.n}, {"alpha", complex_to_json(f.alpha)}});
    }
    j["fixtures"] = std::move(fixtures);
  }
  j["parameters"] = parameters_to_json(inst.parameters);
  return j;
}

Instance instance_from_json(const Json& j) {
  const std::string root;
  Instance inst{
      require_string(require_field(j, "name", root), "/name"),
      j.contains("description") ? require_string(j["description"], "/description") : std::string(),
      operator_from_json(require_field(j, "op", root), "/op"),
      subspace_from_json(require_field(j, "sub", root), "/sub"),
      vector_from_json(require_field(j, "seed_vector", root), "/seed_vector"),
  };
  if (auto it = j.find("criterion"); it != j.end()) inst.criterion = criterion_instance_from_json(*it, "/criterion");
  if (auto it = j.find("seed_construction"); it != j.end()) {
    inst.seed_construction = SeedConstruction{
        operator_from_json(require_field(*it, "back_map", "/seed_construction"), "/seed_construction/back_map"),
        require_uint(require_field(*it, "spacing", "/seed_construction"), "/seed_construction/spacing")};
  }
  if (auto it = j.find("coverage_radii"); it != j.end()) {
    if (!it->is_array()) throw ParseError("/coverage_radii: expected an array");
    for (std::size_t k = 0; k < it->size(); ++k)
      inst.coverage_radii.push_back(rational_from_json((*it)[k], "/coverage_radii/" + std::to_string(k)));
  }
  if (auto it = j.find("expected"); it != j.end()) {
    if (!it->is_object()) throw ParseError("/expected: expected an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_boolean()) throw ParseError("/expected/" + k + ": expected a boolean");
      inst.expected[k] = v.get<bool>();
    }
  }
  if (auto it = j.find("flags"); it != j.end()) {
    if (!it->is_array()) throw ParseError("/flags: expected an array");
    for (std::size_t k = 0; k < it->size(); ++k)
      inst.flags.push_back(require_string((*it)[k], "/flags/" + std::to_string(k)));
  }
  if (auto it = j.find("fixtures"); it != j.end()) {
    if (!it->is_array()) throw ParseError("/fixtures: expected an array");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string p = "/fixtures/" + std::to_string(k);
      const Json& f = (*it)[k];
      WitnessFixture fixture;
      fixture.target = vector_from_json(require_field(f, "target", p), p + "/target");
      fixture.n = require_uint(require_field(f, "n", p), p + "/n");
      const ExactComplex alpha = complex_from_json(require_field(f, "alpha", p), p + "/alpha");
      try {
        fixture.alpha = DiskScalar(alpha);
      } catch (const InvariantViolation& e) {
        throw InvariantViolation(p + "/alpha", "|alpha| > 1");
      }
      inst.fixtures.push_back(std::move(fixture));
    }
  }
  if (auto it = j.find("parameters"); it != j.end()) inst.parameters = parameters_from_json(*it, "/parameters");
  try {
    validate(inst);
  } catch (const InvariantViolation& e) {
    throw InvariantViolation("/" + e.field(), e.what());
  }
  return inst;
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open instance file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Instance resolve_instance(const std::string& name_or_path) {
  const auto names = catalog_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) return builtin_instance(name_or_path);
  if (std::filesystem::exists(name_or_path)) return load_instance(name_or_path);
  throw PreconditionViolation("\"" + name_or_path + "\" is neither a catalog instance nor a file");
}

namespace {

struct RunContext {
  const Instance& inst;
  const RunParameters& params;
  SearchOptions search;
};

SupportVector seed_for(const RunContext& ctx, const std::vector<SupportVector>& targets) {
  if (!ctx.inst.seed_construction) return ctx.inst.seed_vector;
  return seed_from_targets(ctx.inst.op, ctx.inst.seed_construction->back_map, targets,
                           ctx.inst.seed_construction->spacing);
}

std::vector<SupportVector> targets_for(const RunContext& ctx, const Rational& radius) {
  return sample_targets(ctx.inst.sub, radius, ctx.params.targets, ctx.params.window, ctx.params.seed);
}

Json run_coverage(const RunContext& ctx, const Rational& radius, bool& verdict) {
  const auto targets = targets_for(ctx, radius);
  const SupportVector x = seed_for(ctx, targets);
  CoverageReport report = coverage_report(ctx.inst.op, x, ctx.inst.sub, targets, ctx.search, ctx.params.threads);
  verdict = report.passed();
  Json j = to_json(report);
  j["radius"] = rational_to_json(radius);
  j["seed_vector_support"] = x.support_size();
  j["seed_constructed"] = ctx.inst.seed_construction.has_value();
  return j;
}

Json run_cone(const RunContext& ctx, bool& verdict) {
  const auto targets = targets_for(ctx, ctx.params.radius);
  const SupportVector x = seed_for(ctx, targets);
  Json rows = Json::array();
  std::size_t hits = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    ConeOrbitSearch s = cone_orbit_witness(ctx.inst.op, x, targets[i], ctx.search);
    hits += s.found ? 1 : 0;
    Json row = to_json(s);
    row["index"] = i;
    rows.push_back(std::move(row));
  }
  verdict = hits == targets.size();
  Json j;
  j["passed"] = verdict;
  j["targets"] = targets.size();
  j["hits"] = hits;
  j["rows"] = std::move(rows);
  return j;
}

Json run_transitivity(const RunContext& ctx, bool& verdict) {
  const auto pairs =
      sample_ball_pairs(ctx.inst.sub, ctx.params.radius, ctx.params.ball_pairs, ctx.params.window, ctx.params.seed);
  TransitivityOptions options;
  options.max_n = ctx.params.max_n;
  options.window = ctx.params.window;
  Json rows = Json::array();
  std::size_t found = 0;
  std::size_t coupled = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    TransitivityResult t = transitivity_probe(ctx.inst.op, ctx.inst.sub, pairs[i].first, pairs[i].second, options);
    found += t.found ? 1 : 0;
    coupled += (t.found && t.invariance && t.invariance->holds) ? 1 : 0;
    Json row = to_json(t);
    row["index"] = i;
    row["u"] = ball_to_json(pairs[i].first);
    row["v"] = ball_to_json(pairs[i].second);
    rows.push_back(std::move(row));
  }
  verdict = found == pairs.size() && coupled == found;
  Json j;
  j["passed"] = verdict;
  j["pairs"] = pairs.size();
  j["found"] = found;
  j["invariance_holds"] = coupled;
  j["rows"] = std::move(rows);
  return j;
}

Json run_fixtures(const RunContext& ctx, bool& verdict) {
  verdict = true;
  Json rows = Json::array();
  for (const auto& f : ctx.inst.fixtures) {
    const SupportVector point = apply_power(ctx.inst.op, ctx.inst.seed_vector, f.n).scaled(f.alpha);
    const Rational d = distance_squared(point, f.target);
    const bool hit = d <= ctx.search.tol_squared && contains(ctx.inst.sub, point);
    verdict = verdict && hit;
    rows.push_back({{"n", f.n}, {"hit", hit}, {"residual_squared", rational_with_mirror(d)}});
  }
  Json j;
  j["passed"] = verdict;
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace

RunReport run_report(const Instance& inst, std::vector<std::string> checks, const RunParameters& params) {
  validate(inst);
  if (checks.empty()) {
    for (const auto& c : all_checks()) {
      bool wanted = std::any_of(inst.expected.begin(), inst.expected.end(),
                                [&](const auto& e) { return base_check(e.first) == c; });
      if (wanted) checks.push_back(c);
    }
  }
  for (const auto& c : checks) {
    if (std::find(all_checks().begin(), all_checks().end(), c) == all_checks().end())
      throw PreconditionViolation("unknown check \"" + c + "\"");
    if (c == "criterion" && !inst.criterion)
      throw PreconditionViolation("check \"criterion\" needs an instance with a criterion section");
  }
  // Canonical order, no repeats.
  std::vector<std::string> ordered;
  for (const auto& c : all_checks()) {
    if (std::find(checks.begin(), checks.end(), c) != checks.end()) ordered.push_back(c);
  }

  const auto started = std::chrono::steady_clock::now();
  RunContext ctx{inst, params, SearchOptions{params.max_n, params.tol_squared()}};
  RunReport report;
  Json results = Json::object();

  for (const auto& c : ordered) {
    bool verdict = false;
    if (c == "coverage") {
      results["coverage"] = run_coverage(ctx, params.radius, verdict);
      report.verdicts["coverage"] = verdict;
      for (const auto& r : inst.coverage_radii) {
        const std::string key = "coverage@" + to_string(r);
        results[key] = run_coverage(ctx, r, verdict);
        report.verdicts[key] = verdict;
      }
      continue;
    }
    if (c == "cone") {
      results[c] = run_cone(ctx, verdict);
    } else if (c == "criterion") {
      const CriterionInstance& ci = *inst.criterion;
      const auto probes = default_probes(ci);
      CriterionReport r = evaluate_criterion(ci, probes, params.k_max, params.threads);
      verdict = r.passed;
      results[c] = to_json(r);
      results[c]["probes"] = probes.size();
    } else if (c == "transitivity") {
      results[c] = run_transitivity(ctx, verdict);
    } else if (c == "growth") {
      const auto targets = targets_for(ctx, params.radius);
      GrowthCertificate g = growth_certificate(inst.op, seed_for(ctx, targets), 0, params.growth_n);
      verdict = g.emitted;
      results[c] = to_json(g);
      results[c]["passed"] = verdict;
    } else if (c == "bounded") {
      const auto targets = targets_for(ctx, params.radius);
      BoundCertificate b = boundedness_certificate(inst.op, seed_for(ctx, targets), params.max_n);
      verdict = b.analytic;
      results[c] = to_json(b);
      results[c]["passed"] = verdict;
    }
    report.verdicts[c] = verdict;
  }
  if (!inst.fixtures.empty()) {
    bool verdict = false;
    results["fixtures"] = run_fixtures(ctx, verdict);
    report.verdicts["fixtures"] = verdict;
  }

  for (const auto& [key, want] : inst.expected) {
    auto it = report.verdicts.find(key);
    if (it == report.verdicts.end() || it->second == want) continue;
    report.mismatches.push_back(key + ": expected " + (want ? "pass" : "fail") + ", got " +
                                (it->second ? "pass" : "fail"));
  }

  Json& doc = report.document;
  doc["format"] = "dclab-report";
  doc["format_version"] = kReportFormatVersion;
  doc["versions"] = {{"dclab", kVersion}, {"arithmetic", arithmetic_backends()}};
  doc["instance_name"] = inst.name;
  doc["instance"] = instance_to_json(inst);
  Json echo = parameters_to_json(params);
  echo["threads"] = params.threads;
  echo["timing"] = params.timing;
  doc["parameters"] = std::move(echo);
  doc["checks"] = ordered;
  doc["results"] = std::move(results);
  Json verdicts = Json::object();
  for (const auto& [k, v] : report.verdicts) verdicts[k] = v;
  doc["verdicts"] = std::move(verdicts);
  Json expected = Json::object();
  for (const auto& [k, v] : inst.expected) expected[k] = v;
  doc["expected"] = std::move(expected);
  doc["mismatches"] = report.mismatches;
  doc["status"] = report.ok() ? "ok" : "mismatch";
  if (params.timing) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    doc["wall_time_ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
  }
  return report;
}

void write_json_atomic(const Json& j, const std::filesystem::path& out) {
  std::filesystem::path tmp = out;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp.string());
    f << j.dump(2) << '\n';
    f.flush();
    if (!f) throw Error("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, out, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error("cannot move report into place at " + out.string() + ": " + ec.message());
  }
}

void write_report(const RunReport& report, const std::filesystem::path& out) {
  write_json_atomic(report.document, out);
}

namespace {

std::string decimal_of(const Json& exact_string, const std::string& path) {
  return render_decimal(rational_from_json(exact_string, path));
}

std::string sqrt_decimal(const Rational& q) {
  bool overflow = false;
  const double d = std::sqrt(to_double(q, &overflow));
  if (overflow) return "inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, d);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace

std::string export_csv(const Json& report, const std::string& check) {
  const Json& results = require_field(report, "results", "");
  if (!results.contains(check)) throw PreconditionViolation("report has no \"" + check + "\" section");
  const Json& rows = require_field(results[check], "rows", "/results/" + check);
  std::ostringstream out;
  out << "index,hit,n,alpha_re,alpha_im,residual\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string p = "/results/" + check + "/rows/" + std::to_string(k);
    const Json& row = rows[k];
    const Json& alpha = require_field(row, "alpha", p);
    const Rational res2 =
        rational_from_json(require_field(require_field(row, "residual_squared", p), "exact", p), p + "/residual_squared");
    out << require_uint(require_field(row, "index", p), p + "/index") << ','
        << (require_field(row, "hit", p).get<bool>() ? "true" : "false") << ','
        << require_uint(require_field(row, "n", p), p + "/n") << ','
        << decimal_of(require_field(alpha, "re", p + "/alpha"), p + "/alpha/re") << ','
        << decimal_of(require_field(alpha, "im", p + "/alpha"), p + "/alpha/im") << ',' << sqrt_decimal(res2) << '\n';
  }
  return out.str();
}

}  // namespace dclab
