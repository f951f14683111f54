#pragma once

// Built-in instances, instance files, and report runs.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dclab/criterion.hpp"
#include "dclab/orbits.hpp"
#include "dclab/serialize.hpp"

namespace dclab {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kReportFormatVersion = 1;

struct RunParameters {
  Rational tol = Rational(1, 1000000000);
  std::uint64_t max_n = 80;
  std::uint64_t k_max = 50;
  IndexWindow window{-9, 9};
  std::uint64_t seed = 42;
  std::size_t targets = 200;
  Rational radius = 10;
  std::size_t ball_pairs = 50;
  std::uint64_t growth_n = 20;
  unsigned threads = 1;
  bool timing = false;

  Rational tol_squared() const { return tol * tol; }
  friend bool operator==(const RunParameters&, const RunParameters&) = default;
};

Json parameters_to_json(const RunParameters& p);
// Missing fields keep the values of `base`.
RunParameters parameters_from_json(const Json& j, const std::string& path, RunParameters base = {});

// Replace the instance seed by seed_from_targets(op, back_map, targets,
// spacing) built from each run's own targets.
struct SeedConstruction {
  OperatorSpec back_map;
  std::uint64_t spacing = 200;
};

// A pinned disk-orbit point: alpha T^n x should land on `target`.
struct WitnessFixture {
  SupportVector target;
  std::uint64_t n = 0;
  DiskScalar alpha;

  friend bool operator==(const WitnessFixture&, const WitnessFixture&) = default;
};

struct Instance {
  Instance(std::string name, std::string description, OperatorSpec op, SubspaceSpec sub, SupportVector seed_vector)
      : name(std::move(name)),
        description(std::move(description)),
        op(std::move(op)),
        sub(std::move(sub)),
        seed_vector(std::move(seed_vector)) {}

  std::string name;
  std::string description;
  OperatorSpec op;
  SubspaceSpec sub;
  SupportVector seed_vector;
  std::optional<CriterionInstance> criterion;
  std::optional<SeedConstruction> seed_construction;
  // Extra coverage runs at these target radii, verdict keys "coverage@<r>".
  std::vector<Rational> coverage_radii;
  std::map<std::string, bool> expected;
  std::vector<std::string> flags;
  std::vector<WitnessFixture> fixtures;
  RunParameters parameters;
};

bool operator==(const Instance& a, const Instance& b);

// Revalidates every invariant; throws InvariantViolation naming the field.
void validate(const Instance& inst);

std::vector<std::string> catalog_names();
// Throws PreconditionViolation for unknown names.
Instance builtin_instance(const std::string& name);
// 2I on C^n with M = Axis(0) and x = e_0; n = 1 is flagged "trivial_subspace".
Instance generate_finite_dim_instance(std::int64_t n);

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);
Instance load_instance(const std::filesystem::path& path);
// Built-in name or path to an instance file.
Instance resolve_instance(const std::string& name_or_path);

inline const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> checks{"coverage", "criterion", "transitivity", "growth", "bounded", "cone"};
  return checks;
}

struct RunReport {
  Json document;
  std::map<std::string, bool> verdicts;
  std::vector<std::string> mismatches;

  bool ok() const { return mismatches.empty(); }
};

// Checks default to those named by the instance's expectations. Throws
// PreconditionViolation for unknown or inapplicable checks.
RunReport run_report(const Instance& inst, std::vector<std::string> checks, const RunParameters& params);

// Serialises the report and writes it atomically (temp file + rename).
void write_report(const RunReport& report, const std::filesystem::path& out);
void write_json_atomic(const Json& j, const std::filesystem::path& out);

// One row per coverage target: index,hit,n,alpha_re,alpha_im,residual.
// `check` selects the coverage section ("coverage" or "coverage@<r>").
std::string export_csv(const Json& report, const std::string& check = "coverage");

}  // namespace dclab
