#pragma once

// Desk-scale checks of the subspace disk-cyclicity criterion:
//   (a) x_k = back_map^{n_k} y -> 0 and T^{n_k} x_k = y eventually,
//   (b) |T^{n_k} x| |x_k| -> 0,
//   (c) T^{n_k} M subset of M,
// plus the lambda_k rule, the witness construction z = x + x_k / lambda_k,
// basis reduction for weighted shifts, and the disk-transitivity probe.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dclab/lattice.hpp"
#include "dclab/operators.hpp"
#include "dclab/scalar.hpp"
#include "dclab/subspaces.hpp"

namespace dclab {

// n_k = a k + b for k >= 1.
struct AffineSchedule {
  std::uint64_t a = 2;
  std::int64_t b = 0;

  std::uint64_t at(std::uint64_t k) const;
  friend bool operator==(const AffineSchedule&, const AffineSchedule&) = default;
};

struct CriterionInstance {
  OperatorSpec op;
  SubspaceSpec sub;
  AffineSchedule nk;
  OperatorSpec back_map;
  IndexWindow dense_window{-9, 9};
  std::uint64_t k_max = 50;
};

// Schedule strictly increasing with n_1 >= 1, matching lattices, nontrivial
// subspace. Throws InvariantViolation naming the field.
void validate(const CriterionInstance& inst);
bool operator==(const CriterionInstance& a, const CriterionInstance& b);

struct Probe {
  SupportVector x;  // from D1
  SupportVector y;  // from D2
};

// Basis vectors e_i for allowed i in the dense window, paired with
// themselves, then two-term combinations of neighbouring allowed indices.
std::vector<Probe> default_probes(const CriterionInstance& inst);

// A positive sequence indexed by k = 1..k_max, read as "tends to zero".
struct DecaySeries {
  std::vector<Rational> values;      // values[k - 1]
  std::uint64_t decreasing_from = 1;  // strictly decreasing on [decreasing_from, k_max]
  bool below_threshold = false;       // value at k_max < 10^-18
  // Consecutive ratio constant on [geometric_from, k_max].
  std::optional<std::uint64_t> geometric_from;
  std::optional<Rational> ratio_squared;  // values are squared norms
  std::optional<Rational> ratio;

  bool tends_to_zero() const;
};

DecaySeries analyse_decay(std::vector<Rational> values);

struct CondAEntry {
  std::size_t probe = 0;
  DecaySeries norms_squared;  // |x_k|^2
  std::optional<std::uint64_t> threshold_scan;
  std::optional<std::uint64_t> threshold_analytic;
  bool passed = false;
};

struct CondA {
  bool passed = false;
  std::uint64_t threshold = 1;  // k* over all probes
  std::vector<CondAEntry> entries;
};

struct CondBEntry {
  std::size_t probe = 0;
  DecaySeries products_squared;  // |T^{n_k} x|^2 |x_k|^2
  bool passed = false;
};

struct CondB {
  bool passed = false;
  std::vector<CondBEntry> entries;
};

struct CondC {
  bool passed = false;
  Scope scope = Scope::global;
  std::optional<std::uint64_t> failing_k;
  std::optional<InvarianceVerdict> failure;
};

struct CriterionReport {
  CondA a;
  CondB b;
  CondC c;
  bool passed = false;
  std::uint64_t k_max = 0;
};

CriterionReport evaluate_criterion(const CriterionInstance& inst, std::span<const Probe> probes, std::uint64_t k_max,
                                   unsigned threads = 1);

// Smallest k0 with T^{n_k} back_map^{n_k} y = y for every k in [k0, k_max];
// nullopt when it fails at k_max.
std::optional<std::uint64_t> right_inverse_threshold_scan(const CriterionInstance& inst, const SupportVector& y,
                                                          std::uint64_t k_max);

// Same threshold from the weight tables alone (valid for every k, not just
// up to k_max). nullopt when the composite never settles to the identity.
// Throws Unsupported for operator pairs it cannot decide.
std::optional<std::uint64_t> right_inverse_threshold_analytic(const CriterionInstance& inst, const SupportVector& y);

struct LambdaChoice {
  int case_number = 1;
  ExactComplex lambda;
  Exactness exactness = Exactness::exact;
  bool hypercyclic_path = false;
  bool within_disk = false;
};

// Inputs are squared norms |T^{n_k} x|^2 and |x_k|^2.
//   case 1: lambda = (|x_k| / |T^{n_k} x|)^{1/2}
//   case 2 (x_k = 0): lambda = 2^-k / |T^{n_k} x|
//   case 3 (T^{n_k} x = 0): lambda = 2^k |x_k|, hypercyclic path
LambdaChoice select_lambda(const Rational& norm_tx_squared, const Rational& norm_xk_squared, std::uint64_t k);

struct WitnessConstruction {
  bool found = false;
  std::uint64_t k = 0;
  SupportVector z;
  DiskScalar lambda;
  SupportVector image;  // lambda T^{n_k} z
  Exactness exactness = Exactness::exact;
  // At the returned k, or the closest approach when not found.
  Rational distance_u1_squared;
  Rational distance_u2_squared;
};

WitnessConstruction construct_diskcyclic_witness(const CriterionInstance& inst, const BallSpec& u1,
                                                 const BallSpec& u2, std::uint64_t k_max);

struct PairEvidence {
  Index r = 0;
  Index p = 0;
  std::vector<Rational> ratios;  // S_k(pair) / S_k(anchor), k = 1..k_max
  std::uint64_t threshold_analytic = 1;
  std::uint64_t constant_from_scan = 1;
  Rational limit;
  bool holds = false;
};

struct BasisReductionReport {
  bool holds = false;
  std::uint64_t threshold = 1;
  std::vector<PairEvidence> pairs;  // pairs[0] is the anchor
};

// S_k(r, p) = |T^{n_k} e_r|^2 |back_map^{n_k} e_p|^2.
BasisReductionReport basis_reduction_check(const CriterionInstance& inst, std::span<const std::pair<Index, Index>> pairs,
                                           std::uint64_t k_max);

enum class AlphaDomain { punctured_disk, unit_circle };

struct TransitivityOptions {
  std::uint64_t max_n = 80;
  AlphaDomain alpha_domain = AlphaDomain::punctured_disk;
  IndexWindow window{-9, 9};
};

// Searches n, a nonzero disk scalar alpha and w in V with alpha T^n w in U.
struct TransitivityResult {
  bool found = false;
  std::uint64_t n = 0;
  DiskScalar alpha;
  SupportVector witness;
  SupportVector image;
  Exactness exactness = Exactness::exact;
  std::optional<InvarianceVerdict> invariance;
  Rational best_separation_squared;  // min |alpha T^n w - center(U)|^2 seen
};

TransitivityResult transitivity_probe(const OperatorSpec& op, const SubspaceSpec& sub, const BallSpec& u,
                                      const BallSpec& v, const TransitivityOptions& options = {});

}  // namespace dclab
