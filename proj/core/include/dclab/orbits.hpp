#pragma once

// Disk orbits {a T^n x : |a| <= 1, n >= 0} and cone orbits {b T^n x}
// intersected with a subspace: witness search, finite-resolution coverage,
// and boundedness / growth certificates.
//
// n = 0 is part of every orbit.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dclab/lattice.hpp"
#include "dclab/operators.hpp"
#include "dclab/scalar.hpp"
#include "dclab/subspaces.hpp"

namespace dclab {

// 10^-18, i.e. tol = 10^-9.
Rational default_tol_squared();

// Radial clamp into the closed unit disk. Exact when |z|^2 is a rational
// square; otherwise divides by a certified upper bracket of |z| and reports
// `approximate`, still with |result| <= 1.
struct DiskFit {
  DiskScalar alpha;
  Exactness exactness = Exactness::exact;
};
DiskFit clamp_to_disk(const ExactComplex& z);

// argmin over |a| <= 1 of |a v - target|. v must be nonzero.
DiskFit best_disk_multiple(const SupportVector& v, const SupportVector& target);

struct SearchOptions {
  std::uint64_t max_n = 80;
  Rational tol_squared = default_tol_squared();
};

struct DiskOrbitWitness {
  std::uint64_t n = 0;
  DiskScalar alpha;
  SupportVector point;  // alpha * T^n x
  Rational residual_squared;
  Exactness exactness = Exactness::exact;
};

// `candidate` is the witness when `found`, otherwise the best point seen.
struct DiskOrbitSearch {
  bool found = false;
  DiskOrbitWitness candidate;
};

// Searches n in [0, max_n] for the first n with T^n x in `sub` whose best
// disk multiple lands within tol of `target`. The multiple is the exact
// least-squares coefficient <target, T^n x> / |T^n x|^2, radially clamped
// to the unit disk, which is the exact minimiser over the disk.
DiskOrbitSearch disk_orbit_witness(const OperatorSpec& op, const SupportVector& x, const SupportVector& target,
                                   const SubspaceSpec& sub, const SearchOptions& options = {});

struct ConeOrbitWitness {
  std::uint64_t n = 0;
  ExactComplex beta;
  SupportVector point;
  Rational residual_squared;
};

struct ConeOrbitSearch {
  bool found = false;
  ConeOrbitWitness candidate;
};

ConeOrbitSearch cone_orbit_witness(const OperatorSpec& op, const SupportVector& x, const SupportVector& target,
                                   const SearchOptions& options = {});

struct CoverageRow {
  bool hit = false;
  DiskOrbitWitness outcome;  // witness on a hit, best attempt on a miss
};

struct CoverageReport {
  std::size_t targets = 0;
  std::size_t hits = 0;
  Rational tol_squared;
  Rational max_residual_squared;  // over hits
  std::uint64_t max_n = 0;
  Exactness exactness = Exactness::exact;
  std::vector<CoverageRow> rows;  // input order

  bool passed() const { return hits == targets; }
  std::vector<std::size_t> miss_indices() const;
};

CoverageReport coverage_report(const OperatorSpec& op, const SupportVector& x, const SubspaceSpec& sub,
                               std::span<const SupportVector> targets, const SearchOptions& options = {},
                               unsigned threads = 1);

struct BoundCertificate {
  Rational bound_squared;         // max_{n <= max_n} |T^n x|^2
  std::optional<Rational> bound;  // when bound_squared is a rational square
  bool analytic = false;          // bound holds for every n, not just the tested range
  std::uint64_t max_n = 0;
  std::uint64_t argmax_n = 0;
};

// No target t with |t| > B can be approached closer than |t| - B by the
// disk orbit when the certificate is analytic.
BoundCertificate boundedness_certificate(const OperatorSpec& op, const SupportVector& x, std::uint64_t max_n);

struct GrowthCertificate {
  std::vector<std::pair<std::uint64_t, Rational>> norms_squared;
  bool strictly_increasing = false;
  bool emitted = false;
  std::uint64_t threshold = 0;  // |T^n x|^2 >= bound_squared for n >= threshold in range
  Rational bound_squared;
  // Pure shifts with every |w| >= c > 1: |T^n x| >= c^n |x| for all n.
  bool analytic = false;
  std::optional<Rational> rate_squared;
  std::optional<Rational> rate;
};

GrowthCertificate growth_certificate(const OperatorSpec& op, const SupportVector& x, std::uint64_t n_first,
                                     std::uint64_t n_last);

// Finite stand-in for a disk-cyclic vector of a shift:
//   x = sum_j rho^j * back_map^{spacing * j}(t_j)
// with rho balancing the operator's far-field growth against the back map's
// decay over `spacing` steps. T^{spacing j} x then reproduces rho^j t_j
// up to cross terms that shrink geometrically in the spacing.
SupportVector seed_from_targets(const OperatorSpec& op, const OperatorSpec& back_map,
                                std::span<const SupportVector> targets, std::uint64_t spacing);

}  // namespace dclab
