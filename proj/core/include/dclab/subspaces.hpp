#pragma once

// Coordinate-aligned closed subspaces: residue masks on Z / N, explicit
// coordinate spans, and coordinate axes of C^n. Membership and projection
// are exact because every subspace is spanned by basis vectors.

#include <cstdint>
#include <optional>
#include <set>
#include <variant>
#include <vector>

#include "dclab/lattice.hpp"
#include "dclab/operators.hpp"

namespace dclab {

// Indices i with (i mod modulus) in `allowed` (floor modulus).
struct IndexMask {
  IndexLattice lattice = IndexLattice::integers();
  std::int64_t modulus = 2;
  std::set<std::int64_t> allowed;

  friend bool operator==(const IndexMask&, const IndexMask&) = default;
};

struct CoordinateSpan {
  IndexLattice lattice = IndexLattice::integers();
  std::set<Index> indices;

  friend bool operator==(const CoordinateSpan&, const CoordinateSpan&) = default;
};

// {(0, ..., a, ..., 0)} in C^dim, `a` at position `axis`.
struct Axis {
  std::int64_t dim = 2;
  Index axis = 0;

  friend bool operator==(const Axis&, const Axis&) = default;
};

class SubspaceSpec {
 public:
  using Variant = std::variant<IndexMask, CoordinateSpan, Axis>;

  SubspaceSpec(IndexMask mask);       // NOLINT
  SubspaceSpec(CoordinateSpan span);  // NOLINT
  SubspaceSpec(Axis axis);            // NOLINT

  static SubspaceSpec odd_indices() { return IndexMask{IndexLattice::integers(), 2, {1}}; }

  const Variant& node() const noexcept { return node_; }
  IndexLattice lattice() const;
  bool allows(Index i) const;

  // At least one allowed and one excluded index exist.
  bool is_nontrivial() const;

  friend bool operator==(const SubspaceSpec&, const SubspaceSpec&) = default;

 private:
  Variant node_;
};

// Throws InvariantViolation unless the subspace is well formed and, unless
// `allow_trivial`, nontrivial.
void validate(const SubspaceSpec& sub, bool allow_trivial = false);

std::string describe(const SubspaceSpec& sub);

// Open ball relative to a subspace.
struct BallSpec {
  SupportVector center;
  Rational radius;

  friend bool operator==(const BallSpec&, const BallSpec&) = default;
};

void validate(const BallSpec& ball, const SubspaceSpec& sub);
bool in_ball(const BallSpec& ball, const SupportVector& v);

bool contains(const SubspaceSpec& sub, const SupportVector& v);
SupportVector project(const SubspaceSpec& sub, const SupportVector& v);

// Allowed, lattice-admitted indices in the window, ascending.
std::vector<Index> allowed_indices(const SubspaceSpec& sub, IndexWindow window);

enum class Scope { global, window };

struct InvarianceVerdict {
  bool holds = true;
  Scope scope = Scope::window;
  std::optional<Index> witness;                // basis index whose image leaves the subspace
  std::optional<SupportVector> witness_image;  // T^n e_witness
  std::size_t checked = 0;                     // basis vectors tested directly
};

// Checks T^n e_i in sub for every allowed basis index i in the window (the
// whole lattice when it is finite); the
// statement T^n(sub) in sub is additionally decided globally where that is
// possible in closed form (scalars, identity, finite lattices, shifts over
// residue masks).
InvarianceVerdict invariance_check(const OperatorSpec& op, const SubspaceSpec& sub, std::uint64_t n,
                                   IndexWindow window);

// Deterministic targets inside the radius ball of `sub`, supported in the
// window: the zero vector, one scaled basis vector per allowed index (with
// van der Corput phases), then a seeded random tail of one- and two-term
// vectors. Every returned vector has norm <= radius exactly.
std::vector<SupportVector> sample_targets(const SubspaceSpec& sub, const Rational& radius, std::size_t count,
                                          IndexWindow window, std::uint64_t seed);

// Ball pairs (U, V) with centers drawn by sample_targets and radii in
// {1/8, 2/8, ..., 1}.
std::vector<std::pair<BallSpec, BallSpec>> sample_ball_pairs(const SubspaceSpec& sub, const Rational& radius,
                                                             std::size_t count, IndexWindow window,
                                                             std::uint64_t seed);

}  // namespace dclab
