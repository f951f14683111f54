#pragma once

// Symbolic operators on finite-support vectors: weighted shifts on Z / N,
// scalar multiples of the identity on C^n, the identity, and block direct
// sums. Powers of shifts are evaluated in closed form (index translation
// plus one weight product per support entry).

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dclab/lattice.hpp"
#include "dclab/scalar.hpp"

namespace dclab {

// w_j = upper for j >= pivot, lower for j < pivot.
struct SignSplit {
  ExactComplex upper;
  ExactComplex lower;
  Index pivot = 0;

  friend bool operator==(const SignSplit&, const SignSplit&) = default;
};

// Explicit weights at finitely many indices, `fallback` elsewhere.
struct WeightTable {
  std::map<Index, ExactComplex> entries;
  ExactComplex fallback;

  friend bool operator==(const WeightTable&, const WeightTable&) = default;
};

class WeightRule {
 public:
  using Variant = std::variant<SignSplit, WeightTable>;

  WeightRule(SignSplit split) : rule_(std::move(split)) {}    // NOLINT
  WeightRule(WeightTable table) : rule_(std::move(table)) {}  // NOLINT

  static WeightRule split(ExactComplex nonneg, ExactComplex neg, Index pivot = 0) {
    return SignSplit{std::move(nonneg), std::move(neg), pivot};
  }

  const Variant& rule() const noexcept { return rule_; }

  ExactComplex at(Index j) const;
  // Product of w_j for j in [first, first + count - 1]; 1 when count == 0.
  ExactComplex product(Index first, std::uint64_t count) const;

  bool all_nonzero() const;
  Rational min_magnitude_squared() const;

  // Smallest H with w_j constant for all j >= H, and largest L with w_j
  // constant for all j <= L. Nullopt means constant on the whole line.
  std::optional<Index> constant_from() const;
  std::optional<Index> constant_through() const;
  ExactComplex far_upper() const;
  ExactComplex far_lower() const;

  // The rule z_j = 1 / w_{j - offset}. Requires all_nonzero().
  WeightRule reciprocal_shifted(Index offset) const;

  friend bool operator==(const WeightRule&, const WeightRule&) = default;

 private:
  Variant rule_;
};

// F e_n = w_n e_{n+1}.
struct ForwardShift {
  IndexLattice lattice;
  WeightRule weights;

  friend bool operator==(const ForwardShift&, const ForwardShift&) = default;
};

// B e_n = z_n e_{n-1}; on N, B e_0 = 0.
struct BackwardShift {
  IndexLattice lattice;
  WeightRule weights;

  friend bool operator==(const BackwardShift&, const BackwardShift&) = default;
};

// k I on C^dim.
struct ScalarOp {
  std::int64_t dim = 1;
  ExactComplex k;

  friend bool operator==(const ScalarOp&, const ScalarOp&) = default;
};

struct IdentityOp {
  IndexLattice lattice;

  friend bool operator==(const IdentityOp&, const IdentityOp&) = default;
};

class OperatorSpec;

struct DirectSumPart {
  std::shared_ptr<const OperatorSpec> op;
  Index offset = 0;
};

// Block-diagonal operator on C^dim; parts tile [0, dim) without overlap.
struct DirectSum {
  std::int64_t dim = 0;
  std::vector<DirectSumPart> parts;
};

class OperatorSpec {
 public:
  using Variant = std::variant<ForwardShift, BackwardShift, ScalarOp, IdentityOp, DirectSum>;

  OperatorSpec(ForwardShift op);   // NOLINT
  OperatorSpec(BackwardShift op);  // NOLINT
  OperatorSpec(ScalarOp op);       // NOLINT
  OperatorSpec(IdentityOp op);     // NOLINT
  OperatorSpec(DirectSum op);      // NOLINT

  static OperatorSpec forward_shift(IndexLattice lattice, WeightRule weights) {
    return ForwardShift{lattice, std::move(weights)};
  }
  static OperatorSpec backward_shift(IndexLattice lattice, WeightRule weights) {
    return BackwardShift{lattice, std::move(weights)};
  }
  static OperatorSpec scalar(std::int64_t dim, ExactComplex k) { return ScalarOp{dim, std::move(k)}; }
  static OperatorSpec identity(IndexLattice lattice) { return IdentityOp{lattice}; }
  // Parts are laid out consecutively from offset 0.
  static OperatorSpec direct_sum(const std::vector<OperatorSpec>& parts);

  const Variant& node() const noexcept { return node_; }
  const IndexLattice& lattice() const noexcept { return lattice_; }

  bool is_shift() const;
  bool is_forward_shift() const { return std::holds_alternative<ForwardShift>(node_); }
  bool is_backward_shift() const { return std::holds_alternative<BackwardShift>(node_); }
  // Shift weights; throws Unsupported for non-shifts.
  const WeightRule& shift_weights() const;

  friend bool operator==(const OperatorSpec& a, const OperatorSpec& b);

 private:
  Variant node_;
  IndexLattice lattice_;
};

std::string describe(const OperatorSpec& op);

SupportVector apply(const OperatorSpec& op, const SupportVector& v);
SupportVector apply_power(const OperatorSpec& op, const SupportVector& v, std::uint64_t n);

// Product of the n weights met moving from `start` in the shift's direction:
// forward w_start ... w_{start+n-1}; backward z_start ... z_{start-n+1}.
ExactComplex weight_product(const OperatorSpec& shift, Index start, std::uint64_t n);

bool is_invertible(const OperatorSpec& op);
OperatorSpec invert(const OperatorSpec& op);
OperatorSpec adjoint(const OperatorSpec& op);

// False only when T^n v certainly has no entry at `target_index`. Lets orbit
// searches skip powers whose image cannot meet a target.
bool power_may_touch(const OperatorSpec& op, const SupportVector& v, std::uint64_t n, Index target_index);

}  // namespace dclab
