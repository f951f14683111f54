#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "dclab/scalar.hpp"

namespace dclab {

using Index = std::int64_t;

enum class LatticeKind { bilateral, unilateral, finite };

// Index set of a sequence space: Z, N = {0, 1, ...}, or {0, ..., dim-1}.
struct IndexLattice {
  LatticeKind kind = LatticeKind::bilateral;
  std::int64_t dim = 0;  // meaningful for finite lattices only

  static IndexLattice integers() { return {LatticeKind::bilateral, 0}; }
  static IndexLattice naturals() { return {LatticeKind::unilateral, 0}; }
  static IndexLattice finite(std::int64_t n);

  bool admits(Index i) const;
  bool is_finite() const { return kind == LatticeKind::finite; }

  friend bool operator==(const IndexLattice&, const IndexLattice&) = default;
};

std::string describe(const IndexLattice& lattice);

// Closed index range [lo, hi].
struct IndexWindow {
  Index lo = 0;
  Index hi = 0;

  bool contains(Index i) const { return lo <= i && i <= hi; }
  bool empty() const { return hi < lo; }

  friend bool operator==(const IndexWindow&, const IndexWindow&) = default;
};

// Finite-support vector over an index lattice, kept in canonical form:
// no stored zero entries, every index admitted by the lattice.
class SupportVector {
 public:
  using Entries = std::map<Index, ExactComplex>;

  SupportVector() = default;
  explicit SupportVector(IndexLattice lattice) : lattice_(lattice) {}
  SupportVector(IndexLattice lattice, std::initializer_list<std::pair<const Index, ExactComplex>> entries);

  static SupportVector basis(IndexLattice lattice, Index i, ExactComplex coefficient = 1);

  const IndexLattice& lattice() const noexcept { return lattice_; }
  const Entries& entries() const noexcept { return entries_; }
  bool is_zero() const noexcept { return entries_.empty(); }
  std::size_t support_size() const noexcept { return entries_.size(); }
  bool has(Index i) const { return entries_.count(i) != 0; }
  ExactComplex at(Index i) const;

  std::optional<Index> min_index() const;
  std::optional<Index> max_index() const;

  // Writes an entry (dropping it when zero). Throws LatticeMismatch when the
  // index is outside the lattice.
  void set(Index i, ExactComplex value);
  void add(Index i, const ExactComplex& value);

  SupportVector scaled(const ExactComplex& a) const;

  friend bool operator==(const SupportVector&, const SupportVector&) = default;

 private:
  IndexLattice lattice_{};
  Entries entries_;
};

Rational norm_squared(const SupportVector& v);
SupportVector axpy(const ExactComplex& a, const SupportVector& x, const SupportVector& y);
Rational distance_squared(const SupportVector& u, const SupportVector& v);

void require_same_lattice(const IndexLattice& a, const IndexLattice& b, const char* context);

namespace detail {
// <x, y> = sum x_i * conj(y_i). Linear in the first argument.
ExactComplex inner_product(const SupportVector& x, const SupportVector& y);
}  // namespace detail

}  // namespace dclab
