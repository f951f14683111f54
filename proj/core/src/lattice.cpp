#include "dclab/lattice.hpp"

#include "dclab/errors.hpp"

namespace dclab {

IndexLattice IndexLattice::finite(std::int64_t n) {
  if (n <= 0) throw InvariantViolation("lattice.dim", "finite dimension must be positive");
  return {LatticeKind::finite, n};
}

bool IndexLattice::admits(Index i) const {
  switch (kind) {
    case LatticeKind::bilateral:
      return true;
    case LatticeKind::unilateral:
      return i >= 0;
    case LatticeKind::finite:
      return i >= 0 && i < dim;
  }
  return false;
}

std::string describe(const IndexLattice& lattice) {
  switch (lattice.kind) {
    case LatticeKind::bilateral:
      return "Z";
    case LatticeKind::unilateral:
      return "N";
    case LatticeKind::finite:
      return "C^" + std::to_string(lattice.dim);
  }
  return "?";
}

void require_same_lattice(const IndexLattice& a, const IndexLattice& b, const char* context) {
  if (!(a == b)) {
    throw LatticeMismatch(std::string(context) + ": lattice " + describe(a) + " vs " + describe(b));
  }
}

SupportVector::SupportVector(IndexLattice lattice,
                             std::initializer_list<std::pair<const Index, ExactComplex>> entries)
    : lattice_(lattice) {
  for (const auto& [i, c] : entries) add(i, c);
}

SupportVector SupportVector::basis(IndexLattice lattice, Index i, ExactComplex coefficient) {
  SupportVector v(lattice);
  v.set(i, std::move(coefficient));
  return v;
}

ExactComplex SupportVector::at(Index i) const {
  auto it = entries_.find(i);
  return it == entries_.end() ? ExactComplex{} : it->second;
}

std::optional<Index> SupportVector::min_index() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.begin()->first;
}

std::optional<Index> SupportVector::max_index() const {
  if (entries_.empty()) return std::nullopt;
  return entries_.rbegin()->first;
}

void SupportVector::set(Index i, ExactComplex value) {
  if (!lattice_.admits(i)) {
    throw LatticeMismatch("index " + std::to_string(i) + " outside lattice " + describe(lattice_));
  }
  if (value.is_zero()) {
    entries_.erase(i);
  } else {
    entries_.insert_or_assign(i, std::move(value));
  }
}

void SupportVector::add(Index i, const ExactComplex& value) {
  if (value.is_zero()) {
    if (!lattice_.admits(i)) set(i, value);  // reports the bad index
    return;
  }
  auto it = entries_.find(i);
  if (it == entries_.end()) {
    set(i, value);
    return;
  }
  it->second += value;
  if (it->second.is_zero()) entries_.erase(it);
}

SupportVector SupportVector::scaled(const ExactComplex& a) const {
  SupportVector out(lattice_);
  if (a.is_zero()) return out;
  for (const auto& [i, c] : entries_) out.entries_.emplace_hint(out.entries_.end(), i, c * a);
  return out;
}

Rational norm_squared(const SupportVector& v) {
  Rational sum = 0;
  for (const auto& [i, c] : v.entries()) sum += magnitude_squared(c);
  return sum;
}

SupportVector axpy(const ExactComplex& a, const SupportVector& x, const SupportVector& y) {
  require_same_lattice(x.lattice(), y.lattice(), "axpy");
  SupportVector out = y;
  if (a.is_zero()) return out;
  for (const auto& [i, c] : x.entries()) out.add(i, a * c);
  return out;
}

Rational distance_squared(const SupportVector& u, const SupportVector& v) {
  require_same_lattice(u.lattice(), v.lattice(), "distance_squared");
  Rational sum = 0;
  auto a = u.entries().begin();
  auto b = v.entries().begin();
  const auto a_end = u.entries().end();
  const auto b_end = v.entries().end();
  while (a != a_end || b != b_end) {
    if (b == b_end || (a != a_end && a->first < b->first)) {
      sum += magnitude_squared(a->second);
      ++a;
    } else if (a == a_end || b->first < a->first) {
      sum += magnitude_squared(b->second);
      ++b;
    } else {
      sum += magnitude_squared(a->second - b->second);
      ++a;
      ++b;
    }
  }
  return sum;
}

namespace detail {

ExactComplex inner_product(const SupportVector& x, const SupportVector& y) {
  require_same_lattice(x.lattice(), y.lattice(), "inner_product");
  const auto& small = x.support_size() <= y.support_size() ? x : y;
  const auto& large = x.support_size() <= y.support_size() ? y : x;
  ExactComplex sum;
  for (const auto& [i, c] : small.entries()) {
    auto it = large.entries().find(i);
    if (it == large.entries().end()) continue;
    const ExactComplex& xi = (&small == &x) ? c : it->second;
    const ExactComplex& yi = (&small == &x) ? it->second : c;
    sum += xi * yi.conj();
  }
  return sum;
}

}  // namespace detail

}  // namespace dclab
