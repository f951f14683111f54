#include "dclab/subspaces.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "dclab/errors.hpp"

namespace dclab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::int64_t floor_mod(std::int64_t i, std::int64_t m) {
  std::int64_t r = i % m;
  return r < 0 ? r + m : r;
}

// Order used when reporting witnesses: smallest |i| first, nonnegative
// before negative.
bool witness_order(Index a, Index b) {
  auto ka = std::make_pair(a < 0 ? -a : a, a < 0);
  auto kb = std::make_pair(b < 0 ? -b : b, b < 0);
  return ka < kb;
}

Rational van_der_corput(std::uint64_t h) {
  mpz_class num = 0;
  mpz_class den = 1;
  while (h != 0) {
    num = num * 2 + static_cast<unsigned long>(h & 1u);
    den *= 2;
    h >>= 1u;
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

Rational unit_interval(std::uint64_t bits) {
  Rational q(mpz_class(static_cast<unsigned long>(bits >> 11)), mpz_class(1) << 53);
  q.canonicalize();
  return q;
}

}  // namespace

SubspaceSpec::SubspaceSpec(IndexMask mask) {
  if (mask.modulus < 1) throw InvariantViolation("sub.modulus", "modulus must be positive");
  std::set<std::int64_t> normalized;
  for (auto r : mask.allowed) normalized.insert(floor_mod(r, mask.modulus));
  mask.allowed = std::move(normalized);
  node_ = std::move(mask);
}

SubspaceSpec::SubspaceSpec(CoordinateSpan span) {
  for (Index i : span.indices) {
    if (!span.lattice.admits(i)) {
      throw InvariantViolation("sub.indices", "index " + std::to_string(i) + " outside " + describe(span.lattice));
    }
  }
  node_ = std::move(span);
}

SubspaceSpec::SubspaceSpec(Axis axis) {
  if (axis.dim < 1) throw InvariantViolation("sub.dim", "dimension must be positive");
  if (axis.axis < 0 || axis.axis >= axis.dim) throw InvariantViolation("sub.axis", "axis outside dimension");
  node_ = axis;
}

IndexLattice SubspaceSpec::lattice() const {
  return std::visit(overloaded{
                        [](const IndexMask& m) { return m.lattice; },
                        [](const CoordinateSpan& s) { return s.lattice; },
                        [](const Axis& a) { return IndexLattice::finite(a.dim); },
                    },
                    node_);
}

bool SubspaceSpec::allows(Index i) const {
  return std::visit(overloaded{
                        [&](const IndexMask& m) {
                          return m.lattice.admits(i) && m.allowed.count(floor_mod(i, m.modulus)) != 0;
                        },
                        [&](const CoordinateSpan& s) { return s.indices.count(i) != 0; },
                        [&](const Axis& a) { return i == a.axis; },
                    },
                    node_);
}

bool SubspaceSpec::is_nontrivial() const {
  return std::visit(overloaded{
                        [&](const IndexMask& m) {
                          if (m.lattice.is_finite()) {
                            bool in = false;
                            bool out = false;
                            for (Index i = 0; i < m.lattice.dim; ++i) (allows(i) ? in : out) = true;
                            return in && out;
                          }
                          return !m.allowed.empty() && static_cast<std::int64_t>(m.allowed.size()) < m.modulus;
                        },
                        [](const CoordinateSpan& s) {
                          if (s.indices.empty()) return false;
                          return !s.lattice.is_finite() || static_cast<std::int64_t>(s.indices.size()) < s.lattice.dim;
                        },
                        [](const Axis& a) { return a.dim >= 2; },
                    },
                    node_);
}

void validate(const SubspaceSpec& sub, bool allow_trivial) {
  if (!allow_trivial && !sub.is_nontrivial()) {
    throw InvariantViolation("sub", "subspace must be nontrivial (some index allowed, some excluded)");
  }
}

std::string describe(const SubspaceSpec& sub) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const IndexMask& m) {
                   out << "index_mask[" << describe(m.lattice) << "](mod " << m.modulus << " in {";
                   bool first = true;
                   for (auto r : m.allowed) {
                     out << (first ? "" : ",") << r;
                     first = false;
                   }
                   out << "})";
                 },
                 [&](const CoordinateSpan& s) { out << "span[" << describe(s.lattice) << "](" << s.indices.size() << ")"; },
                 [&](const Axis& a) { out << "axis " << a.axis << " of C^" << a.dim; },
             },
             sub.node());
  return out.str();
}

void validate(const BallSpec& ball, const SubspaceSpec& sub) {
  if (sgn(ball.radius) <= 0) throw InvariantViolation("ball.radius", "radius must be positive");
  require_same_lattice(sub.lattice(), ball.center.lattice(), "ball");
  if (!contains(sub, ball.center)) throw InvariantViolation("ball.center", "center is not in the subspace");
}

bool in_ball(const BallSpec& ball, const SupportVector& v) {
  return distance_squared(ball.center, v) < ball.radius * ball.radius;
}

bool contains(const SubspaceSpec& sub, const SupportVector& v) {
  require_same_lattice(sub.lattice(), v.lattice(), "contains");
  return std::all_of(v.entries().begin(), v.entries().end(), [&](const auto& e) { return sub.allows(e.first); });
}

SupportVector project(const SubspaceSpec& sub, const SupportVector& v) {
  require_same_lattice(sub.lattice(), v.lattice(), "project");
  SupportVector out(v.lattice());
  for (const auto& [i, c] : v.entries()) {
    if (sub.allows(i)) out.set(i, c);
  }
  return out;
}

std::vector<Index> allowed_indices(const SubspaceSpec& sub, IndexWindow window) {
  std::vector<Index> out;
  const IndexLattice lattice = sub.lattice();
  for (Index i = window.lo; i <= window.hi; ++i) {
    if (lattice.admits(i) && sub.allows(i)) out.push_back(i);
  }
  return out;
}

InvarianceVerdict invariance_check(const OperatorSpec& op, const SubspaceSpec& sub, std::uint64_t n,
                                   IndexWindow window) {
  require_same_lattice(op.lattice(), sub.lattice(), "invariance_check");
  const IndexLattice lattice = sub.lattice();
  if (lattice.is_finite()) window = {0, lattice.dim - 1};
  if (window.empty()) throw PreconditionViolation("invariance_check: empty window");

  InvarianceVerdict verdict;
  std::vector<Index> indices = allowed_indices(sub, window);
  std::sort(indices.begin(), indices.end(), witness_order);
  for (Index i : indices) {
    ++verdict.checked;
    SupportVector image = apply_power(op, SupportVector::basis(lattice, i), n);
    if (!contains(sub, image)) {
      verdict.holds = false;
      verdict.witness = i;
      verdict.witness_image = std::move(image);
      break;
    }
  }

  const bool coordinate_preserving = n == 0 || std::holds_alternative<ScalarOp>(op.node()) ||
                                     std::holds_alternative<IdentityOp>(op.node());
  if (lattice.is_finite() || coordinate_preserving) {
    verdict.scope = Scope::global;
    return verdict;
  }

  const auto* mask = std::get_if<IndexMask>(&sub.node());
  if (!op.is_shift() || mask == nullptr) return verdict;

  const bool forward = op.is_forward_shift();
  const std::int64_t m = mask->modulus;
  const std::int64_t step = floor_mod(static_cast<std::int64_t>(n % static_cast<std::uint64_t>(m)), m);
  const std::int64_t displacement = forward ? step : m - step;
  std::optional<std::int64_t> bad_residue;
  for (auto a : mask->allowed) {
    if (mask->allowed.count(floor_mod(a + displacement, m)) == 0) {
      bad_residue = a;
      break;
    }
  }
  if (!bad_residue) {
    // Shifting by n permutes residue classes into allowed ones.
    verdict.scope = Scope::global;
    return verdict;
  }
  if (!op.shift_weights().all_nonzero()) return verdict;  // a zero weight may still rescue membership

  verdict.scope = Scope::global;
  verdict.holds = false;
  if (verdict.witness) return verdict;

  Index i = *bad_residue;
  if (lattice.kind == LatticeKind::bilateral) {
    if (witness_order(i - m, i)) i -= m;
  } else if (!forward && i < static_cast<Index>(n)) {
    i += m * ((static_cast<Index>(n) - i + m - 1) / m);
  }
  verdict.witness = i;
  verdict.witness_image = apply_power(op, SupportVector::basis(lattice, i), n);
  return verdict;
}

std::vector<SupportVector> sample_targets(const SubspaceSpec& sub, const Rational& radius, std::size_t count,
                                          IndexWindow window, std::uint64_t seed) {
  if (sgn(radius) <= 0) throw PreconditionViolation("sample_targets: radius must be positive");
  const std::vector<Index> allowed = allowed_indices(sub, window);
  if (allowed.empty()) throw PreconditionViolation("sample_targets: window holds no allowed index");
  const IndexLattice lattice = sub.lattice();

  std::vector<SupportVector> out;
  out.reserve(count);
  if (count == 0) return out;
  out.emplace_back(lattice);

  for (std::size_t h = 0; h < allowed.size() && out.size() < count; ++h) {
    Rational v = van_der_corput(h);
    Rational a = v < Rational(1, 2) ? Rational(2 * v) : Rational(2 * v - 2);
    out.push_back(SupportVector::basis(lattice, allowed[h], scale(unit_phase_from_parameter(a), radius)));
  }

  std::mt19937_64 rng(seed);
  const auto pick = [&] { return allowed[static_cast<std::size_t>(rng() % allowed.size())]; };
  while (out.size() < count) {
    const int terms = (allowed.size() >= 2 && (rng() & 1u)) ? 2 : 1;
    SupportVector v(lattice);
    for (int t = 0; t < terms; ++t) {
      Index index = pick();
      Rational magnitude = radius * unit_interval(rng()) / terms;
      Rational phase_parameter = 2 * unit_interval(rng()) - 1;
      v.add(index, scale(unit_phase_from_parameter(phase_parameter), magnitude));
    }
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<std::pair<BallSpec, BallSpec>> sample_ball_pairs(const SubspaceSpec& sub, const Rational& radius,
                                                             std::size_t count, IndexWindow window,
                                                             std::uint64_t seed) {
  std::vector<SupportVector> centers = sample_targets(sub, radius, 2 * count, window, seed);
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ull);
  const auto draw_radius = [&] {
    Rational r(static_cast<long>(1 + rng() % 8), 8);
    r.canonicalize();
    return r;
  };
  std::vector<std::pair<BallSpec, BallSpec>> out;
  out.reserve(count);
  for (std::size_t p = 0; p < count; ++p) {
    BallSpec u{centers[2 * p], draw_radius()};
    BallSpec v{centers[2 * p + 1], draw_radius()};
    out.emplace_back(std::move(u), std::move(v));
  }
  return out;
}

}  // namespace dclab
