#include "dclab/operators.hpp"

#include <algorithm>
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

void require_sequence_lattice(const IndexLattice& lattice, const char* what) {
  if (lattice.is_finite()) {
    throw InvariantViolation("op.lattice", std::string(what) + " requires lattice Z or N");
  }
}

std::uint64_t count_at_or_above(Index first, Index last, Index pivot) {
  if (last < pivot) return 0;
  Index from = std::max(first, pivot);
  return static_cast<std::uint64_t>(last - from + 1);
}

}  // namespace

// ---------------------------------------------------------------- WeightRule

ExactComplex WeightRule::at(Index j) const {
  return std::visit(overloaded{
                        [&](const SignSplit& s) { return j >= s.pivot ? s.upper : s.lower; },
                        [&](const WeightTable& t) {
                          auto it = t.entries.find(j);
                          return it == t.entries.end() ? t.fallback : it->second;
                        },
                    },
                    rule_);
}

ExactComplex WeightRule::product(Index first, std::uint64_t count) const {
  if (count == 0) return ExactComplex{1};
  const Index last = first + static_cast<Index>(count) - 1;
  return std::visit(
      overloaded{
          [&](const SignSplit& s) {
            std::uint64_t up = count_at_or_above(first, last, s.pivot);
            ExactComplex result = pow(s.upper, up);
            if (up != count) result *= pow(s.lower, count - up);
            return result;
          },
          [&](const WeightTable& t) {
            ExactComplex result{1};
            std::uint64_t inside = 0;
            for (auto it = t.entries.lower_bound(first); it != t.entries.end() && it->first <= last; ++it) {
              result *= it->second;
              ++inside;
            }
            if (inside != count) result *= pow(t.fallback, count - inside);
            return result;
          },
      },
      rule_);
}

bool WeightRule::all_nonzero() const {
  return std::visit(overloaded{
                        [](const SignSplit& s) { return !s.upper.is_zero() && !s.lower.is_zero(); },
                        [](const WeightTable& t) {
                          return !t.fallback.is_zero() &&
                                 std::none_of(t.entries.begin(), t.entries.end(),
                                              [](const auto& e) { return e.second.is_zero(); });
                        },
                    },
                    rule_);
}

Rational WeightRule::min_magnitude_squared() const {
  return std::visit(overloaded{
                        [](const SignSplit& s) {
                          Rational a = magnitude_squared(s.upper);
                          Rational b = magnitude_squared(s.lower);
                          return a < b ? a : b;
                        },
                        [](const WeightTable& t) {
                          Rational m = magnitude_squared(t.fallback);
                          for (const auto& [j, w] : t.entries) {
                            Rational x = magnitude_squared(w);
                            if (x < m) m = x;
                          }
                          return m;
                        },
                    },
                    rule_);
}

std::optional<Index> WeightRule::constant_from() const {
  return std::visit(overloaded{
                        [](const SignSplit& s) -> std::optional<Index> {
                          if (s.upper == s.lower) return std::nullopt;
                          return s.pivot;
                        },
                        [](const WeightTable& t) -> std::optional<Index> {
                          if (t.entries.empty()) return std::nullopt;
                          return t.entries.rbegin()->first + 1;
                        },
                    },
                    rule_);
}

std::optional<Index> WeightRule::constant_through() const {
  return std::visit(overloaded{
                        [](const SignSplit& s) -> std::optional<Index> {
                          if (s.upper == s.lower) return std::nullopt;
                          return s.pivot - 1;
                        },
                        [](const WeightTable& t) -> std::optional<Index> {
                          if (t.entries.empty()) return std::nullopt;
                          return t.entries.begin()->first - 1;
                        },
                    },
                    rule_);
}

ExactComplex WeightRule::far_upper() const {
  return std::visit(overloaded{
                        [](const SignSplit& s) { return s.upper; },
                        [](const WeightTable& t) { return t.fallback; },
                    },
                    rule_);
}

ExactComplex WeightRule::far_lower() const {
  return std::visit(overloaded{
                        [](const SignSplit& s) { return s.lower; },
                        [](const WeightTable& t) { return t.fallback; },
                    },
                    rule_);
}

WeightRule WeightRule::reciprocal_shifted(Index offset) const {
  return std::visit(overloaded{
                        [&](const SignSplit& s) -> WeightRule {
                          return SignSplit{s.upper.reciprocal(), s.lower.reciprocal(), s.pivot + offset};
                        },
                        [&](const WeightTable& t) -> WeightRule {
                          WeightTable out;
                          out.fallback = t.fallback.reciprocal();
                          for (const auto& [j, w] : t.entries) out.entries.emplace(j + offset, w.reciprocal());
                          return out;
                        },
                    },
                    rule_);
}

// -------------------------------------------------------------- OperatorSpec

OperatorSpec::OperatorSpec(ForwardShift op) : node_(std::move(op)) {
  lattice_ = std::get<ForwardShift>(node_).lattice;
  require_sequence_lattice(lattice_, "forward shift");
}

OperatorSpec::OperatorSpec(BackwardShift op) : node_(std::move(op)) {
  lattice_ = std::get<BackwardShift>(node_).lattice;
  require_sequence_lattice(lattice_, "backward shift");
}

OperatorSpec::OperatorSpec(ScalarOp op) : node_(std::move(op)) {
  lattice_ = IndexLattice::finite(std::get<ScalarOp>(node_).dim);
}

OperatorSpec::OperatorSpec(IdentityOp op) : node_(std::move(op)) {
  lattice_ = std::get<IdentityOp>(node_).lattice;
}

OperatorSpec::OperatorSpec(DirectSum op) : node_(std::move(op)) {
  const auto& sum = std::get<DirectSum>(node_);
  if (sum.parts.empty()) throw InvariantViolation("op.parts", "direct sum needs at least one part");
  std::vector<std::pair<Index, std::int64_t>> ranges;
  for (const auto& part : sum.parts) {
    if (!part.op) throw InvariantViolation("op.parts", "missing part operator");
    if (!part.op->lattice().is_finite()) {
      throw InvariantViolation("op.parts", "direct sum parts must act on finite-dimensional lattices");
    }
    ranges.emplace_back(part.offset, part.op->lattice().dim);
  }
  std::sort(ranges.begin(), ranges.end());
  Index next = 0;
  for (const auto& [offset, dim] : ranges) {
    if (offset != next) {
      throw InvariantViolation("op.parts", "direct sum parts must tile [0, dim) without gaps or overlap");
    }
    next = offset + dim;
  }
  if (next != sum.dim) throw InvariantViolation("op.dim", "direct sum dim does not match its parts");
  lattice_ = IndexLattice::finite(sum.dim);
}

OperatorSpec OperatorSpec::direct_sum(const std::vector<OperatorSpec>& parts) {
  DirectSum sum;
  Index offset = 0;
  for (const auto& part : parts) {
    sum.parts.push_back({std::make_shared<const OperatorSpec>(part), offset});
    offset += part.lattice().is_finite() ? part.lattice().dim : 0;
  }
  sum.dim = offset;
  return sum;
}

bool OperatorSpec::is_shift() const { return is_forward_shift() || is_backward_shift(); }

const WeightRule& OperatorSpec::shift_weights() const {
  if (const auto* f = std::get_if<ForwardShift>(&node_)) return f->weights;
  if (const auto* b = std::get_if<BackwardShift>(&node_)) return b->weights;
  throw Unsupported("operator " + describe(*this) + " is not a weighted shift");
}

bool operator==(const OperatorSpec& a, const OperatorSpec& b) {
  if (a.node_.index() != b.node_.index()) return false;
  if (const auto* sa = std::get_if<DirectSum>(&a.node_)) {
    const auto& sb = std::get<DirectSum>(b.node_);
    if (sa->dim != sb.dim || sa->parts.size() != sb.parts.size()) return false;
    for (std::size_t i = 0; i < sa->parts.size(); ++i) {
      if (sa->parts[i].offset != sb.parts[i].offset) return false;
      if (!(*sa->parts[i].op == *sb.parts[i].op)) return false;
    }
    return true;
  }
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        if constexpr (std::is_same_v<T, DirectSum>) {
          return false;
        } else {
          return lhs == std::get<T>(b.node_);
        }
      },
      a.node_);
}

std::string describe(const OperatorSpec& op) {
  std::ostringstream out;
  std::visit(overloaded{
                 [&](const ForwardShift& f) { out << "forward_shift[" << describe(f.lattice) << "]"; },
                 [&](const BackwardShift& b) { out << "backward_shift[" << describe(b.lattice) << "]"; },
                 [&](const ScalarOp& s) {
                   out << "scalar(" << to_string(s.k.re());
                   if (!s.k.is_real()) out << (sgn(s.k.im()) < 0 ? "" : "+") << to_string(s.k.im()) << "i";
                   out << ")[C^" << s.dim << "]";
                 },
                 [&](const IdentityOp& i) { out << "identity[" << describe(i.lattice) << "]"; },
                 [&](const DirectSum& d) {
                   out << "direct_sum(";
                   for (std::size_t i = 0; i < d.parts.size(); ++i) {
                     if (i != 0) out << " + ";
                     out << describe(*d.parts[i].op);
                   }
                   out << ")";
                 },
             },
             op.node());
  return out.str();
}

// ------------------------------------------------------------------- action

SupportVector apply(const OperatorSpec& op, const SupportVector& v) { return apply_power(op, v, 1); }

SupportVector apply_power(const OperatorSpec& op, const SupportVector& v, std::uint64_t n) {
  require_same_lattice(op.lattice(), v.lattice(), "apply_power");
  if (n == 0) return v;
  const auto shift = static_cast<Index>(n);
  return std::visit(
      overloaded{
          [&](const ForwardShift& f) {
            SupportVector out(v.lattice());
            for (const auto& [i, c] : v.entries()) out.set(i + shift, c * f.weights.product(i, n));
            return out;
          },
          [&](const BackwardShift& b) {
            SupportVector out(v.lattice());
            const bool unilateral = b.lattice.kind == LatticeKind::unilateral;
            for (const auto& [i, c] : v.entries()) {
              if (unilateral && i < shift) continue;  // passes through e_0, which B annihilates
              out.set(i - shift, c * b.weights.product(i - shift + 1, n));
            }
            return out;
          },
          [&](const ScalarOp& s) { return v.scaled(pow(s.k, n)); },
          [&](const IdentityOp&) { return v; },
          [&](const DirectSum& d) {
            SupportVector out(v.lattice());
            for (const auto& part : d.parts) {
              const Index dim = part.op->lattice().dim;
              SupportVector local(part.op->lattice());
              auto it = v.entries().lower_bound(part.offset);
              for (; it != v.entries().end() && it->first < part.offset + dim; ++it) {
                local.set(it->first - part.offset, it->second);
              }
              if (local.is_zero()) continue;
              const SupportVector image = apply_power(*part.op, local, n);
              for (const auto& [i, c] : image.entries()) out.set(i + part.offset, c);
            }
            return out;
          },
      },
      op.node());
}

ExactComplex weight_product(const OperatorSpec& op, Index start, std::uint64_t n) {
  if (!op.lattice().admits(start)) {
    throw PathExitsLattice("start index " + std::to_string(start) + " outside " + describe(op.lattice()));
  }
  if (const auto* f = std::get_if<ForwardShift>(&op.node())) return f->weights.product(start, n);
  if (const auto* b = std::get_if<BackwardShift>(&op.node())) {
    const auto shift = static_cast<Index>(n);
    if (b->lattice.kind == LatticeKind::unilateral && start < shift) {
      throw PathExitsLattice("backward path of length " + std::to_string(n) + " from " + std::to_string(start) +
                             " leaves N");
    }
    return b->weights.product(start - shift + 1, n);
  }
  throw Unsupported("weight_product requires a weighted shift, got " + describe(op));
}

bool is_invertible(const OperatorSpec& op) {
  return std::visit(overloaded{
                        [](const ForwardShift& f) {
                          return f.lattice.kind == LatticeKind::bilateral && f.weights.all_nonzero();
                        },
                        [](const BackwardShift& b) {
                          return b.lattice.kind == LatticeKind::bilateral && b.weights.all_nonzero();
                        },
                        [](const ScalarOp& s) { return !s.k.is_zero(); },
                        [](const IdentityOp&) { return true; },
                        [](const DirectSum& d) {
                          return std::all_of(d.parts.begin(), d.parts.end(),
                                             [](const auto& p) { return is_invertible(*p.op); });
                        },
                    },
                    op.node());
}

OperatorSpec invert(const OperatorSpec& op) {
  return std::visit(
      overloaded{
          [&](const ForwardShift& f) -> OperatorSpec {
            if (f.lattice.kind != LatticeKind::bilateral) throw NotInvertible("unilateral forward shift is not onto");
            if (!f.weights.all_nonzero()) throw NotInvertible("forward shift has a zero weight");
            // F^{-1} e_m = (1 / w_{m-1}) e_{m-1}
            return BackwardShift{f.lattice, f.weights.reciprocal_shifted(1)};
          },
          [&](const BackwardShift& b) -> OperatorSpec {
            if (b.lattice.kind != LatticeKind::bilateral) throw NotInvertible("unilateral backward shift kills e_0");
            if (!b.weights.all_nonzero()) throw NotInvertible("backward shift has a zero weight");
            // B^{-1} e_m = (1 / z_{m+1}) e_{m+1}
            return ForwardShift{b.lattice, b.weights.reciprocal_shifted(-1)};
          },
          [&](const ScalarOp& s) -> OperatorSpec {
            if (s.k.is_zero()) throw NotInvertible("zero scalar operator");
            return ScalarOp{s.dim, s.k.reciprocal()};
          },
          [&](const IdentityOp& i) -> OperatorSpec { return i; },
          [&](const DirectSum& d) -> OperatorSpec {
            DirectSum out{d.dim, {}};
            for (const auto& part : d.parts) {
              out.parts.push_back({std::make_shared<const OperatorSpec>(invert(*part.op)), part.offset});
            }
            return out;
          },
      },
      op.node());
}

OperatorSpec adjoint(const OperatorSpec& op) {
  if (const auto* s = std::get_if<ScalarOp>(&op.node())) return ScalarOp{s->dim, s->k.conj()};
  throw Unsupported("adjoint is only provided for scalar operators, got " + describe(op));
}

bool power_may_touch(const OperatorSpec& op, const SupportVector& v, std::uint64_t n, Index target_index) {
  const auto shift = static_cast<Index>(n);
  return std::visit(overloaded{
                        [&](const ForwardShift&) { return v.has(target_index - shift); },
                        [&](const BackwardShift&) { return v.has(target_index + shift); },
                        [&](const ScalarOp& s) { return v.has(target_index) && (n == 0 || !s.k.is_zero()); },
                        [&](const IdentityOp&) { return v.has(target_index); },
                        [&](const DirectSum&) { return v.has(target_index); },
                    },
                    op.node());
}

}  // namespace dclab
