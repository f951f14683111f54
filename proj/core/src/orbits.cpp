#include "dclab/orbits.hpp"

#include <algorithm>

#include "dclab/detail/parallel.hpp"
#include "dclab/errors.hpp"

namespace dclab {

Rational default_tol_squared() { return power_of_ten(-18); }

DiskFit clamp_to_disk(const ExactComplex& z) {
  const Rational m = magnitude_squared(z);
  if (m <= 1) return {DiskScalar(z), Exactness::exact};
  if (auto root = exact_sqrt(m)) return {DiskScalar(scale(z, 1 / *root)), Exactness::exact};
  const RootBracket b = sqrt_bracket(m, root_bits_for(m, 2));
  return {DiskScalar(scale(z, 1 / b.upper)), Exactness::approximate};
}

DiskFit best_disk_multiple(const SupportVector& v, const SupportVector& target) {
  const Rational vv = norm_squared(v);
  if (sgn(vv) == 0) throw PreconditionViolation("best_disk_multiple: zero direction");
  return clamp_to_disk(scale(detail::inner_product(target, v), 1 / vv));
}

namespace {

bool may_reach_target(const OperatorSpec& op, const SupportVector& x, std::uint64_t n, const SupportVector& target) {
  for (const auto& [i, c] : target.entries()) {
    if (power_may_touch(op, x, n, i)) return true;
  }
  return false;
}

}  // namespace

DiskOrbitSearch disk_orbit_witness(const OperatorSpec& op, const SupportVector& x, const SupportVector& target,
                                   const SubspaceSpec& sub, const SearchOptions& options) {
  require_same_lattice(op.lattice(), x.lattice(), "disk_orbit_witness: x");
  require_same_lattice(op.lattice(), target.lattice(), "disk_orbit_witness: target");
  if (x.is_zero()) throw PreconditionViolation("disk_orbit_witness: x must be nonzero");
  if (!contains(sub, target)) throw PreconditionViolation("disk_orbit_witness: target outside subspace");

  DiskOrbitSearch out;
  out.candidate.point = SupportVector(op.lattice());
  out.candidate.residual_squared = norm_squared(target);
  if (out.candidate.residual_squared <= options.tol_squared) {
    out.found = true;
    return out;
  }

  for (std::uint64_t n = 0; n <= options.max_n; ++n) {
    if (!may_reach_target(op, x, n, target)) continue;
    SupportVector v = apply_power(op, x, n);
    if (v.is_zero() || !contains(sub, v)) continue;
    DiskFit fit = best_disk_multiple(v, target);
    SupportVector point = v.scaled(fit.alpha);
    Rational residual = distance_squared(point, target);
    const bool hit = residual <= options.tol_squared;
    if (hit || residual < out.candidate.residual_squared) {
      out.candidate = {n, fit.alpha, std::move(point), std::move(residual), fit.exactness};
    }
    if (hit) {
      out.found = true;
      return out;
    }
  }
  return out;
}

ConeOrbitSearch cone_orbit_witness(const OperatorSpec& op, const SupportVector& x, const SupportVector& target,
                                   const SearchOptions& options) {
  require_same_lattice(op.lattice(), x.lattice(), "cone_orbit_witness: x");
  require_same_lattice(op.lattice(), target.lattice(), "cone_orbit_witness: target");
  if (x.is_zero()) throw PreconditionViolation("cone_orbit_witness: x must be nonzero");

  ConeOrbitSearch out;
  out.candidate.point = SupportVector(op.lattice());
  out.candidate.residual_squared = norm_squared(target);
  if (out.candidate.residual_squared <= options.tol_squared) {
    out.found = true;
    return out;
  }
  for (std::uint64_t n = 0; n <= options.max_n; ++n) {
    if (!may_reach_target(op, x, n, target)) continue;
    SupportVector v = apply_power(op, x, n);
    if (v.is_zero()) continue;
    ExactComplex beta = scale(detail::inner_product(target, v), 1 / norm_squared(v));
    SupportVector point = v.scaled(beta);
    Rational residual = distance_squared(point, target);
    const bool hit = residual <= options.tol_squared;
    if (hit || residual < out.candidate.residual_squared) {
      out.candidate = {n, std::move(beta), std::move(point), std::move(residual)};
    }
    if (hit) {
      out.found = true;
      return out;
    }
  }
  return out;
}

std::vector<std::size_t> CoverageReport::miss_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].hit) out.push_back(i);
  }
  return out;
}

CoverageReport coverage_report(const OperatorSpec& op, const SupportVector& x, const SubspaceSpec& sub,
                               std::span<const SupportVector> targets, const SearchOptions& options,
                               unsigned threads) {
  for (const auto& t : targets) {
    require_same_lattice(op.lattice(), t.lattice(), "coverage_report: target");
    if (!contains(sub, t)) throw PreconditionViolation("coverage_report: target outside subspace");
  }
  CoverageReport report;
  report.targets = targets.size();
  report.tol_squared = options.tol_squared;
  report.max_n = options.max_n;
  report.rows.resize(targets.size());
  detail::parallel_for(targets.size(), threads, [&](std::size_t i) {
    DiskOrbitSearch s = disk_orbit_witness(op, x, targets[i], sub, options);
    report.rows[i] = {s.found, std::move(s.candidate)};
  });
  for (const auto& row : report.rows) {
    if (row.outcome.exactness == Exactness::approximate) report.exactness = Exactness::approximate;
    if (!row.hit) continue;
    ++report.hits;
    report.max_residual_squared = std::max(report.max_residual_squared, row.outcome.residual_squared);
  }
  return report;
}

namespace {

bool bounded_for_all_n(const OperatorSpec& op) {
  return std::visit(
      [](const auto& node) -> bool {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, IdentityOp>) {
          return true;
        } else if constexpr (std::is_same_v<T, ScalarOp>) {
          return magnitude_squared(node.k) <= 1;
        } else if constexpr (std::is_same_v<T, DirectSum>) {
          return std::all_of(node.parts.begin(), node.parts.end(),
                             [](const DirectSumPart& p) { return bounded_for_all_n(*p.op); });
        } else {
          // Contractive shift: every weight in the closed disk.
          Rational sup = 0;
          const WeightRule& w = node.weights;
          if (w.constant_from() || w.constant_through()) {
            // Piecewise rules: check the far fields and the finite middle.
            Index lo = w.constant_through().value_or(0);
            Index hi = w.constant_from().value_or(0);
            for (Index j = lo; j <= hi; ++j) sup = std::max(sup, magnitude_squared(w.at(j)));
          }
          sup = std::max(sup, magnitude_squared(w.far_upper()));
          sup = std::max(sup, magnitude_squared(w.far_lower()));
          return sup <= 1;
        }
      },
      op.node());
}

}  // namespace

BoundCertificate boundedness_certificate(const OperatorSpec& op, const SupportVector& x, std::uint64_t max_n) {
  require_same_lattice(op.lattice(), x.lattice(), "boundedness_certificate");
  BoundCertificate cert;
  cert.max_n = max_n;
  SupportVector v = x;
  cert.bound_squared = norm_squared(v);
  for (std::uint64_t n = 1; n <= max_n; ++n) {
    v = apply(op, v);
    Rational m = norm_squared(v);
    if (m > cert.bound_squared) {
      cert.bound_squared = std::move(m);
      cert.argmax_n = n;
    }
  }
  cert.bound = exact_sqrt(cert.bound_squared);
  cert.analytic = bounded_for_all_n(op);
  return cert;
}

namespace {

// inf |w_j|^2 over a shift's weights.
Rational weight_floor_squared(const WeightRule& w) {
  Rational floor = w.min_magnitude_squared();
  return floor;
}

}  // namespace

GrowthCertificate growth_certificate(const OperatorSpec& op, const SupportVector& x, std::uint64_t n_first,
                                     std::uint64_t n_last) {
  require_same_lattice(op.lattice(), x.lattice(), "growth_certificate");
  if (n_first > n_last) throw PreconditionViolation("growth_certificate: empty range");
  GrowthCertificate cert;
  SupportVector v = apply_power(op, x, n_first);
  for (std::uint64_t n = n_first;; ++n) {
    cert.norms_squared.emplace_back(n, norm_squared(v));
    if (n == n_last) break;
    v = apply(op, v);
  }
  cert.strictly_increasing = true;
  for (std::size_t i = 1; i < cert.norms_squared.size(); ++i) {
    if (!(cert.norms_squared[i].second > cert.norms_squared[i - 1].second)) cert.strictly_increasing = false;
  }
  cert.emitted = cert.strictly_increasing && cert.norms_squared.size() >= 2;
  cert.threshold = n_first;
  cert.bound_squared = cert.norms_squared.front().second;

  // A forward shift, or a backward shift on Z, maps the orthonormal basis to
  // orthogonal vectors, so |T v| >= inf|w| |v|.
  const bool injective_shift =
      op.is_forward_shift() || (op.is_backward_shift() && op.lattice().kind == LatticeKind::bilateral);
  if (injective_shift && !x.is_zero()) {
    Rational c2 = weight_floor_squared(op.shift_weights());
    if (c2 > 1) {
      bool verified = true;
      const Rational x2 = norm_squared(x);
      for (const auto& [n, m] : cert.norms_squared) {
        if (m < rational_pow(c2, n) * x2) verified = false;
      }
      cert.analytic = verified;
      cert.rate_squared = c2;
      cert.rate = exact_sqrt(c2);
    }
  }
  return cert;
}

SupportVector seed_from_targets(const OperatorSpec& op, const OperatorSpec& back_map,
                                std::span<const SupportVector> targets, std::uint64_t spacing) {
  if (spacing == 0) throw PreconditionViolation("seed_from_targets: spacing must be positive");
  require_same_lattice(op.lattice(), back_map.lattice(), "seed_from_targets");
  if (op.lattice().kind != LatticeKind::bilateral) throw Unsupported("seed_from_targets: needs a shift on Z");

  ExactComplex grow;
  ExactComplex decay;
  if (op.is_forward_shift() && back_map.is_backward_shift()) {
    grow = op.shift_weights().far_upper();
    decay = back_map.shift_weights().far_lower();
  } else if (op.is_backward_shift() && back_map.is_forward_shift()) {
    grow = op.shift_weights().far_lower();
    decay = back_map.shift_weights().far_upper();
  } else {
    throw Unsupported("seed_from_targets: needs a shift and an opposite shift as back map");
  }
  if (decay.is_zero()) throw Unsupported("seed_from_targets: back map vanishes in the far field");

  const Rational q = magnitude_squared(pow(grow, spacing)) / magnitude_squared(pow(decay, spacing));
  Rational rho;
  if (auto root = exact_fourth_root(q)) {
    rho = *root;
  } else {
    rho = fourth_root_bracket(q, root_bits_for(q, 4)).upper;
  }
  if (rho < 1) throw Unsupported("seed_from_targets: orbit growth too weak for the back map");

  SupportVector x(op.lattice());
  Rational coefficient = 1;
  for (std::size_t j = 0; j < targets.size(); ++j, coefficient *= rho) {
    require_same_lattice(op.lattice(), targets[j].lattice(), "seed_from_targets: target");
    if (targets[j].is_zero()) continue;
    SupportVector piece = apply_power(back_map, targets[j], spacing * j).scaled(coefficient);
    for (const auto& [i, c] : piece.entries()) x.add(i, c);
  }
  return x;
}

}  // namespace dclab
