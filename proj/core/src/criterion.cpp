#include "dclab/criterion.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "dclab/detail/parallel.hpp"
#include "dclab/errors.hpp"
#include "dclab/orbits.hpp"

namespace dclab {

namespace {

Rational two_pow(std::int64_t e) {
  return e >= 0 ? rational_pow(Rational(2), static_cast<std::uint64_t>(e))
                : 1 / rational_pow(Rational(2), static_cast<std::uint64_t>(-e));
}

bool supported_in(const SupportVector& v, IndexWindow w) {
  return std::all_of(v.entries().begin(), v.entries().end(), [&](const auto& e) { return w.contains(e.first); });
}

void require_probe_vector(const CriterionInstance& inst, const SupportVector& v, const char* what) {
  require_same_lattice(inst.op.lattice(), v.lattice(), what);
  if (!contains(inst.sub, v)) throw PreconditionViolation(std::string(what) + ": vector outside subspace");
  if (!supported_in(v, inst.dense_window))
    throw PreconditionViolation(std::string(what) + ": support leaves the dense window");
}

}  // namespace

std::uint64_t AffineSchedule::at(std::uint64_t k) const {
  const std::int64_t n = static_cast<std::int64_t>(a * k) + b;
  if (n < 0) throw PreconditionViolation("AffineSchedule: negative power");
  return static_cast<std::uint64_t>(n);
}

void validate(const CriterionInstance& inst) {
  if (inst.nk.a == 0) throw InvariantViolation("nk.a", "schedule must be strictly increasing");
  if (static_cast<std::int64_t>(inst.nk.a) + inst.nk.b < 1)
    throw InvariantViolation("nk.b", "schedule must start at a positive power");
  if (inst.k_max == 0) throw InvariantViolation("k_max", "k_max must be positive");
  if (inst.dense_window.empty()) throw InvariantViolation("dense_window", "empty window");
  if (!(inst.op.lattice() == inst.back_map.lattice()))
    throw InvariantViolation("back_map", "lattice differs from the operator's");
  if (!(inst.sub.lattice() == inst.op.lattice())) throw InvariantViolation("sub", "lattice differs from the operator's");
  validate(inst.sub);
}

bool operator==(const CriterionInstance& a, const CriterionInstance& b) {
  return a.op == b.op && a.sub == b.sub && a.nk == b.nk && a.back_map == b.back_map &&
         a.dense_window.lo == b.dense_window.lo && a.dense_window.hi == b.dense_window.hi && a.k_max == b.k_max;
}

std::vector<Probe> default_probes(const CriterionInstance& inst) {
  const IndexLattice lat = inst.op.lattice();
  const std::vector<Index> allowed = allowed_indices(inst.sub, inst.dense_window);
  std::vector<Probe> out;
  for (Index i : allowed) {
    out.push_back({SupportVector::basis(lat, i), SupportVector::basis(lat, i)});
  }
  const Rational half(1, 2);
  for (std::size_t t = 1; t < allowed.size(); ++t) {
    const Index i = allowed[t - 1];
    const Index j = allowed[t];
    SupportVector x(lat, {{i, ExactComplex(1)}, {j, ExactComplex(half)}});
    SupportVector y(lat, {{i, ExactComplex(-half)}, {j, ExactComplex(1)}});
    out.push_back({std::move(x), std::move(y)});
  }
  return out;
}

bool DecaySeries::tends_to_zero() const {
  if (values.empty() || !below_threshold) return false;
  if (decreasing_from >= values.size()) return false;
  return !ratio_squared || *ratio_squared < 1;
}

DecaySeries analyse_decay(std::vector<Rational> values) {
  DecaySeries s;
  s.values = std::move(values);
  const std::size_t count = s.values.size();
  if (count == 0) return s;
  std::size_t first = count;  // 1-based
  while (first > 1 && s.values[first - 2] > s.values[first - 1]) --first;
  s.decreasing_from = first;
  s.below_threshold = s.values.back() < power_of_ten(-18);

  if (count >= 3 && sgn(s.values[count - 2]) != 0 && sgn(s.values[count - 3]) != 0) {
    const Rational last = s.values[count - 1] / s.values[count - 2];
    if (s.values[count - 2] / s.values[count - 3] == last) {
      std::size_t g = count - 2;  // 1-based index of the run's first value
      while (g > 1 && sgn(s.values[g - 2]) != 0 && s.values[g - 1] / s.values[g - 2] == last) --g;
      s.geometric_from = g;
      s.ratio_squared = last;
      s.ratio = exact_sqrt(last);
    }
  }
  return s;
}

std::optional<std::uint64_t> right_inverse_threshold_scan(const CriterionInstance& inst, const SupportVector& y,
                                                          std::uint64_t k_max) {
  for (std::uint64_t k = k_max; k >= 1; --k) {
    const std::uint64_t n = inst.nk.at(k);
    if (!(apply_power(inst.op, apply_power(inst.back_map, y, n), n) == y)) {
      if (k == k_max) return std::nullopt;
      return k + 1;
    }
  }
  return 1;
}

namespace {

// Scalar factor of a scalar-like operator (kI or I), if it is one.
std::optional<ExactComplex> scalar_factor(const OperatorSpec& op) {
  if (const auto* s = std::get_if<ScalarOp>(&op.node())) return s->k;
  if (std::holds_alternative<IdentityOp>(op.node())) return ExactComplex(1);
  return std::nullopt;
}

// Composite weights r(j) along the path, in the order they are met as n
// grows, for one support index. Returns false when the composite never
// settles to 1.
struct PathFactors {
  std::vector<ExactComplex> factors;  // factor met at step t = 1, 2, ...
  std::vector<std::uint64_t> steps;   // the step n at which each factor joins
};

std::optional<std::uint64_t> settle_step(const PathFactors& path) {
  // Returns the smallest N with partial product 1 for every n >= N.
  ExactComplex product(1);
  std::uint64_t settled = 1;
  for (std::size_t t = 0; t < path.factors.size(); ++t) {
    product *= path.factors[t];
    const bool last = t + 1 == path.factors.size();
    if (!(product == ExactComplex(1))) {
      if (last) return std::nullopt;
      settled = path.steps[t + 1];
    }
  }
  return settled;
}

}  // namespace

std::optional<std::uint64_t> right_inverse_threshold_analytic(const CriterionInstance& inst, const SupportVector& y) {
  if (y.is_zero()) return 1;
  const OperatorSpec& op = inst.op;
  const OperatorSpec& back = inst.back_map;

  if (auto f = scalar_factor(op)) {
    auto g = scalar_factor(back);
    if (!g) throw Unsupported("right_inverse_threshold_analytic: mixed operator kinds");
    return (*f * *g == ExactComplex(1)) ? std::optional<std::uint64_t>(1) : std::nullopt;
  }

  // Intervals [lo, hi) of powers n where T^n back^n y != y.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> bad;

  if (op.is_forward_shift() && back.is_backward_shift()) {
    // T^n B^n e_i = prod_{j = i-n+1}^{i} r(j) e_i, r(j) = z_j w_{j-1}.
    if (op.lattice().kind != LatticeKind::bilateral) return std::nullopt;
    const WeightRule& w = op.shift_weights();
    const WeightRule& z = back.shift_weights();
    if (!(z.far_lower() * w.far_lower() == ExactComplex(1))) return std::nullopt;
    std::optional<Index> lr;
    if (auto c = z.constant_through()) lr = *c;
    if (auto c = w.constant_through()) lr = lr ? std::min(*lr, *c + 1) : *c + 1;
    for (const auto& [i, c] : y.entries()) {
      PathFactors path;
      if (lr) {
        for (Index j = i; j > *lr; --j) {
          ExactComplex r = z.at(j) * w.at(j - 1);
          if (r == ExactComplex(1)) continue;
          path.factors.push_back(std::move(r));
          path.steps.push_back(static_cast<std::uint64_t>(i - j + 1));
        }
      }
      auto settled = settle_step(path);
      if (!settled) return std::nullopt;
      if (*settled > 1) bad.emplace_back(1, *settled);
    }
  } else if (op.is_backward_shift() && back.is_forward_shift()) {
    // T^n F^n e_i = prod_{j = i}^{i+n-1} r(j) e_i, r(j) = w_j z_{j+1}.
    const WeightRule& z = op.shift_weights();
    const WeightRule& w = back.shift_weights();
    if (!(w.far_upper() * z.far_upper() == ExactComplex(1))) return std::nullopt;
    std::optional<Index> hr;
    if (auto c = w.constant_from()) hr = *c;
    if (auto c = z.constant_from()) hr = hr ? std::max(*hr, *c - 1) : *c - 1;
    for (const auto& [i, c] : y.entries()) {
      PathFactors path;
      if (hr) {
        for (Index j = i; j < *hr; ++j) {
          ExactComplex r = w.at(j) * z.at(j + 1);
          if (r == ExactComplex(1)) continue;
          path.factors.push_back(std::move(r));
          path.steps.push_back(static_cast<std::uint64_t>(j - i + 1));
        }
      }
      auto settled = settle_step(path);
      if (!settled) return std::nullopt;
      if (*settled > 1) bad.emplace_back(1, *settled);
    }
  } else {
    throw Unsupported("right_inverse_threshold_analytic: needs a shift with an opposite shift, or scalars");
  }

  // Only powers on the schedule matter; a bad interval is harmless when the
  // schedule jumps over it, so take the last k whose n_k lands inside one.
  // Partial products can also return to 1 inside [1, settled); scan those
  // powers exactly instead of assuming they fail.
  std::uint64_t worst = 0;
  for (const auto& [lo, hi] : bad) {
    for (std::uint64_t k = 1;; ++k) {
      const std::uint64_t n = inst.nk.at(k);
      if (n >= hi) break;
      if (n < lo) continue;
      if (!(apply_power(op, apply_power(back, y, n), n) == y)) worst = std::max(worst, k);
    }
  }
  return worst + 1;
}

LambdaChoice select_lambda(const Rational& norm_tx_squared, const Rational& norm_xk_squared, std::uint64_t k) {
  if (sgn(norm_tx_squared) < 0 || sgn(norm_xk_squared) < 0)
    throw PreconditionViolation("select_lambda: squared norms must be nonnegative");
  const bool tx_zero = sgn(norm_tx_squared) == 0;
  const bool xk_zero = sgn(norm_xk_squared) == 0;
  if (tx_zero && xk_zero) throw PreconditionViolation("select_lambda: both norms are zero");
  const std::int64_t kk = static_cast<std::int64_t>(k);

  LambdaChoice out;
  if (!tx_zero && !xk_zero) {
    out.case_number = 1;
    const Rational q = norm_xk_squared / norm_tx_squared;
    if (auto root = exact_fourth_root(q)) {
      out.lambda = *root;
    } else {
      const RootBracket b = fourth_root_bracket(q, root_bits_for(q, 4));
      out.lambda = q <= 1 ? b.lower : b.upper;
      out.exactness = Exactness::approximate;
    }
    out.within_disk = q <= 1;
    return out;
  }
  if (xk_zero) {
    out.case_number = 2;
    if (auto root = exact_sqrt(norm_tx_squared)) {
      out.lambda = Rational(two_pow(-kk) / *root);
    } else {
      out.lambda = Rational(two_pow(-kk) / sqrt_bracket(norm_tx_squared, root_bits_for(norm_tx_squared, 2)).upper);
      out.exactness = Exactness::approximate;
    }
  } else {
    out.case_number = 3;
    out.hypercyclic_path = true;
    if (auto root = exact_sqrt(norm_xk_squared)) {
      out.lambda = Rational(two_pow(kk) * *root);
    } else {
      out.lambda = Rational(two_pow(kk) * sqrt_bracket(norm_xk_squared, root_bits_for(norm_xk_squared, 2)).lower);
      out.exactness = Exactness::approximate;
    }
  }
  out.within_disk = magnitude_squared(out.lambda) <= 1;
  return out;
}

CriterionReport evaluate_criterion(const CriterionInstance& inst, std::span<const Probe> probes, std::uint64_t k_max,
                                   unsigned threads) {
  validate(inst);
  if (probes.empty()) throw PreconditionViolation("evaluate_criterion: no probes");
  if (k_max == 0) throw PreconditionViolation("evaluate_criterion: k_max must be positive");
  for (const auto& p : probes) {
    require_probe_vector(inst, p.x, "evaluate_criterion: probe x");
    require_probe_vector(inst, p.y, "evaluate_criterion: probe y");
  }

  CriterionReport report;
  report.k_max = k_max;
  report.a.entries.resize(probes.size());
  report.b.entries.resize(probes.size());

  detail::parallel_for(probes.size(), threads, [&](std::size_t idx) {
    const Probe& p = probes[idx];
    std::vector<Rational> xk_norms;
    std::vector<Rational> products;
    xk_norms.reserve(k_max);
    products.reserve(k_max);
    for (std::uint64_t k = 1; k <= k_max; ++k) {
      const std::uint64_t n = inst.nk.at(k);
      Rational xk = norm_squared(apply_power(inst.back_map, p.y, n));
      products.push_back(norm_squared(apply_power(inst.op, p.x, n)) * xk);
      xk_norms.push_back(std::move(xk));
    }
    CondAEntry& a = report.a.entries[idx];
    a.probe = idx;
    a.norms_squared = analyse_decay(std::move(xk_norms));
    a.threshold_scan = right_inverse_threshold_scan(inst, p.y, k_max);
    try {
      a.threshold_analytic = right_inverse_threshold_analytic(inst, p.y);
    } catch (const Unsupported&) {
      a.threshold_analytic = std::nullopt;
    }
    a.passed = a.norms_squared.tends_to_zero() && a.threshold_scan.has_value();

    CondBEntry& b = report.b.entries[idx];
    b.probe = idx;
    b.products_squared = analyse_decay(std::move(products));
    b.passed = b.products_squared.tends_to_zero();
  });

  for (const auto& a : report.a.entries) {
    if (!a.threshold_scan) {
      throw InvariantViolation("back_map", "not a right inverse of the operator along the schedule for probe " +
                                               std::to_string(a.probe));
    }
    report.a.threshold = std::max(report.a.threshold, *a.threshold_scan);
  }
  report.a.passed = std::all_of(report.a.entries.begin(), report.a.entries.end(), [](auto& e) { return e.passed; });
  report.b.passed = std::all_of(report.b.entries.begin(), report.b.entries.end(), [](auto& e) { return e.passed; });

  report.c.passed = true;
  report.c.scope = Scope::global;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    InvarianceVerdict v = invariance_check(inst.op, inst.sub, inst.nk.at(k), inst.dense_window);
    if (v.scope == Scope::window) report.c.scope = Scope::window;
    if (!v.holds) {
      report.c.passed = false;
      report.c.failing_k = k;
      report.c.scope = v.scope;
      report.c.failure = std::move(v);
      break;
    }
  }
  report.passed = report.a.passed && report.b.passed && report.c.passed;
  return report;
}

WitnessConstruction construct_diskcyclic_witness(const CriterionInstance& inst, const BallSpec& u1,
                                                 const BallSpec& u2, std::uint64_t k_max) {
  validate(inst);
  validate(u1, inst.sub);
  validate(u2, inst.sub);
  require_probe_vector(inst, u1.center, "construct_diskcyclic_witness: U1 center");
  require_probe_vector(inst, u2.center, "construct_diskcyclic_witness: U2 center");
  const SupportVector& x = u1.center;
  const SupportVector& y = u2.center;

  WitnessConstruction best;
  bool have_best = false;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    const std::uint64_t n = inst.nk.at(k);
    const SupportVector xk = apply_power(inst.back_map, y, n);
    const SupportVector tx = apply_power(inst.op, x, n);
    const Rational tx2 = norm_squared(tx);
    const Rational xk2 = norm_squared(xk);

    ExactComplex lambda(1);
    Exactness exactness = Exactness::exact;
    if (sgn(tx2) != 0 || sgn(xk2) != 0) {
      LambdaChoice choice = select_lambda(tx2, xk2, k);
      if (choice.lambda.is_zero() || magnitude_squared(choice.lambda) > 1) continue;
      lambda = choice.lambda;
      exactness = choice.exactness;
    }
    SupportVector z = axpy(lambda.reciprocal(), xk, x);
    SupportVector image = apply_power(inst.op, z, n).scaled(lambda);
    Rational d1 = distance_squared(z, u1.center);
    Rational d2 = distance_squared(image, u2.center);
    const bool hit = contains(inst.sub, z) && in_ball(u1, z) && contains(inst.sub, image) && in_ball(u2, image);

    if (hit || !have_best || d1 + d2 < best.distance_u1_squared + best.distance_u2_squared) {
      best = {hit, k, std::move(z), DiskScalar(lambda), std::move(image), exactness, std::move(d1), std::move(d2)};
      have_best = true;
    }
    if (hit) return best;
  }
  best.found = false;
  return best;
}

namespace {

// Steps after which a shift path from index s only meets far-field weights.
std::int64_t steps_to_far_field(const OperatorSpec& shift, Index s) {
  const WeightRule& w = shift.shift_weights();
  if (shift.is_forward_shift()) {
    auto h = w.constant_from();
    return h ? *h - s : 0;
  }
  auto l = w.constant_through();
  return l ? s - *l : 0;
}

}  // namespace

BasisReductionReport basis_reduction_check(const CriterionInstance& inst, std::span<const std::pair<Index, Index>> pairs,
                                           std::uint64_t k_max) {
  validate(inst);
  const OperatorSpec& op = inst.op;
  const OperatorSpec& back = inst.back_map;
  if (!op.is_shift() || op.lattice().kind != LatticeKind::bilateral || !is_invertible(op))
    throw PreconditionViolation("basis_reduction_check: operator must be an invertible bilateral shift");
  if (!back.is_shift() || back.lattice().kind != LatticeKind::bilateral || !back.shift_weights().all_nonzero())
    throw PreconditionViolation("basis_reduction_check: back map must be an invertible bilateral shift");
  if (pairs.empty()) throw PreconditionViolation("basis_reduction_check: no pairs");
  if (k_max == 0) throw PreconditionViolation("basis_reduction_check: k_max must be positive");
  for (const auto& [r, p] : pairs) {
    if (!inst.sub.allows(r) || !inst.sub.allows(p))
      throw PreconditionViolation("basis_reduction_check: index not in subspace");
  }

  const IndexLattice lat = op.lattice();
  auto series = [&](Index r, Index p) {
    std::vector<Rational> s;
    s.reserve(k_max);
    for (std::uint64_t k = 1; k <= k_max; ++k) {
      const std::uint64_t n = inst.nk.at(k);
      s.push_back(norm_squared(apply_power(op, SupportVector::basis(lat, r), n)) *
                  norm_squared(apply_power(back, SupportVector::basis(lat, p), n)));
    }
    return s;
  };

  std::int64_t need = 0;
  for (const auto& [r, p] : pairs) {
    need = std::max({need, steps_to_far_field(op, r), steps_to_far_field(back, p)});
  }
  std::uint64_t k_a = 1;
  while (static_cast<std::int64_t>(inst.nk.at(k_a)) < need) ++k_a;

  BasisReductionReport report;
  report.threshold = k_a;
  const std::vector<Rational> anchor = series(pairs[0].first, pairs[0].second);
  report.holds = true;
  for (const auto& [r, p] : pairs) {
    PairEvidence e;
    e.r = r;
    e.p = p;
    e.threshold_analytic = k_a;
    const std::vector<Rational> s = series(r, p);
    e.ratios.reserve(k_max);
    for (std::uint64_t k = 0; k < k_max; ++k) e.ratios.push_back(s[k] / anchor[k]);
    e.limit = e.ratios.back();
    std::uint64_t from = k_max;
    while (from > 1 && e.ratios[from - 2] == e.limit) --from;
    e.constant_from_scan = from;
    e.holds = k_a <= k_max && from <= k_a;
    report.holds = report.holds && e.holds;
    report.pairs.push_back(std::move(e));
  }
  return report;
}

namespace {

std::vector<ExactComplex> alpha_ladder(AlphaDomain domain) {
  std::vector<ExactComplex> out{ExactComplex(1)};
  if (domain == AlphaDomain::punctured_disk) {
    for (std::int64_t j = 1; j <= 16; ++j) out.emplace_back(two_pow(-j));
  }
  return out;
}

}  // namespace

TransitivityResult transitivity_probe(const OperatorSpec& op, const SubspaceSpec& sub, const BallSpec& u,
                                      const BallSpec& v, const TransitivityOptions& options) {
  validate(sub, true);
  validate(u, sub);
  validate(v, sub);
  require_same_lattice(op.lattice(), sub.lattice(), "transitivity_probe");

  std::set<Index> nudge;
  for (const auto* c : {&u.center, &v.center}) {
    for (const auto& [i, value] : c->entries()) {
      if (sub.allows(i)) nudge.insert(i);
    }
  }
  if (nudge.empty()) {
    const auto allowed = allowed_indices(sub, options.window);
    if (!allowed.empty()) nudge.insert(allowed.front());
  }
  std::vector<SupportVector> starts{v.center};
  for (Index i : nudge) {
    SupportVector w = v.center;
    w.add(i, ExactComplex(v.radius / 2));
    starts.push_back(std::move(w));
  }

  std::optional<OperatorSpec> inverse;
  if (is_invertible(op)) inverse = invert(op);

  TransitivityResult result;
  result.best_separation_squared = -1;
  const std::vector<ExactComplex> ladder = alpha_ladder(options.alpha_domain);

  auto attempt = [&](std::uint64_t n, const SupportVector& w, const SupportVector& tw, const ExactComplex& alpha,
                     Exactness exactness) {
    SupportVector image = tw.scaled(alpha);
    Rational sep = distance_squared(image, u.center);
    if (sgn(result.best_separation_squared) < 0 || sep < result.best_separation_squared)
      result.best_separation_squared = sep;
    if (!(contains(sub, w) && in_ball(v, w) && contains(sub, image) && in_ball(u, image))) return false;
    result.found = true;
    result.n = n;
    result.alpha = DiskScalar(alpha);
    result.witness = w;
    result.image = std::move(image);
    result.exactness = exactness;
    return true;
  };

  auto fit_alpha = [&](const ExactComplex& target) -> DiskFit {
    if (options.alpha_domain == AlphaDomain::unit_circle) return {DiskScalar(unit_phase_near(target)), Exactness::exact};
    return clamp_to_disk(target);
  };

  for (std::uint64_t n = 0; n <= options.max_n && !result.found; ++n) {
    for (const SupportVector& w : starts) {
      const SupportVector tw = apply_power(op, w, n);
      const Rational tw2 = norm_squared(tw);
      ExactComplex star = sgn(tw2) == 0 ? ExactComplex(0) : scale(detail::inner_product(u.center, tw), 1 / tw2);
      if (star.is_zero()) {
        for (const auto& a : ladder) {
          if (attempt(n, w, tw, a, Exactness::exact)) break;
        }
      } else {
        DiskFit fit = fit_alpha(star);
        attempt(n, w, tw, fit.alpha, fit.exactness);
      }
      if (result.found) break;
    }
    if (result.found || !inverse) continue;

    // w = v + T^{-n} u / alpha, so alpha T^n w = alpha T^n v + u.
    const SupportVector tv = apply_power(op, v.center, n);
    const SupportVector su = apply_power(*inverse, u.center, n);
    if (su.is_zero()) continue;
    const Rational tv2 = norm_squared(tv);
    ExactComplex alpha(1);
    Exactness exactness = Exactness::exact;
    if (sgn(tv2) != 0 && options.alpha_domain == AlphaDomain::punctured_disk) {
      LambdaChoice choice = select_lambda(tv2, norm_squared(su), std::max<std::uint64_t>(n, 1));
      DiskFit fit = clamp_to_disk(choice.lambda);
      alpha = fit.alpha;
      exactness = choice.exactness == Exactness::approximate ? choice.exactness : fit.exactness;
    }
    const SupportVector w = axpy(alpha.reciprocal(), su, v.center);
    attempt(n, w, apply_power(op, w, n), alpha, exactness);
  }

  if (sgn(result.best_separation_squared) < 0) result.best_separation_squared = 0;
  if (result.found) result.invariance = invariance_check(op, sub, result.n, options.window);
  return result;
}

}  // namespace dclab
