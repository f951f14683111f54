#include "dclab/serialize.hpp"

#include <algorithm>

#include "dclab/errors.hpp"

namespace dclab {

namespace detail {

const Json& require_field(const Json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(path + "/" + key + ": missing field");
  return *it;
}

std::string require_string(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path + ": expected a string");
  return j.get<std::string>();
}

std::int64_t require_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<std::int64_t>();
}

std::uint64_t require_uint(const Json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) throw ParseError(path + ": expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

}  // namespace detail

using detail::require_field;
using detail::require_int;
using detail::require_string;
using detail::require_uint;

namespace {

// Runs a domain constructor, attaching `path` to any invariant it rejects.
template <class F>
auto at_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(e.field().empty() ? path : path + "/" + e.field(), e.what());
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw InvariantViolation(path, e.what());
  }
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Json optional_rational(const std::optional<Rational>& q) { return q ? rational_with_mirror(*q) : Json(nullptr); }

template <class T>
Json optional_value(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

// Real weights stay plain strings, as in hand-written instance files.
Json scalar_to_json(const ExactComplex& z) { return z.is_real() ? rational_to_json(z.re()) : complex_to_json(z); }

}  // namespace

std::string to_string(Scope s) { return s == Scope::global ? "global" : "window"; }

Json rational_to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  const std::string text = require_string(j, path);
  try {
    return parse_rational(text);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json rational_with_mirror(const Rational& q) {
  Json j;
  j["exact"] = to_string(q);
  j["decimal"] = render_decimal(q);
  return j;
}

Json complex_to_json(const ExactComplex& z) {
  Json j;
  j["re"] = to_string(z.re());
  j["im"] = to_string(z.im());
  return j;
}

ExactComplex complex_from_json(const Json& j, const std::string& path) {
  if (j.is_string() || j.is_number_integer()) return ExactComplex(rational_from_json(j, path));
  if (!j.is_object()) throw ParseError(path + ": expected a complex value");
  Rational re = 0;
  Rational im = 0;
  if (auto it = j.find("re"); it != j.end()) re = rational_from_json(*it, path + "/re");
  if (auto it = j.find("im"); it != j.end()) im = rational_from_json(*it, path + "/im");
  return ExactComplex(re, im);
}

Json lattice_to_json(const IndexLattice& lattice) {
  switch (lattice.kind) {
    case LatticeKind::bilateral:
      return "Z";
    case LatticeKind::unilateral:
      return "N";
    case LatticeKind::finite:
      break;
  }
  Json j;
  j["dim"] = lattice.dim;
  return j;
}

IndexLattice lattice_from_json(const Json& j, const std::string& path) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "Z") return IndexLattice::integers();
    if (s == "N") return IndexLattice::naturals();
    throw ParseError(path + ": unknown lattice \"" + s + "\"");
  }
  const std::int64_t dim = require_int(require_field(j, "dim", path), path + "/dim");
  return at_path(path + "/dim", [&] { return IndexLattice::finite(dim); });
}

Json window_to_json(const IndexWindow& w) { return Json::array({w.lo, w.hi}); }

IndexWindow window_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ParseError(path + ": expected [lo, hi]");
  IndexWindow w{require_int(j[0], path + "/0"), require_int(j[1], path + "/1")};
  if (w.empty()) throw InvariantViolation(path, "empty window");
  return w;
}

Json vector_to_json(const SupportVector& v) {
  Json j;
  j["lattice"] = lattice_to_json(v.lattice());
  Json entries = Json::array();
  for (const auto& [i, c] : v.entries()) {
    Json e;
    e["index"] = i;
    e["re"] = to_string(c.re());
    e["im"] = to_string(c.im());
    entries.push_back(std::move(e));
  }
  j["entries"] = std::move(entries);
  return j;
}

SupportVector vector_from_json(const Json& j, const std::string& path) {
  const IndexLattice lattice = lattice_from_json(require_field(j, "lattice", path), path + "/lattice");
  const Json& entries = require_field(j, "entries", path);
  if (!entries.is_array()) throw ParseError(path + "/entries: expected an array");
  SupportVector v(lattice);
  std::optional<Index> previous;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const std::string p = path + "/entries/" + std::to_string(k);
    const Index i = require_int(require_field(entries[k], "index", p), p + "/index");
    if (previous && i <= *previous) throw InvariantViolation(p + "/index", "indices must be strictly increasing");
    previous = i;
    const ExactComplex c = complex_from_json(entries[k], p);
    at_path(p + "/index", [&] {
      v.set(i, c);
      return 0;
    });
  }
  return v;
}

Json weights_to_json(const WeightRule& w) {
  return std::visit(overloaded{
                        [](const SignSplit& s) {
                          Json j;
                          j["nonneg"] = scalar_to_json(s.upper);
                          j["neg"] = scalar_to_json(s.lower);
                          if (s.pivot != 0) j["pivot"] = s.pivot;
                          return j;
                        },
                        [](const WeightTable& t) {
                          Json j;
                          Json entries = Json::array();
                          for (const auto& [i, c] : t.entries) {
                            Json e;
                            e["index"] = i;
                            e["re"] = to_string(c.re());
                            e["im"] = to_string(c.im());
                            entries.push_back(std::move(e));
                          }
                          j["table"] = std::move(entries);
                          j["fallback"] = scalar_to_json(t.fallback);
                          return j;
                        },
                    },
                    w.rule());
}

WeightRule weights_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  if (j.contains("table")) {
    WeightTable t;
    t.fallback = complex_from_json(require_field(j, "fallback", path), path + "/fallback");
    const Json& entries = j["table"];
    if (!entries.is_array()) throw ParseError(path + "/table: expected an array");
    for (std::size_t k = 0; k < entries.size(); ++k) {
      const std::string p = path + "/table/" + std::to_string(k);
      const Index i = require_int(require_field(entries[k], "index", p), p + "/index");
      if (!t.entries.emplace(i, complex_from_json(entries[k], p)).second)
        throw InvariantViolation(p + "/index", "duplicate index");
    }
    return t;
  }
  SignSplit s;
  s.upper = complex_from_json(require_field(j, "nonneg", path), path + "/nonneg");
  s.lower = complex_from_json(require_field(j, "neg", path), path + "/neg");
  if (auto it = j.find("pivot"); it != j.end()) s.pivot = require_int(*it, path + "/pivot");
  return s;
}

Json operator_to_json(const OperatorSpec& op) {
  Json j = std::visit(overloaded{
                          [](const ForwardShift& s) {
                            Json o;
                            o["kind"] = "forward_shift";
                            o["lattice"] = lattice_to_json(s.lattice);
                            o["weights"] = weights_to_json(s.weights);
                            return o;
                          },
                          [](const BackwardShift& s) {
                            Json o;
                            o["kind"] = "backward_shift";
                            o["lattice"] = lattice_to_json(s.lattice);
                            o["weights"] = weights_to_json(s.weights);
                            return o;
                          },
                          [](const ScalarOp& s) {
                            Json o;
                            o["kind"] = "scalar";
                            o["dim"] = s.dim;
                            o["k"] = scalar_to_json(s.k);
                            return o;
                          },
                          [](const IdentityOp& s) {
                            Json o;
                            o["kind"] = "identity";
                            o["lattice"] = lattice_to_json(s.lattice);
                            return o;
                          },
                          [](const DirectSum& s) {
                            Json o;
                            o["kind"] = "direct_sum";
                            Json parts = Json::array();
                            for (const auto& p : s.parts) parts.push_back(operator_to_json(*p.op));
                            o["parts"] = std::move(parts);
                            return o;
                          },
                      },
                      op.node());
  if (op.is_shift() && is_invertible(op)) j["invertible"] = true;
  return j;
}

OperatorSpec operator_from_json(const Json& j, const std::string& path) {
  const std::string kind = require_string(require_field(j, "kind", path), path + "/kind");
  auto build = [&]() -> OperatorSpec {
    if (kind == "forward_shift" || kind == "backward_shift") {
      const IndexLattice lattice = lattice_from_json(require_field(j, "lattice", path), path + "/lattice");
      WeightRule w = weights_from_json(require_field(j, "weights", path), path + "/weights");
      return at_path(path, [&]() -> OperatorSpec {
        return kind == "forward_shift" ? OperatorSpec::forward_shift(lattice, std::move(w))
                                       : OperatorSpec::backward_shift(lattice, std::move(w));
      });
    }
    if (kind == "scalar") {
      const std::int64_t dim = require_int(require_field(j, "dim", path), path + "/dim");
      const ExactComplex k = complex_from_json(require_field(j, "k", path), path + "/k");
      return at_path(path, [&] { return OperatorSpec::scalar(dim, k); });
    }
    if (kind == "identity") {
      const IndexLattice lattice = lattice_from_json(require_field(j, "lattice", path), path + "/lattice");
      return at_path(path, [&] { return OperatorSpec::identity(lattice); });
    }
    if (kind == "direct_sum") {
      const Json& parts = require_field(j, "parts", path);
      if (!parts.is_array()) throw ParseError(path + "/parts: expected an array");
      std::vector<OperatorSpec> ops;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        ops.push_back(operator_from_json(parts[k], path + "/parts/" + std::to_string(k)));
      }
      return at_path(path + "/parts", [&] { return OperatorSpec::direct_sum(ops); });
    }
    throw ParseError(path + "/kind: unknown operator kind \"" + kind + "\"");
  };
  OperatorSpec op = build();
  if (auto it = j.find("invertible"); it != j.end()) {
    if (!it->is_boolean()) throw ParseError(path + "/invertible: expected a boolean");
    if (it->get<bool>() && !is_invertible(op))
      throw InvariantViolation(path + "/invertible", "declared invertible but it is not (zero weight or unilateral)");
  }
  return op;
}

Json subspace_to_json(const SubspaceSpec& sub) {
  return std::visit(overloaded{
                        [](const IndexMask& m) {
                          Json o;
                          o["kind"] = "index_mask";
                          if (!(m.lattice == IndexLattice::integers())) o["lattice"] = lattice_to_json(m.lattice);
                          o["modulus"] = m.modulus;
                          o["allowed"] = Json(std::vector<std::int64_t>(m.allowed.begin(), m.allowed.end()));
                          return o;
                        },
                        [](const CoordinateSpan& s) {
                          Json o;
                          o["kind"] = "span";
                          o["lattice"] = lattice_to_json(s.lattice);
                          o["indices"] = Json(std::vector<Index>(s.indices.begin(), s.indices.end()));
                          return o;
                        },
                        [](const Axis& a) {
                          Json o;
                          o["kind"] = "axis";
                          o["dim"] = a.dim;
                          o["axis"] = a.axis;
                          return o;
                        },
                    },
                    sub.node());
}

namespace {

std::vector<std::int64_t> int_list(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path + ": expected an array");
  std::vector<std::int64_t> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(require_int(j[k], path + "/" + std::to_string(k)));
  return out;
}

}  // namespace

SubspaceSpec subspace_from_json(const Json& j, const std::string& path) {
  const std::string kind = require_string(require_field(j, "kind", path), path + "/kind");
  auto build = [&]() -> SubspaceSpec {
    if (kind == "index_mask") {
      IndexMask m;
      if (auto it = j.find("lattice"); it != j.end()) m.lattice = lattice_from_json(*it, path + "/lattice");
      m.modulus = require_int(require_field(j, "modulus", path), path + "/modulus");
      for (auto r : int_list(require_field(j, "allowed", path), path + "/allowed")) m.allowed.insert(r);
      return at_path(path, [&] { return SubspaceSpec(m); });
    }
    if (kind == "span") {
      CoordinateSpan s;
      s.lattice = lattice_from_json(require_field(j, "lattice", path), path + "/lattice");
      for (auto i : int_list(require_field(j, "indices", path), path + "/indices")) s.indices.insert(i);
      return at_path(path, [&] { return SubspaceSpec(s); });
    }
    if (kind == "axis") {
      Axis a;
      a.dim = require_int(require_field(j, "dim", path), path + "/dim");
      a.axis = require_int(require_field(j, "axis", path), path + "/axis");
      return at_path(path, [&] { return SubspaceSpec(a); });
    }
    throw ParseError(path + "/kind: unknown subspace kind \"" + kind + "\"");
  };
  SubspaceSpec sub = build();
  at_path(path, [&] {
    validate(sub, true);
    return 0;
  });
  return sub;
}

Json ball_to_json(const BallSpec& ball) {
  Json j;
  j["center"] = vector_to_json(ball.center);
  j["radius"] = rational_to_json(ball.radius);
  return j;
}

BallSpec ball_from_json(const Json& j, const std::string& path) {
  BallSpec b;
  b.center = vector_from_json(require_field(j, "center", path), path + "/center");
  b.radius = rational_from_json(require_field(j, "radius", path), path + "/radius");
  if (sgn(b.radius) <= 0) throw InvariantViolation(path + "/radius", "radius must be positive");
  return b;
}

Json criterion_instance_to_json(const CriterionInstance& inst) {
  Json j;
  j["op"] = operator_to_json(inst.op);
  j["sub"] = subspace_to_json(inst.sub);
  j["back_map"] = operator_to_json(inst.back_map);
  j["nk"] = {{"a", inst.nk.a}, {"b", inst.nk.b}};
  j["k_max"] = inst.k_max;
  j["dense_window"] = window_to_json(inst.dense_window);
  return j;
}

CriterionInstance criterion_instance_from_json(const Json& j, const std::string& path) {
  CriterionInstance inst{
      operator_from_json(require_field(j, "op", path), path + "/op"),
      subspace_from_json(require_field(j, "sub", path), path + "/sub"),
      {},
      operator_from_json(require_field(j, "back_map", path), path + "/back_map"),
  };
  const Json& nk = require_field(j, "nk", path);
  inst.nk.a = require_uint(require_field(nk, "a", path + "/nk"), path + "/nk/a");
  inst.nk.b = require_int(require_field(nk, "b", path + "/nk"), path + "/nk/b");
  if (auto it = j.find("k_max"); it != j.end()) inst.k_max = require_uint(*it, path + "/k_max");
  if (auto it = j.find("dense_window"); it != j.end()) inst.dense_window = window_from_json(*it, path + "/dense_window");
  at_path(path, [&] {
    validate(inst);
    return 0;
  });
  return inst;
}

Json to_json(const InvarianceVerdict& v) {
  Json j;
  j["holds"] = v.holds;
  j["scope"] = to_string(v.scope);
  j["witness"] = optional_value(v.witness);
  j["witness_image"] = v.witness_image ? vector_to_json(*v.witness_image) : Json(nullptr);
  j["checked"] = v.checked;
  return j;
}

Json to_json(const DecaySeries& s) {
  Json j;
  Json values = Json::array();
  for (const auto& v : s.values) values.push_back(rational_with_mirror(v));
  j["values"] = std::move(values);
  j["decreasing_from"] = s.decreasing_from;
  j["below_threshold"] = s.below_threshold;
  j["geometric_from"] = optional_value(s.geometric_from);
  j["ratio_squared"] = optional_rational(s.ratio_squared);
  j["ratio"] = optional_rational(s.ratio);
  j["tends_to_zero"] = s.tends_to_zero();
  return j;
}

Json to_json(const CoverageReport& r) {
  Json j;
  j["passed"] = r.passed();
  j["targets"] = r.targets;
  j["hits"] = r.hits;
  j["tol_squared"] = rational_with_mirror(r.tol_squared);
  j["max_n"] = r.max_n;
  j["max_residual_squared"] = rational_with_mirror(r.max_residual_squared);
  j["exactness"] = std::string(to_string(r.exactness));
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    Json e;
    e["index"] = i;
    e["hit"] = row.hit;
    e["n"] = row.outcome.n;
    e["alpha"] = complex_to_json(row.outcome.alpha);
    e["residual_squared"] = rational_with_mirror(row.outcome.residual_squared);
    e["exactness"] = std::string(to_string(row.outcome.exactness));
    rows.push_back(std::move(e));
  }
  j["rows"] = std::move(rows);
  j["misses"] = Json(r.miss_indices());
  return j;
}

Json to_json(const ConeOrbitSearch& s) {
  Json j;
  j["found"] = s.found;
  j["n"] = s.candidate.n;
  j["beta"] = complex_to_json(s.candidate.beta);
  j["residual_squared"] = rational_with_mirror(s.candidate.residual_squared);
  return j;
}

Json to_json(const BoundCertificate& c) {
  Json j;
  j["bound_squared"] = rational_with_mirror(c.bound_squared);
  j["bound"] = optional_rational(c.bound);
  j["analytic"] = c.analytic;
  j["max_n"] = c.max_n;
  j["argmax_n"] = c.argmax_n;
  return j;
}

Json to_json(const GrowthCertificate& c) {
  Json j;
  Json norms = Json::array();
  for (const auto& [n, v] : c.norms_squared) {
    Json e;
    e["n"] = n;
    e["norm_squared"] = rational_with_mirror(v);
    norms.push_back(std::move(e));
  }
  j["norms_squared"] = std::move(norms);
  j["strictly_increasing"] = c.strictly_increasing;
  j["emitted"] = c.emitted;
  j["threshold"] = c.threshold;
  j["bound_squared"] = rational_with_mirror(c.bound_squared);
  j["analytic"] = c.analytic;
  j["rate_squared"] = optional_rational(c.rate_squared);
  j["rate"] = optional_rational(c.rate);
  return j;
}

Json to_json(const CriterionReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["k_max"] = r.k_max;

  Json a;
  a["passed"] = r.a.passed;
  a["threshold"] = r.a.threshold;
  Json a_entries = Json::array();
  for (const auto& e : r.a.entries) {
    Json o;
    o["probe"] = e.probe;
    o["passed"] = e.passed;
    o["threshold_scan"] = optional_value(e.threshold_scan);
    o["threshold_analytic"] = optional_value(e.threshold_analytic);
    o["norms_squared"] = to_json(e.norms_squared);
    a_entries.push_back(std::move(o));
  }
  a["entries"] = std::move(a_entries);
  j["cond_a"] = std::move(a);

  Json b;
  b["passed"] = r.b.passed;
  Json b_entries = Json::array();
  for (const auto& e : r.b.entries) {
    Json o;
    o["probe"] = e.probe;
    o["passed"] = e.passed;
    o["products_squared"] = to_json(e.products_squared);
    b_entries.push_back(std::move(o));
  }
  b["entries"] = std::move(b_entries);
  j["cond_b"] = std::move(b);

  Json c;
  c["passed"] = r.c.passed;
  c["scope"] = to_string(r.c.scope);
  c["failing_k"] = optional_value(r.c.failing_k);
  c["failure"] = r.c.failure ? to_json(*r.c.failure) : Json(nullptr);
  j["cond_c"] = std::move(c);
  return j;
}

Json to_json(const LambdaChoice& c) {
  Json j;
  j["case"] = c.case_number;
  j["lambda"] = complex_to_json(c.lambda);
  j["exactness"] = std::string(to_string(c.exactness));
  j["hypercyclic_path"] = c.hypercyclic_path;
  j["within_disk"] = c.within_disk;
  return j;
}

Json to_json(const WitnessConstruction& w) {
  Json j;
  j["found"] = w.found;
  j["k"] = w.k;
  j["z"] = vector_to_json(w.z);
  j["lambda"] = complex_to_json(w.lambda);
  j["exactness"] = std::string(to_string(w.exactness));
  j["distance_u1_squared"] = rational_with_mirror(w.distance_u1_squared);
  j["distance_u2_squared"] = rational_with_mirror(w.distance_u2_squared);
  return j;
}

Json to_json(const BasisReductionReport& r) {
  Json j;
  j["holds"] = r.holds;
  j["threshold"] = r.threshold;
  Json pairs = Json::array();
  for (const auto& p : r.pairs) {
    Json o;
    o["r"] = p.r;
    o["p"] = p.p;
    o["holds"] = p.holds;
    o["threshold_analytic"] = p.threshold_analytic;
    o["constant_from_scan"] = p.constant_from_scan;
    o["limit"] = rational_with_mirror(p.limit);
    pairs.push_back(std::move(o));
  }
  j["pairs"] = std::move(pairs);
  return j;
}

Json to_json(const TransitivityResult& t) {
  Json j;
  j["found"] = t.found;
  j["n"] = t.n;
  j["alpha"] = complex_to_json(t.alpha);
  j["witness"] = t.found ? vector_to_json(t.witness) : Json(nullptr);
  j["exactness"] = std::string(to_string(t.exactness));
  j["invariance"] = t.invariance ? to_json(*t.invariance) : Json(nullptr);
  j["best_separation_squared"] = rational_with_mirror(t.best_separation_squared);
  return j;
}

}  // namespace dclab
