#pragma once

// JSON forms of the domain types. Rationals are exact "p/q" strings,
// complex values {"re": "p/q", "im": "p/q"}. Report values additionally
// carry a shortest-decimal mirror for reading.
//
// Readers take the JSON pointer of the value they parse; shape errors throw
// ParseError and broken invariants throw InvariantViolation, both naming
// that path.

#include <string>

#include <nlohmann/json.hpp>

#include "dclab/criterion.hpp"
#include "dclab/lattice.hpp"
#include "dclab/operators.hpp"
#include "dclab/orbits.hpp"
#include "dclab/scalar.hpp"
#include "dclab/subspaces.hpp"

namespace dclab {

using Json = nlohmann::ordered_json;

Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j, const std::string& path);
// {"exact": "p/q", "decimal": "..."}
Json rational_with_mirror(const Rational& q);

Json complex_to_json(const ExactComplex& z);
// Accepts {"re", "im"} (either part optional) or a bare rational string.
ExactComplex complex_from_json(const Json& j, const std::string& path);

Json lattice_to_json(const IndexLattice& lattice);
IndexLattice lattice_from_json(const Json& j, const std::string& path);

Json window_to_json(const IndexWindow& w);
IndexWindow window_from_json(const Json& j, const std::string& path);

Json vector_to_json(const SupportVector& v);
SupportVector vector_from_json(const Json& j, const std::string& path);

Json weights_to_json(const WeightRule& w);
WeightRule weights_from_json(const Json& j, const std::string& path);

// Shifts with nonzero weights on Z are written with "invertible": true;
// the flag is checked on load.
Json operator_to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const Json& j, const std::string& path);

Json subspace_to_json(const SubspaceSpec& sub);
SubspaceSpec subspace_from_json(const Json& j, const std::string& path);

Json ball_to_json(const BallSpec& ball);
BallSpec ball_from_json(const Json& j, const std::string& path);

Json criterion_instance_to_json(const CriterionInstance& inst);
CriterionInstance criterion_instance_from_json(const Json& j, const std::string& path);

// Reports (write-only).
Json to_json(const InvarianceVerdict& v);
Json to_json(const DecaySeries& s);
Json to_json(const CoverageReport& r);
Json to_json(const ConeOrbitSearch& s);
Json to_json(const BoundCertificate& c);
Json to_json(const GrowthCertificate& c);
Json to_json(const CriterionReport& r);
Json to_json(const LambdaChoice& c);
Json to_json(const WitnessConstruction& w);
Json to_json(const BasisReductionReport& r);
Json to_json(const TransitivityResult& t);

std::string to_string(Scope s);

// Helpers shared by other readers.
namespace detail {
const Json& require_field(const Json& j, const char* key, const std::string& path);
std::string require_string(const Json& j, const std::string& path);
std::int64_t require_int(const Json& j, const std::string& path);
std::uint64_t require_uint(const Json& j, const std::string& path);
}  // namespace detail

}  // namespace dclab
