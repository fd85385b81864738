#pragma once

#include "corrlab/correspondence.hpp"
#include "corrlab/powers.hpp"

#include <json.hpp>

namespace corrlab {

using Json = nlohmann::ordered_json;

// Malformed payloads (wrong JSON shape for a matrix, vector, ...); maps to
// the schema-error exit status.
struct JsonError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrices are nested arrays of [re, im] pairs, row-major; shape is implicit.
Json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const Json& j);

Json vector_to_json(const CVector& v);
CVector vector_from_json(const Json& j);

// {"blocks":[{"size":n,"multiplicity":m},...]}
Json algebra_to_json(const Algebra& a);
AlgebraPtr algebra_from_json(const Json& j);

// {"algebra":..., "target_dim":d, "generators":[matrix,...]}
Json module_to_json(const ConcreteModule& e);
ConcreteModule module_from_json(const Json& j, const Tolerance& tol);

// {"source":..., "target":..., "kraus":[...]} or {..., "action":[...]}
Json cp_map_to_json(const CPMap& t);
CPMap cp_map_from_json(const Json& j, const Tolerance& tol);

// {"left":..., "right":..., "target_dim":d, "generators":[...],
//  "left_action":[...]}  (left action images on the ambient target)
Json correspondence_to_json(const Correspondence& e);
Correspondence correspondence_from_json(const Json& j, const Tolerance& tol);

Json multiplicity_to_json(const MultiplicityMatrix& m);

// {"g_dim":d, "factor1":{"k":k,"omega":[...]}, "factor2":{...}}
Json powers_to_json(const PowersMap& p);
PowersMap powers_from_json(const Json& j, const Tolerance& tol);

}  // namespace corrlab
