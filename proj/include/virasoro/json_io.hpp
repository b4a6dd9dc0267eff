#pragma once

#include "virasoro/correlators.hpp"
#include "virasoro/ext.hpp"
#include "virasoro/linalg.hpp"
#include "virasoro/scalar.hpp"
#include "virasoro/structure.hpp"
#include "virasoro/verma.hpp"

#include <json.hpp>

namespace vir {

using json = nlohmann::ordered_json;

json to_json(const QuadScalar& q);
json to_json(const Params& p);
json to_json(const Params& p, const Vector& v);
json to_json(const Matrix& m);

Params params_from_json(const json& j);
// {"params":..., "terms":[{"modes":[...],"coeff":"p/q"}]}
std::pair<Params, Vector> vector_from_json(const json& j);
Matrix matrix_from_json(const json& j);

json to_json(const GramMatrix& g);
json to_json(const EchelonGenerators& e);
EchelonGenerators echelon_from_json(const json& j);
json to_json(const BlockReport& r);
BlockReport block_report_from_json(const json& j);
json to_json(const RationalCorrelator& r);
RationalCorrelator correlator_from_json(const json& j);
json to_json(const CoefficientTable& t);
// matrices carry their shape so empty blocks survive
json to_json(const DerivationData& F);
DerivationData derivation_from_json(const json& j);
json to_json(const AxiomReport& r);
json to_json(const CocycleReport& r);
json to_json(const RoundtripReport& r);

}  // namespace vir
