#pragma once

#include <json.hpp>

#include "densecode/kraus.hpp"
#include "densecode/phase.hpp"
#include "densecode/solver.hpp"
#include "densecode/theorem.hpp"

namespace densecode {

using Json = nlohmann::ordered_json;

// Matrices are arrays of rows, each entry [re, im].
Json to_json(const SchmidtSpectrum& s);
Json to_json(const CMatrix& m);
Json to_json(const UnitaryMessageSet& set);
Json to_json(const KrausMessageSet& set);
// Thread count is omitted: results do not depend on it.
Json to_json(const SolverConfig& cfg);
Json to_json(const FeasibilityReport& rep);
Json to_json(const AlphabetResult& res);
Json to_json(const KrausFeasibilityReport& rep);
Json to_json(const OperatorBoundReport& rep);
Json to_json(const Theorem1Audit& audit);
Json to_json(const Theorem2Audit& audit);
Json to_json(const BoundaryResult& res);
Json to_json(const PhaseDiagram& pd);

// Throw Parse on malformed input.
SchmidtSpectrum spectrum_from_json(const Json& j);
CMatrix matrix_from_json(const Json& j);
UnitaryMessageSet unitary_set_from_json(const Json& j);
KrausMessageSet kraus_set_from_json(const Json& j);
SolverConfig config_from_json(const Json& j);

}  // namespace densecode
