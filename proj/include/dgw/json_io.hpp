#pragma once

#include <json.hpp>
#include <string>

#include "dgw/nori.hpp"

namespace dgw {

using Json = nlohmann::ordered_json;

// Elements serialize as little-endian coefficient arrays [c0, c1, ...] in the
// modulus basis; contexts as {p, e, M, modulus}. Bivariate entries use the
// term grammar "c*s^a*t^b" joined by "+" with c an element literal.

Json elem_to_json(const FieldElem& x);
FieldElem elem_from_json(const FieldCtx& ctx, const Json& j);

Json ctx_to_json(const FieldCtx& ctx);
const FieldCtx& ctx_from_json(const Json& j);

Json poly_to_json(const Poly& p);
Poly poly_from_json(const FieldCtx& ctx, const Json& j);

Json place_to_json(const PlaceFin& place);
PlaceFin place_from_json(const FieldCtx& ctx, const Json& j);

std::string bivar_to_string(const BivarEntry& e);
BivarEntry bivar_from_string(const FieldCtx& ctx, const std::string& s);

Json series_to_json(const TruncSeries& s);
TruncSeries series_from_json(const FieldCtx& ctx, const Json& j);

Json series_matrix_to_json(const TruncSeriesMatrix& m);
TruncSeriesMatrix series_matrix_from_json(const FieldCtx& ctx, const Json& j);

Json fqmat_to_json(const FqMat& m);
FqMat fqmat_from_json(const FieldCtx& ctx, const Json& j);

Json module_to_json(const FrobModule& m);
FrobModule module_from_json(const Json& j);

Json instance_to_json(const SlInstance& inst);
SlInstance instance_from_json(const Json& j);

Json witness_to_json(const Witness& w);
Json place_results_to_json(const FrobModule& m, const std::vector<PlaceResult>& results,
                           unsigned prec, unsigned m_max, uint64_t seed);

Json report_to_json(const GenerationReport& rep);

Json motive_to_json(const PreTMotive& p);

/// Read/parse helpers; Errc::parse_error on malformed input.
Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

} // namespace dgw
