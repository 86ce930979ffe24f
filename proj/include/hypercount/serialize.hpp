#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "json.hpp"

#include "hypercount/bounds.hpp"
#include "hypercount/enumerate.hpp"
#include "hypercount/linear_loci.hpp"
#include "hypercount/projective.hpp"

namespace hypercount {

using Json = nlohmann::json;

/// Integers that fit in int64 become JSON numbers, larger ones decimal
/// strings. Both forms are accepted on input.
Json mpz_to_json(const mpz_class& v);
mpz_class mpz_from_json(const Json& j);

Json to_json(const ProjectivePoint& p);
Json to_json(const LinearSubspace& s);
Json to_json(const CountReport& r);
Json to_json(const AttributionReport& r);
Json to_json(const ExponentFit& fit);
Json to_json(const ConeEquations& cone);

ProjectivePoint point_from_json(const Json& j);
/// Rebuilt from the basis; throws InvalidArgument if the stored Plücker
/// vector disagrees.
LinearSubspace subspace_from_json(const Json& j);
CountReport count_report_from_json(const Json& j);
AttributionReport attribution_from_json(const Json& j);
ExponentFit fit_from_json(const Json& j);

/// "B,total" header followed by one line per report.
std::string series_to_csv(const std::vector<CountReport>& reports);
/// Parses the same format; the header is required.
std::vector<std::pair<std::int64_t, std::uint64_t>> series_from_csv(const std::string& text);

}  // namespace hypercount
