// JSON forms of expansions, certificates and construction results. Big
// integers are written as decimal strings, quotients as "n/p^e" text.
#pragma once

#include <json.hpp>

#include "padiccf/constructor.hpp"

namespace padiccf {

using json = nlohmann::json;

json expansion_to_json(const Expansion& ex);
Expansion expansion_from_json(const json& j);

json certificate_to_json(const NiceCertificate& cert);
NiceCertificate certificate_from_json(const json& j);

/// Keys p, k0, t, omega, q, b, kt, c_tilde, a_t, m, preperiod, period,
/// verified, branch, plus h, order_s and the individual checks.
json construction_to_json(const ConstructionResult& r);
ConstructionResult construction_from_json(const json& j);

json section6_to_json(const Section6Result& r);

}  // namespace padiccf
