#include "padiccf/json_io.hpp"

#include "padiccf/text_io.hpp"

namespace padiccf {
namespace {

std::string big(const Int& x) { return x.get_str(); }

Int big_from(const json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  return Int(j.get<std::string>());
}

json list_json(const QuotientList& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(x.str());
  return out;
}

QuotientList list_from(const json& j, const OddPrime& p) {
  QuotientList out;
  for (const auto& x : j) out.push_back(parse_quotient(x.get<std::string>(), p));
  return out;
}

ExpansionStatus status_from(const std::string& s) {
  if (s == "finite") return ExpansionStatus::finite;
  if (s == "periodic") return ExpansionStatus::periodic;
  if (s == "open") return ExpansionStatus::open;
  throw std::invalid_argument("unknown expansion status '" + s + "'");
}

NiceStatus nice_status_from(const std::string& s) {
  if (s == "nice") return NiceStatus::nice;
  if (s == "not_nice") return NiceStatus::not_nice;
  if (s == "indeterminate") return NiceStatus::indeterminate;
  throw std::invalid_argument("unknown niceness status '" + s + "'");
}

}  // namespace

json expansion_to_json(const Expansion& ex) {
  json j;
  j["p"] = ex.p;
  j["flavor"] = to_string(ex.flavor);
  j["status"] = to_string(ex.status);
  j["k0"] = ex.k.empty() ? 0 : ex.k.front();
  j["preperiod"] = list_json(ex.preperiod);
  j["period"] = ex.period ? list_json(*ex.period) : json(nullptr);
  j["text"] = ex.text();
  return j;
}

Expansion expansion_from_json(const json& j) {
  const OddPrime p(j.at("p").get<unsigned long>());
  std::optional<QuotientList> period;
  if (!j.at("period").is_null()) period = list_from(j.at("period"), p);
  return listed_expansion(p, flavor_from_string(j.at("flavor").get<std::string>()),
                          status_from(j.at("status").get<std::string>()), list_from(j.at("preperiod"), p),
                          std::move(period), j.at("k0").get<long>());
}

json certificate_to_json(const NiceCertificate& c) {
  json j;
  j["p"] = c.p;
  j["cf"] = list_json(c.cf);
  j["status"] = to_string(c.status);
  j["failed"] = c.failed ? json(std::string(1, *c.failed)) : json(nullptr);
  j["detail"] = c.detail;
  j["cond_a"] = c.cond_a;
  j["cond_b"] = c.cond_b;
  j["cond_c"] = c.cond_c;
  j["shortcut"] = c.shortcut;
  j["ratio"] = c.ratio.get_str();
  j["Atilde_last"] = big(c.Atilde_last);
  j["Btilde_last"] = big(c.Btilde_last);
  j["q"] = big(c.q);
  j["omega0"] = big(c.omega0);
  j["order_s"] = c.order_s ? json(big(*c.order_s)) : json(nullptr);
  return j;
}

NiceCertificate certificate_from_json(const json& j) {
  NiceCertificate c;
  c.p = j.at("p").get<unsigned long>();
  const OddPrime p(c.p);
  c.cf = list_from(j.at("cf"), p);
  c.status = nice_status_from(j.at("status").get<std::string>());
  if (!j.at("failed").is_null()) c.failed = j.at("failed").get<std::string>().at(0);
  c.detail = j.at("detail").get<std::string>();
  c.cond_a = j.at("cond_a").get<bool>();
  c.cond_b = j.at("cond_b").get<bool>();
  c.cond_c = j.at("cond_c").get<bool>();
  c.shortcut = j.at("shortcut").get<bool>();
  c.ratio = parse_rational(j.at("ratio").get<std::string>());
  c.Atilde_last = big_from(j.at("Atilde_last"));
  c.Btilde_last = big_from(j.at("Btilde_last"));
  c.q = big_from(j.at("q"));
  c.omega0 = big_from(j.at("omega0"));
  if (!j.at("order_s").is_null()) c.order_s = big_from(j.at("order_s"));
  return c;
}

json construction_to_json(const ConstructionResult& r) {
  json j;
  j["p"] = r.p;
  j["k0"] = r.k0;
  j["t"] = r.t;
  j["h"] = r.h;
  j["omega"] = big(r.omega);
  j["order_s"] = big(r.order_s);
  j["q"] = big(r.q);
  j["b"] = big(r.b);
  j["kt"] = r.kt;
  j["c_tilde"] = big(r.c_tilde);
  j["a_t"] = r.a_t.str();
  j["m"] = big(r.m);
  j["preperiod"] = list_json(r.expansion.preperiod);
  j["period"] = r.expansion.period ? list_json(*r.expansion.period) : json::array();
  j["verified"] = r.verified;
  j["branch"] = r.branch ? json(*r.branch) : json(nullptr);
  j["checks"] = {{"eq_A", r.eq_A},
                 {"eq_B", r.eq_B},
                 {"eq_m", r.eq_m},
                 {"limit", r.limit_ok},
                 {"reexpansion", r.reexpansion_ok},
                 {"root_expansion", r.root_expansion_ok}};
  return j;
}

ConstructionResult construction_from_json(const json& j) {
  ConstructionResult r;
  r.p = j.at("p").get<unsigned long>();
  const OddPrime p(r.p);
  r.k0 = j.at("k0").get<long>();
  r.t = j.at("t").get<long>();
  r.h = j.value("h", 0ul);
  r.omega = big_from(j.at("omega"));
  if (j.contains("order_s")) r.order_s = big_from(j.at("order_s"));
  r.q = big_from(j.at("q"));
  r.b = big_from(j.at("b"));
  r.kt = j.at("kt").get<long>();
  r.c_tilde = big_from(j.at("c_tilde"));
  r.a_t = parse_quotient(j.at("a_t").get<std::string>(), p);
  r.m = big_from(j.at("m"));
  r.expansion = periodic_expansion(p, Flavor::browkin, list_from(j.at("preperiod"), p), list_from(j.at("period"), p),
                                   r.k0);
  r.verified = j.at("verified").get<bool>();
  if (!j.at("branch").is_null()) r.branch = j.at("branch").get<unsigned long>();
  if (j.contains("checks")) {
    const json& c = j.at("checks");
    r.eq_A = c.at("eq_A").get<bool>();
    r.eq_B = c.at("eq_B").get<bool>();
    r.eq_m = c.at("eq_m").get<bool>();
    r.limit_ok = c.at("limit").get<bool>();
    r.reexpansion_ok = c.at("reexpansion").get<bool>();
    r.root_expansion_ok = c.at("root_expansion").get<bool>();
  }
  return r;
}

json section6_to_json(const Section6Result& r) {
  json j;
  j["variant"] = r.variant;
  j["p"] = r.p;
  j["t"] = r.t;
  j["delta"] = big(r.delta);
  j["b"] = big(r.b);
  j["c"] = big(r.c);
  j["k"] = r.k;
  j["claimed"] = r.claimed.text();
  j["branch"] = r.value ? json(r.value->branch()) : json(nullptr);
  j["sign"] = r.sign;
  j["expansion_matches"] = r.expansion_matches;
  j["trace"] = r.trace.get_str();
  j["det"] = r.det.get_str();
  j["charpoly_matches"] = r.charpoly_matches;
  j["matrix_route_matches"] = r.matrix_route_matches;
  j["literal_quotient"] = to_string(r.literal_quotient);
  j["literal_note"] = r.literal_note;
  j["verified"] = r.verified();
  return j;
}

}  // namespace padiccf
