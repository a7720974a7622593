#include "modgrid/serialize.hpp"

#include "modgrid/errors.hpp"

namespace modgrid {

std::string prec_to_string(const PrecBound& prec) {
  return prec ? rational_to_string(*prec) : "inf";
}

PrecBound prec_from_string(const std::string& text) {
  if (text == "inf") return std::nullopt;
  return PrecBound(rational_from_string(text));
}

nlohmann::ordered_json to_json(const QExpansion& a) {
  nlohmann::ordered_json j;
  j["den"] = a.den();
  j["prec"] = prec_to_string(a.prec());
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  const Rational den = to_rational(a.den());
  for (const auto& [key, coeff] : a.terms()) {
    Rational exponent = to_rational(key) / den;
    terms.push_back({rational_to_string(exponent), rational_to_string(coeff)});
  }
  j["terms"] = std::move(terms);
  return j;
}

QExpansion qexpansion_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("den") || !j.contains("prec") ||
      !j.contains("terms"))
    throw CacheCorrupt("malformed expansion record");
  long long den = j.at("den").get<long long>();
  if (den <= 0) throw CacheCorrupt("non-positive exponent denominator");
  PrecBound prec = prec_from_string(j.at("prec").get<std::string>());
  std::map<long long, Rational> terms;
  for (const auto& entry : j.at("terms")) {
    if (!entry.is_array() || entry.size() != 2)
      throw CacheCorrupt("malformed term entry");
    Rational exponent = rational_from_string(entry[0].get<std::string>());
    Rational coeff = rational_from_string(entry[1].get<std::string>());
    Rational key = exponent * to_rational(den);
    if (!is_integral(key))
      throw CacheCorrupt("term exponent off the declared lattice");
    terms[to_long_long(key.get_num())] = coeff;
  }
  return QExpansion(ExponentSupport::lattice(den), std::move(terms), prec);
}

nlohmann::ordered_json to_json(const BasisFamily& family) {
  nlohmann::ordered_json j;
  j["space"] = family.space_id;
  j["kind"] = to_string(family.kind);
  j["max_index"] = family.max_index;
  j["prec"] = prec_to_string(family.prec);
  nlohmann::ordered_json members = nlohmann::ordered_json::array();
  for (const auto& [index, member] : family.members)
    members.push_back({index, to_json(member)});
  j["members"] = std::move(members);
  return j;
}

BasisFamily family_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("space") || !j.contains("kind") ||
      !j.contains("max_index") || !j.contains("prec") || !j.contains("members"))
    throw CacheCorrupt("malformed family record");
  BasisFamily family;
  family.space_id = j.at("space").get<std::string>();
  family.kind = family_kind_from_string(j.at("kind").get<std::string>());
  family.max_index = j.at("max_index").get<long long>();
  family.prec = prec_from_string(j.at("prec").get<std::string>());
  const SpaceConfig& cfg = space_config(family.space_id);
  for (const auto& entry : j.at("members")) {
    if (!entry.is_array() || entry.size() != 2)
      throw CacheCorrupt("malformed member entry");
    long long index = entry[0].get<long long>();
    QExpansion member = qexpansion_from_json(entry[1]);
    family.members.emplace(index, member.with_support(cfg.support));
  }
  return family;
}

}  // namespace modgrid
