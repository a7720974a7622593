#pragma once

#include <json.hpp>
#include <string>

#include "modgrid/qexpansion.hpp"
#include "modgrid/spaces.hpp"

namespace modgrid {

// QExpansion <-> { "den": int, "prec": "p/q" | "inf",
//                  "terms": [["exponent", "coefficient"], ...] }
// with exact rational strings, terms sorted by exponent; bit-exact round
// trip. An exact expansion serializes its precision as "inf".
nlohmann::ordered_json to_json(const QExpansion& a);
QExpansion qexpansion_from_json(const nlohmann::json& j);

// BasisFamily <-> { "space", "kind", "max_index", "prec", "members":
// [[index, expansion], ...] }. Deserialization re-attaches the space's
// exponent support from the registry.
nlohmann::ordered_json to_json(const BasisFamily& family);
BasisFamily family_from_json(const nlohmann::json& j);

std::string prec_to_string(const PrecBound& prec);
PrecBound prec_from_string(const std::string& text);

}  // namespace modgrid
