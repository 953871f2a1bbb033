#pragma once

#include <string>

#include <json.hpp>

#include "descent/construct.hpp"

namespace descent {

using json = nlohmann::json;

// Rationals are strings "p/q" or "p". Field elements are coordinate arrays
// over the power-product basis; towers are arrays of radicand coordinate
// arrays; points are [x, y] with infinity as [1, 0]. A bare rational is
// accepted wherever a field element is expected.
//
// Every parser throws InputError naming the offending field path.

json to_json(const Rational& q);
json to_json(const FieldTower& t);
json to_json(const FieldElem& x);
json to_json(const ProjPoint& p);
json to_json(const Divisor& d);
json to_json(const Mobius& m);
json to_json(const TernaryForm& f);
json to_json(const BinaryForm& f);
json to_json(const RamificationLedger& ledger);
json to_json(const HasseResult& h);

json verdict_to_json(const Verdict& v, bool with_timings = false);
json counterexample_to_json(const Counterexample& ce, bool with_timings = false);
json hyperelliptic_to_json(const HyperellipticReport& r, bool with_timings = false);

Rational rational_from_json(const json& j, const std::string& path);
FieldTower tower_from_json(const json& j, const std::string& path);
FieldElem elem_from_json(const json& j, const FieldTower& t, const std::string& path);
ProjPoint point_from_json(const json& j, const FieldTower& t, const std::string& path);
/// {"tower": ..., "points": [...]}; a missing tower means Q.
Divisor divisor_from_json(const json& j, const std::string& path = "");
Mobius mobius_from_json(const json& j, const FieldTower& t, const std::string& path);
/// {"diagonal": [a, b, c]}, {"upper": [a11, a12, a13, a22, a23, a33]} or {"gram": 3x3}.
TernaryForm form_from_json(const json& j, const std::string& path = "");

/// Parses text, reporting syntax errors with their byte position.
json parse_document(const std::string& text);

}  // namespace descent
