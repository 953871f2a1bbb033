#include "descent/serialize.hpp"

#include "descent/errors.hpp"

namespace descent {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::InputError, (path.empty() ? "" : path + ": ") + what);
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path, std::string("missing field '") + key + "'");
  return *it;
}

const json& array_of(const json& j, const std::string& path, std::size_t size = 0) {
  if (!j.is_array()) bad(path, "expected an array");
  if (size && j.size() != size) bad(path, "expected " + std::to_string(size) + " entries, got " + std::to_string(j.size()));
  return j;
}

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }
std::string dot(const std::string& path, const char* key) { return path.empty() ? key : path + "." + key; }

json places_to_json(const std::vector<PlaceEval>& evals) {
  json out = json::array();
  for (const auto& e : evals) out.push_back({{"place", e.place.to_string()}, {"symbol", e.symbol}});
  return out;
}

json conic_point_to_json(const std::array<FieldElem, 3>& p) {
  return json::array({to_json(p[0]), to_json(p[1]), to_json(p[2])});
}

json certificate_to_json(const Certificate& c) {
  return std::visit(
      [](const auto& cert) -> json {
        using T = std::decay_t<decltype(cert)>;
        if constexpr (std::is_same_v<T, P1Model>) {
          return {{"kind", "P1Model"}, {"form", to_json(cert.form)}, {"change", to_json(cert.change)}};
        } else if constexpr (std::is_same_v<T, PointWitness>) {
          json pt = json::array();
          for (const auto& x : cert.point) pt.push_back(to_json(x));
          return {{"kind", "PointWitness"}, {"form", to_json(cert.form)}, {"point", pt}};
        } else if constexpr (std::is_same_v<T, ConicModel>) {
          json pts = json::array();
          for (const auto& p : cert.compressed.orbit_images)
            pts.push_back({{"point", conic_point_to_json(p.point)}, {"degree", p.degree}});
          return {{"kind", "ConicModel"},
                  {"form", to_json(cert.form)},
                  {"failing", places_to_json(cert.failing)},
                  {"compressed", pts}};
        } else if constexpr (std::is_same_v<T, Obstruction>) {
          json out{{"kind", "Obstruction"}, {"form", to_json(cert.form)}, {"failing", places_to_json(cert.failing)}};
          if (cert.symbols) {
            json syms = json::array();
            for (const auto& s : *cert.symbols) syms.push_back(json::array({s.a.get_str(), s.b.get_str()}));
            out["symbols"] = syms;
          } else {
            out["symbols"] = nullptr;
          }
          return out;
        } else if constexpr (std::is_same_v<T, FastPath>) {
          return {{"kind", "FastPath"}, {"rule", to_string(cert.rule)}};
        } else {
          return {{"kind", "Refusal"}, {"reason", cert.reason}};
        }
      },
      c);
}

}  // namespace

json to_json(const Rational& q) { return q.get_str(); }

json to_json(const FieldTower& t) {
  json out = json::array();
  for (const auto& r : t.radicands()) {
    json coords = json::array();
    for (const auto& c : r) coords.push_back(to_json(c));
    out.push_back(coords);
  }
  return out;
}

json to_json(const FieldElem& x) {
  json out = json::array();
  for (const auto& c : x.coords()) out.push_back(to_json(c));
  return out;
}

json to_json(const ProjPoint& p) { return json::array({to_json(p.x()), to_json(p.y())}); }

json to_json(const Divisor& d) {
  json pts = json::array();
  for (const auto& p : d.points()) pts.push_back(to_json(p));
  return {{"tower", to_json(d.tower())}, {"points", pts}};
}

json to_json(const Mobius& m) {
  json out = json::array();
  for (const auto& e : m.entries()) out.push_back(to_json(e));
  return out;
}

json to_json(const TernaryForm& f) {
  json out = json::array();
  for (const auto& c : f.upper()) out.push_back(to_json(c));
  return {{"upper", out}};
}

json to_json(const BinaryForm& f) {
  json out = json::array();
  for (const auto& c : f.coeffs()) out.push_back(to_json(c));
  return {{"tower", to_json(f.tower())}, {"coeffs", out}};
}

json to_json(const RamificationLedger& ledger) {
  json entries = json::array();
  for (const auto& e : ledger.entries)
    entries.push_back({{"tower", to_json(e.point.tower())},
                       {"point", to_json(e.point)},
                       {"index", e.index},
                       {"different", e.different},
                       {"residue_degree", e.residue_degree}});
  return {{"covering_degree", ledger.covering_degree},
          {"entries", entries},
          {"riemann_hurwitz", ledger.satisfies_riemann_hurwitz()},
          {"tame", ledger.tame()}};
}

json to_json(const HasseResult& h) {
  json diag = json::array();
  for (const auto& c : h.diagonal) diag.push_back(c.get_str());
  return {{"solvable", h.solvable},
          {"diagonal", diag},
          {"evaluations", places_to_json(h.evaluations)},
          {"failing", places_to_json(h.failing)}};
}

json verdict_to_json(const Verdict& v, bool with_timings) {
  json out{{"degree", v.degree},
           {"aut", {{"order", v.aut_order}, {"class", v.aut_class.to_string()}}},
           {"field_of_moduli", {{"tower", to_json(v.fom.tower)}, {"subgroup", v.moduli_subgroup}}},
           {"outcome", to_string(v.outcome)},
           {"certificate", certificate_to_json(v.certificate)}};
  if (v.compression) {
    const auto& c = *v.compression;
    json comp{{"form", c.form ? to_json(*c.form) : json(nullptr)},
              {"has_point", c.has_point ? json(*c.has_point) : json(nullptr)},
              {"evaluations", places_to_json(c.evaluations)},
              {"orbit_degrees", c.orbit_degrees},
              {"ledger", to_json(c.ledger)}};
    out["compression"] = comp;
  } else {
    out["compression"] = nullptr;
  }
  if (with_timings) {
    json t = json::object();
    for (const auto& [stage, secs] : v.timings) t[stage] = secs;
    out["timings"] = t;
  }
  return out;
}

json counterexample_to_json(const Counterexample& ce, bool with_timings) {
  const auto& d = ce.data;
  json sections = json::array();
  for (const auto& [p, q] : d.sections) sections.push_back(json::array({conic_point_to_json(p), conic_point_to_json(q)}));
  return {{"conic", to_json(d.conic)},
          {"base", to_json(d.base)},
          {"p", conic_point_to_json(d.p)},
          {"p_bar", conic_point_to_json(d.p_bar)},
          {"sections", sections},
          {"contains_branch_pair", d.contains_branch_pair},
          {"deck", to_json(d.deck)},
          {"attempts", d.attempts},
          {"divisor", to_json(d.divisor)},
          {"verdict", verdict_to_json(ce.verdict, with_timings)}};
}

json hyperelliptic_to_json(const HyperellipticReport& r, bool with_timings) {
  return {{"divisor", to_json(r.divisor)},
          {"reduced_group", {{"order", r.reduced_order}, {"class", r.reduced_group.to_string()}}},
          {"obstruction_possible", r.obstruction_possible},
          {"huggins_condition", !r.obstruction_possible || r.reduced_group.is_cyclic()},
          {"note", r.note},
          {"verdict", verdict_to_json(r.verdict, with_timings)}};
}

// ---------------------------------------------------------------------------
// Parsing

Rational rational_from_json(const json& j, const std::string& path) {
  std::string s;
  if (j.is_string()) {
    s = j.get<std::string>();
  } else if (j.is_number_integer()) {
    s = std::to_string(j.get<long long>());
  } else {
    bad(path, "expected a rational string");
  }
  auto slash = s.find('/');
  auto digits = [](const std::string& t) {
    std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  std::string num = s.substr(0, slash), den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits(num) || !digits(den) || den[0] == '-' || den[0] == '+') bad(path, "malformed rational '" + s + "'");
  Integer n(num[0] == '+' ? num.substr(1) : num), d(den);
  if (d == 0) bad(path, "malformed rational '" + s + "' (zero denominator)");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

FieldTower tower_from_json(const json& j, const std::string& path) {
  FieldTower t;
  const json& steps = array_of(j, path);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    std::string p = at(path, i);
    FieldElem r = elem_from_json(steps[i], t, p);
    if (r.is_zero()) bad(p, "zero radicand");
    if (sqrt_in_field(r)) bad(p, "radicand is already a square");
    t = append_step_unchecked(t, r.coords());
  }
  return t;
}

FieldElem elem_from_json(const json& j, const FieldTower& t, const std::string& path) {
  if (j.is_string() || j.is_number_integer()) return FieldElem(t, rational_from_json(j, path));
  const json& arr = array_of(j, path);
  if (arr.size() != t.degree())
    bad(path, "expected " + std::to_string(t.degree()) + " coordinates, got " + std::to_string(arr.size()));
  std::vector<Rational> coords;
  for (std::size_t i = 0; i < arr.size(); ++i) coords.push_back(rational_from_json(arr[i], at(path, i)));
  return FieldElem(t, std::move(coords));
}

ProjPoint point_from_json(const json& j, const FieldTower& t, const std::string& path) {
  const json& arr = array_of(j, path, 2);
  FieldElem x = elem_from_json(arr[0], t, at(path, 0)), y = elem_from_json(arr[1], t, at(path, 1));
  if (x.is_zero() && y.is_zero()) bad(path, "point (0 : 0)");
  return ProjPoint(x, y);
}

Divisor divisor_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  FieldTower t;
  if (j.contains("tower")) t = tower_from_json(j["tower"], dot(path, "tower"));
  std::string pp = dot(path, "points");
  const json& pts = array_of(field(j, "points", path), pp);
  std::vector<ProjPoint> points;
  for (std::size_t i = 0; i < pts.size(); ++i) points.push_back(point_from_json(pts[i], t, at(pp, i)));
  try {
    return Divisor(points);
  } catch (const Error& e) {
    bad(pp, e.what());
  }
}

Mobius mobius_from_json(const json& j, const FieldTower& t, const std::string& path) {
  const json& arr = array_of(j, path, 4);
  std::array<FieldElem, 4> e;
  for (std::size_t i = 0; i < 4; ++i) e[i] = elem_from_json(arr[i], t, at(path, i));
  if ((e[0] * e[3] - e[1] * e[2]).is_zero()) bad(path, "singular matrix");
  return Mobius(e[0], e[1], e[2], e[3]);
}

TernaryForm form_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  TernaryForm f;
  if (j.contains("diagonal")) {
    std::string p = dot(path, "diagonal");
    const json& arr = array_of(j["diagonal"], p, 3);
    f = TernaryForm::diagonal(rational_from_json(arr[0], at(p, 0)), rational_from_json(arr[1], at(p, 1)),
                              rational_from_json(arr[2], at(p, 2)));
  } else if (j.contains("upper")) {
    std::string p = dot(path, "upper");
    const json& arr = array_of(j["upper"], p, 6);
    std::array<Rational, 6> u;
    for (std::size_t i = 0; i < 6; ++i) u[i] = rational_from_json(arr[i], at(p, i));
    f = TernaryForm::from_upper(u);
  } else if (j.contains("gram")) {
    std::string p = dot(path, "gram");
    const json& rows = array_of(j["gram"], p, 3);
    for (std::size_t r = 0; r < 3; ++r) {
      const json& row = array_of(rows[r], at(p, r), 3);
      for (std::size_t c = 0; c < 3; ++c) f.gram[r][c] = rational_from_json(row[c], at(at(p, r), c));
    }
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < r; ++c)
        if (f.gram[r][c] != f.gram[c][r]) bad(p, "gram matrix is not symmetric");
  } else {
    bad(path, "expected 'diagonal', 'upper' or 'gram'");
  }
  if (sgn(f.determinant()) == 0) bad(path, "singular form");
  return f;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InputError, "syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace descent
