#include "descent/divisor.hpp"

#include <algorithm>
#include <map>

#include "descent/errors.hpp"

namespace descent {

Divisor::Divisor(std::vector<ProjPoint> points) {
  if (points.empty()) throw Error(ErrorCode::InputError, "empty divisor");
  tower_ = points.front().tower();
  for (const auto& p : points) tower_ = common_tower(tower_, p.tower());
  for (auto& p : points) p = p.embed(tower_);
  std::sort(points.begin(), points.end());
  if (std::adjacent_find(points.begin(), points.end()) != points.end())
    throw Error(ErrorCode::RepeatedPoints, "divisor has a repeated point");
  points_ = std::move(points);
}

bool Divisor::contains(const ProjPoint& p) const { return std::binary_search(points_.begin(), points_.end(), p); }

Divisor Divisor::image(const Mobius& m) const {
  std::vector<ProjPoint> out;
  out.reserve(points_.size());
  for (const auto& p : points_) out.push_back(m(p));
  return Divisor(std::move(out));
}

Divisor Divisor::embed(const FieldTower& bigger) const {
  std::vector<ProjPoint> out;
  for (const auto& p : points_) out.push_back(p.embed(bigger));
  return Divisor(std::move(out));
}

Divisor conjugate_divisor(const GaloisAut& sigma, const Divisor& d) {
  std::vector<ProjPoint> out;
  for (const auto& p : d.points()) out.push_back(conjugate(sigma, p));
  return Divisor(std::move(out));
}

// ---------------------------------------------------------------------------
// Classification

std::string GroupClass::to_string() const {
  switch (kind) {
    case GroupKind::Trivial: return "trivial";
    case GroupKind::Cyclic: return "cyclic(" + std::to_string(m) + ")";
    case GroupKind::Dihedral: return "dihedral(" + std::to_string(m) + ")";
    case GroupKind::A4: return "A4";
    case GroupKind::S4: return "S4";
    case GroupKind::A5: return "A5";
  }
  return "?";
}

GroupClass classify_orders(const std::vector<int>& element_orders) {
  const int n = static_cast<int>(element_orders.size());
  std::map<int, int> count;
  for (int o : element_orders) ++count[o];
  auto has = [&](int order, int times) { return count.count(order) && count.at(order) == times; };
  if (n == 1) return {GroupKind::Trivial, 1};
  if (count.count(n)) return {GroupKind::Cyclic, n};
  if (n % 2 == 0) {
    const int m = n / 2;
    const int involutions = m % 2 ? m : m + 1;
    if (count.count(m) && has(2, involutions)) return {GroupKind::Dihedral, m};
  }
  if (n == 12 && has(2, 3) && has(3, 8)) return {GroupKind::A4, 1};
  if (n == 24 && has(2, 9) && has(3, 8) && has(4, 6)) return {GroupKind::S4, 1};
  if (n == 60 && has(2, 15) && has(3, 20) && has(5, 24)) return {GroupKind::A5, 1};
  throw Error(ErrorCode::UnrecognizedGroup, "element orders match no finite subgroup of PGL2 (order " +
                                                std::to_string(n) + ")");
}

// ---------------------------------------------------------------------------
// AutGroup

AutGroup::AutGroup(std::vector<Mobius> elements) : elements_(std::move(elements)) {
  auto less = [](const Mobius& a, const Mobius& b) { return lex_compare(a, b) < 0; };
  std::sort(elements_.begin(), elements_.end(), less);
  check(std::adjacent_find(elements_.begin(), elements_.end()) == elements_.end(), "repeated group element");
  const int n = static_cast<int>(elements_.size());
  identity_ = -1;
  for (int i = 0; i < n; ++i)
    if (elements_[i].is_identity()) identity_ = i;
  check(identity_ >= 0, "group lacks the identity");
  table_.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int k = index_of(elements_[i] * elements_[j]);
      check(k >= 0, "group not closed under composition");
      table_[i][j] = k;
    }
  inverses_.assign(n, -1);
  orders_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      if (table_[i][j] == identity_) inverses_[i] = j;
    int order = 1;
    for (int p = i; p != identity_ && order <= n; p = table_[p][i]) ++order;
    check(order <= n, "element of unbounded order in a finite group");
    orders_[i] = order;
  }
  class_ = classify_orders(orders_);
}

int AutGroup::index_of(const Mobius& m) const {
  auto less = [](const Mobius& a, const Mobius& b) { return lex_compare(a, b) < 0; };
  auto it = std::lower_bound(elements_.begin(), elements_.end(), m, less);
  if (it == elements_.end() || !(*it == m)) return -1;
  return static_cast<int>(it - elements_.begin());
}

std::optional<int> AutGroup::generator() const {
  for (std::size_t i = 0; i < size(); ++i)
    if (orders_[i] == static_cast<int>(size())) return static_cast<int>(i);
  return std::nullopt;
}

GroupClass classify_group(const AutGroup& g) { return g.classification(); }

// ---------------------------------------------------------------------------
// Triple enumeration

namespace {

bool maps_into(const Mobius& m, const std::vector<ProjPoint>& source, const Divisor& target) {
  for (const auto& p : source)
    if (!target.contains(m(p))) return false;
  return true;
}

template <class Visit>
void for_each_target_triple(const Divisor& target, Visit&& visit) {
  const auto& q = target.points();
  const std::size_t n = q.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (!visit(q[i], q[j], q[k])) return;
      }
    }
}

}  // namespace

AutGroup compute_aut(const Divisor& d) {
  if (d.degree() < 3) throw Error(ErrorCode::DegreeTooSmall, "automorphism groups need at least three points");
  const auto& p = d.points();
  std::vector<ProjPoint> rest(p.begin() + 3, p.end());
  std::vector<Mobius> found;
  for_each_target_triple(d, [&](const ProjPoint& q0, const ProjPoint& q1, const ProjPoint& q2) {
    Mobius m = mobius_from_triples(p[0], p[1], p[2], q0, q1, q2);
    if (maps_into(m, rest, d)) found.push_back(std::move(m));
    return true;
  });
  return AutGroup(std::move(found));
}

std::optional<Mobius> pgl2_equivalent(const Divisor& d1_in, const Divisor& d2_in) {
  if (d1_in.degree() != d2_in.degree() || d1_in.degree() < 3) {
    if (d1_in.degree() == d2_in.degree() && d1_in.degree() < 3)
      throw Error(ErrorCode::DegreeTooSmall, "equivalence needs at least three points");
    return std::nullopt;
  }
  FieldTower t = common_tower(d1_in.tower(), d2_in.tower());
  Divisor d1 = d1_in.embed(t), d2 = d2_in.embed(t);
  const auto& p = d1.points();
  std::vector<ProjPoint> rest(p.begin() + 3, p.end());
  std::optional<Mobius> witness;
  for_each_target_triple(d2, [&](const ProjPoint& q0, const ProjPoint& q1, const ProjPoint& q2) {
    Mobius m = mobius_from_triples(p[0], p[1], p[2], q0, q1, q2);
    if (maps_into(m, rest, d2)) witness = std::move(m);
    return !witness;
  });
  return witness;
}

std::vector<std::vector<ProjPoint>> orbit_structure(const Divisor& d, const AutGroup& g) {
  std::vector<std::vector<ProjPoint>> orbits;
  std::vector<bool> seen(d.degree(), false);
  const auto& pts = d.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (seen[i]) continue;
    std::vector<ProjPoint> orbit;
    for (const auto& m : g.elements()) orbit.push_back(m(pts[i]));
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    for (const auto& q : orbit) {
      auto it = std::lower_bound(pts.begin(), pts.end(), q);
      check(it != pts.end() && *it == q, "group element does not preserve the divisor");
      seen[it - pts.begin()] = true;
    }
    orbits.push_back(std::move(orbit));
  }
  if (g.classification().is_cyclic())
    for (const auto& orbit : orbits) check(orbit.size() == 1 || orbit.size() == g.size(), "non-free orbit of a cyclic group");
  return orbits;
}

}  // namespace descent
