#include "descent/projline.hpp"

#include <numeric>

#include "descent/errors.hpp"

namespace descent {

namespace {

int euler_phi(int m) {
  int result = m;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// Largest m whose primitive m-th roots of unity give ζ + 1/ζ inside a 2-tower of this level.
int compute_max_candidate_order(int level) {
  const int phi_cap = 2 << level;
  int best = 2;
  for (int m = 3; m <= 2 * phi_cap * phi_cap; ++m) {
    int phi = euler_phi(m);
    if (phi <= phi_cap && is_power_of_two(phi)) best = m;
  }
  return best;
}

int max_candidate_order(int level) {
  static const std::vector<int> table = [] {
    std::vector<int> t;
    for (int l = 0; l <= 5; ++l) t.push_back(compute_max_candidate_order(l));
    return t;
  }();
  return level < static_cast<int>(table.size()) ? table[level] : compute_max_candidate_order(level);
}

}  // namespace

// ---------------------------------------------------------------------------
// ProjPoint

ProjPoint::ProjPoint(FieldElem x, FieldElem y) {
  FieldTower t = common_tower(x.tower(), y.tower());
  x = x.embed(t);
  y = y.embed(t);
  if (y.is_zero()) {
    if (x.is_zero()) throw Error(ErrorCode::InputError, "(0 : 0) is not a point of the projective line");
    x_ = FieldElem(t, Rational(1));
    y_ = FieldElem(t);
  } else {
    x_ = x / y;
    y_ = FieldElem(t, Rational(1));
  }
}

ProjPoint ProjPoint::affine(const FieldElem& x) { return ProjPoint(x, FieldElem(x.tower(), Rational(1))); }

ProjPoint ProjPoint::infinity(const FieldTower& tower) { return ProjPoint(FieldElem(tower, Rational(1)), FieldElem(tower)); }

ProjPoint ProjPoint::embed(const FieldTower& bigger) const { return ProjPoint(x_.embed(bigger), y_.embed(bigger)); }

std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b) {
  if (a.is_infinity() != b.is_infinity()) return a.is_infinity() ? std::strong_ordering::greater : std::strong_ordering::less;
  return lex_compare(a.x_, b.x_);
}

std::string ProjPoint::to_string() const { return is_infinity() ? "oo" : x_.to_string(); }

ProjPoint conjugate(const GaloisAut& sigma, const ProjPoint& p) {
  return ProjPoint(sigma.apply(p.x()), sigma.apply(p.y()));
}

// ---------------------------------------------------------------------------
// Mobius

Mobius::Mobius(FieldElem a, FieldElem b, FieldElem c, FieldElem d) : m_{std::move(a), std::move(b), std::move(c), std::move(d)} {
  FieldTower t = m_[0].tower();
  for (const auto& e : m_) t = common_tower(t, e.tower());
  for (auto& e : m_) e = e.embed(t);
  if (determinant().is_zero()) throw Error(ErrorCode::InputError, "singular Mobius transformation");
  for (const auto& e : m_)
    if (!e.is_zero()) {
      if (e.is_one()) break;
      FieldElem s = e.inverse();
      for (auto& f : m_) f = f * s;
      break;
    }
}

Mobius Mobius::identity(const FieldTower& tower) {
  return Mobius(FieldElem(tower, Rational(1)), FieldElem(tower), FieldElem(tower), FieldElem(tower, Rational(1)));
}

bool Mobius::is_identity() const { return b().is_zero() && c().is_zero() && a() == d(); }

ProjPoint Mobius::operator()(const ProjPoint& p) const {
  return ProjPoint(a() * p.x() + b() * p.y(), c() * p.x() + d() * p.y());
}

Mobius operator*(const Mobius& m, const Mobius& n) {
  return Mobius(m.a() * n.a() + m.b() * n.c(), m.a() * n.b() + m.b() * n.d(), m.c() * n.a() + m.d() * n.c(),
                m.c() * n.b() + m.d() * n.d());
}

Mobius Mobius::inverse() const { return Mobius(d(), -b(), -c(), a()); }

Mobius Mobius::embed(const FieldTower& bigger) const {
  return Mobius(a().embed(bigger), b().embed(bigger), c().embed(bigger), d().embed(bigger));
}

std::strong_ordering lex_compare(const Mobius& a, const Mobius& b) {
  for (int i = 0; i < 4; ++i) {
    auto c = lex_compare(a.m_[i], b.m_[i]);
    if (c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string Mobius::to_string() const {
  return "[[" + a().to_string() + ", " + b().to_string() + "], [" + c().to_string() + ", " + d().to_string() + "]]";
}

Mobius conjugate(const GaloisAut& sigma, const Mobius& m) {
  return Mobius(sigma.apply(m.a()), sigma.apply(m.b()), sigma.apply(m.c()), sigma.apply(m.d()));
}

// ---------------------------------------------------------------------------
// Triples and cross-ratios

namespace {

// Sends 0, 1, ∞ to p1, p2, p3.
Mobius frame(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3) {
  if (p1 == p2 || p1 == p3 || p2 == p3) throw Error(ErrorCode::RepeatedPoints, "triple has repeated points");
  // alpha * p3 + beta * p1 = p2
  FieldElem det = p3.x() * p1.y() - p1.x() * p3.y();
  FieldElem alpha = (p2.x() * p1.y() - p1.x() * p2.y()) / det;
  FieldElem beta = (p3.x() * p2.y() - p2.x() * p3.y()) / det;
  return Mobius(alpha * p3.x(), beta * p1.x(), alpha * p3.y(), beta * p1.y());
}

}  // namespace

Mobius mobius_from_triples(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3, const ProjPoint& q1,
                           const ProjPoint& q2, const ProjPoint& q3) {
  return frame(q1, q2, q3) * frame(p1, p2, p3).inverse();
}

ProjPoint cross_ratio(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3, const ProjPoint& p4) {
  if (p1 == p2 || p1 == p3 || p2 == p3)
    throw Error(ErrorCode::UndefinedCrossRatio, "cross-ratio needs three distinct reference points");
  return frame(p1, p2, p3).inverse()(p4);
}

// ---------------------------------------------------------------------------
// Orders and fixed points

std::optional<int> mobius_order(const Mobius& m, int bound) {
  const int limit = max_candidate_order(m.tower().level());
  // unnormalized powers avoid an inversion per step
  FieldElem a = m.a(), b = m.b(), c = m.c(), d = m.d();
  for (int k = 1; k <= limit; ++k) {
    if (b.is_zero() && c.is_zero() && a == d) {
      if (k > bound)
        throw Error(ErrorCode::UnsupportedCyclotomy,
                    "Mobius map of order " + std::to_string(k) + " exceeds the supported bound " + std::to_string(bound));
      return k;
    }
    FieldElem na = a * m.a() + b * m.c(), nb = a * m.b() + b * m.d();
    FieldElem nc = c * m.a() + d * m.c(), nd = c * m.b() + d * m.d();
    a = std::move(na);
    b = std::move(nb);
    c = std::move(nc);
    d = std::move(nd);
  }
  return std::nullopt;
}

FixedPoints fixed_points(const Mobius& m) {
  const FieldTower& t = m.tower();
  const FieldElem &a = m.a(), &b = m.b(), &c = m.c(), &d = m.d();
  if (c.is_zero()) {
    FixedPoints out{t, {ProjPoint::infinity(t)}};
    if (a != d) out.points.push_back(ProjPoint::affine(b / (d - a)));
    else if (!b.is_zero()) return out;
    else throw Error(ErrorCode::InputError, "the identity fixes every point");
    return out;
  }
  // c x^2 + (d - a) x - b = 0
  FieldElem disc = (d - a) * (d - a) + b * c * Rational(4);
  if (disc.is_zero()) return {t, {ProjPoint::affine((a - d) / (c * Rational(2)))}};
  auto ext = tower_extend(t, disc);
  FieldElem two_c = c.embed(ext.tower) * Rational(2);
  FieldElem base = (a - d).embed(ext.tower);
  return {ext.tower, {ProjPoint::affine((base + ext.root) / two_c), ProjPoint::affine((base - ext.root) / two_c)}};
}

OrderAndFixed mobius_order_and_fixed(const Mobius& m, int bound) {
  auto order = mobius_order(m, bound);
  if (order == 1) return {order, {m.tower(), {}}};
  return {order, fixed_points(m)};
}

}  // namespace descent
