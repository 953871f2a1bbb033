#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "descent/qfield.hpp"

namespace descent {

/// A point (x : y) of the projective line over a tower, stored normalized:
/// y = 1 for affine points and (1 : 0) for infinity.
class ProjPoint {
 public:
  ProjPoint(FieldElem x, FieldElem y);

  static ProjPoint affine(const FieldElem& x);
  static ProjPoint infinity(const FieldTower& tower);

  const FieldElem& x() const { return x_; }
  const FieldElem& y() const { return y_; }
  const FieldTower& tower() const { return x_.tower(); }
  bool is_infinity() const { return y_.is_zero(); }

  ProjPoint embed(const FieldTower& bigger) const;

  friend bool operator==(const ProjPoint& a, const ProjPoint& b) { return a.x_ == b.x_ && a.y_ == b.y_; }
  /// Affine points in coordinate order, infinity last.
  friend std::strong_ordering operator<=>(const ProjPoint& a, const ProjPoint& b);

  std::string to_string() const;

 private:
  FieldElem x_;
  FieldElem y_;
};

ProjPoint conjugate(const GaloisAut& sigma, const ProjPoint& p);

/// x ↦ (a x + b) / (c x + d), stored with the first nonzero entry equal to 1.
class Mobius {
 public:
  Mobius(FieldElem a, FieldElem b, FieldElem c, FieldElem d);

  static Mobius identity(const FieldTower& tower);

  const FieldElem& a() const { return m_[0]; }
  const FieldElem& b() const { return m_[1]; }
  const FieldElem& c() const { return m_[2]; }
  const FieldElem& d() const { return m_[3]; }
  const std::array<FieldElem, 4>& entries() const { return m_; }
  const FieldTower& tower() const { return m_[0].tower(); }

  FieldElem determinant() const { return a() * d() - b() * c(); }
  bool is_identity() const;

  ProjPoint operator()(const ProjPoint& p) const;
  /// (M * N)(p) = M(N(p)).
  friend Mobius operator*(const Mobius& m, const Mobius& n);
  Mobius inverse() const;
  Mobius embed(const FieldTower& bigger) const;

  friend bool operator==(const Mobius& a, const Mobius& b) { return a.m_ == b.m_; }
  friend std::strong_ordering lex_compare(const Mobius& a, const Mobius& b);

  std::string to_string() const;

 private:
  std::array<FieldElem, 4> m_;
};

Mobius conjugate(const GaloisAut& sigma, const Mobius& m);

/// The unique M with M(p_i) = q_i.
Mobius mobius_from_triples(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3, const ProjPoint& q1,
                           const ProjPoint& q2, const ProjPoint& q3);

/// Cross-ratio normalized so that cr(0, 1, ∞, z) = z; infinity is returned as
/// the point at infinity.
ProjPoint cross_ratio(const ProjPoint& p1, const ProjPoint& p2, const ProjPoint& p3, const ProjPoint& p4);

inline constexpr int kDefaultOrderBound = 24;

/// Order of M in PGL2, or nullopt when M has infinite order. Finite orders are
/// searched among m whose cyclotomic degree fits a 2-tower of M's level; a
/// finite order above `bound` raises UnsupportedCyclotomy.
std::optional<int> mobius_order(const Mobius& m, int bound = kDefaultOrderBound);

struct FixedPoints {
  FieldTower tower;  // possibly extended to contain the fixed points
  std::vector<ProjPoint> points;
};

FixedPoints fixed_points(const Mobius& m);

struct OrderAndFixed {
  std::optional<int> order;
  FixedPoints fixed;
};

OrderAndFixed mobius_order_and_fixed(const Mobius& m, int bound = kDefaultOrderBound);

}  // namespace descent
