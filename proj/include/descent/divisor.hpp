#pragma once

#include <optional>
#include <string>
#include <vector>

#include "descent/projline.hpp"

namespace descent {

/// A reduced effective divisor: a finite set of distinct points over one tower,
/// kept sorted for membership tests and reproducible output.
class Divisor {
 public:
  explicit Divisor(std::vector<ProjPoint> points);

  const std::vector<ProjPoint>& points() const { return points_; }
  std::size_t degree() const { return points_.size(); }
  const FieldTower& tower() const { return tower_; }

  bool contains(const ProjPoint& p) const;
  Divisor image(const Mobius& m) const;
  Divisor embed(const FieldTower& bigger) const;

  friend bool operator==(const Divisor& a, const Divisor& b) { return a.points_ == b.points_; }

 private:
  FieldTower tower_;
  std::vector<ProjPoint> points_;
};

Divisor conjugate_divisor(const GaloisAut& sigma, const Divisor& d);

enum class GroupKind { Trivial, Cyclic, Dihedral, A4, S4, A5 };

struct GroupClass {
  GroupKind kind = GroupKind::Trivial;
  int m = 1;  // cyclic(m) or dihedral(m); 1 for the others

  bool is_cyclic() const { return kind == GroupKind::Trivial || kind == GroupKind::Cyclic; }
  bool cyclic_even() const { return kind == GroupKind::Cyclic && m % 2 == 0; }
  std::string to_string() const;

  friend bool operator==(const GroupClass&, const GroupClass&) = default;
};

/// Classification of a finite subgroup of PGL2 in characteristic 0 from the
/// multiset of its element orders. Throws UnrecognizedGroup otherwise.
GroupClass classify_orders(const std::vector<int>& element_orders);

/// A finite group of Mobius maps with its multiplication table. Elements are
/// sorted by lex_compare.
class AutGroup {
 public:
  explicit AutGroup(std::vector<Mobius> elements);

  std::size_t size() const { return elements_.size(); }
  const Mobius& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<Mobius>& elements() const { return elements_; }

  int identity() const { return identity_; }
  int multiply(int i, int j) const { return table_[i][j]; }
  int inverse(int i) const { return inverses_[i]; }
  int order(int i) const { return orders_[i]; }
  int index_of(const Mobius& m) const;

  const GroupClass& classification() const { return class_; }
  /// Index of an element generating the group, when it is cyclic.
  std::optional<int> generator() const;

 private:
  std::vector<Mobius> elements_;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverses_;
  std::vector<int> orders_;
  int identity_ = 0;
  GroupClass class_;
};

/// Full stabilizer of D in PGL2 over D's tower; requires degree >= 3.
AutGroup compute_aut(const Divisor& d);

GroupClass classify_group(const AutGroup& g);

/// Some M with M(d1) = d2, if one exists over the common tower.
std::optional<Mobius> pgl2_equivalent(const Divisor& d1, const Divisor& d2);

/// Partition of D into orbits of g, each orbit sorted, orbits ordered by their first point.
std::vector<std::vector<ProjPoint>> orbit_structure(const Divisor& d, const AutGroup& g);

}  // namespace descent
