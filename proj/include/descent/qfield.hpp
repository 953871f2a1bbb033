#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "descent/rational.hpp"

namespace descent {

class FieldElem;

/// An iterated quadratic extension Q(sqrt r1)(sqrt r2)... of the rationals.
///
/// Step i adjoins a square root s_i of a radicand living in the level-i field
/// (the field generated by s_1..s_i). Elements are coordinate vectors of
/// length 2^level over the power-product basis in binary-counter order: bit j
/// of the basis index selects s_{j+1}. Radicands are nonsquares in their level,
/// so the basis is a genuine Q-basis and equality is coordinatewise.
///
/// Towers are immutable values; copies share storage.
class FieldTower {
 public:
  FieldTower();

  int level() const;
  std::size_t degree() const { return std::size_t{1} << level(); }

  /// Radicand of step `step` (0-based) as coordinates in the level-`step` field.
  const std::vector<Rational>& radicand_coords(int step) const;
  const std::vector<std::vector<Rational>>& radicands() const;
  /// Radicand of step `step` embedded in this tower.
  FieldElem radicand(int step) const;

  FieldTower prefix(int level) const;

  /// True when every radicand is positive under the real embedding that takes
  /// every adjoined square root positive.
  bool is_real() const;

  /// True when `smaller`'s steps are a prefix of ours.
  bool extends(const FieldTower& smaller) const;

  bool operator==(const FieldTower& other) const;
  bool operator!=(const FieldTower& other) const { return !(*this == other); }

  std::string describe() const;

 private:
  struct Data;
  explicit FieldTower(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;

  friend FieldTower append_step_unchecked(const FieldTower&, std::vector<Rational>);
};

/// Appends a radicand without square checking; callers guarantee it is a nonsquare.
FieldTower append_step_unchecked(const FieldTower& tower, std::vector<Rational> radicand);

class FieldElem {
 public:
  FieldElem();
  explicit FieldElem(FieldTower tower, const Rational& value = 0);
  FieldElem(FieldTower tower, long value) : FieldElem(std::move(tower), Rational(value)) {}
  FieldElem(FieldTower tower, std::vector<Rational> coords);

  /// The square root adjoined at `step`.
  static FieldElem root(const FieldTower& tower, int step);
  /// Basis power product with index `index`.
  static FieldElem basis(const FieldTower& tower, std::size_t index);

  const FieldTower& tower() const { return tower_; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const;
  bool is_one() const;
  bool is_rational() const;
  /// Precondition: is_rational().
  const Rational& rational_value() const { return coords_[0]; }

  /// Re-expresses this element in an extension of its tower.
  FieldElem embed(const FieldTower& bigger) const;

  /// Restricts to the level-`level` subfield; requires the higher coordinates to vanish.
  FieldElem restrict_to(int level) const;

  FieldElem inverse() const;

  /// Sign under the positive-root real embedding; requires a real tower.
  int sign() const;

  FieldElem& operator+=(const FieldElem& other);
  FieldElem& operator-=(const FieldElem& other);
  FieldElem& operator*=(const FieldElem& other);
  FieldElem& operator/=(const FieldElem& other);

  friend FieldElem operator+(FieldElem a, const FieldElem& b) { return a += b; }
  friend FieldElem operator-(FieldElem a, const FieldElem& b) { return a -= b; }
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inverse(); }
  FieldElem operator-() const;

  friend FieldElem operator+(FieldElem a, const Rational& b);
  friend FieldElem operator-(FieldElem a, const Rational& b) { return a + Rational(-b); }
  friend FieldElem operator*(FieldElem a, const Rational& b);
  friend FieldElem operator+(const Rational& b, FieldElem a) { return std::move(a) + b; }
  friend FieldElem operator*(const Rational& b, FieldElem a) { return std::move(a) * b; }
  friend FieldElem operator-(const Rational& b, const FieldElem& a) { return -a + b; }
  friend FieldElem operator/(FieldElem a, const Rational& b);

  friend bool operator==(const FieldElem& a, const FieldElem& b);
  friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }
  friend bool operator==(const FieldElem& a, const Rational& b);
  friend bool operator==(const FieldElem& a, long b) { return a == Rational(b); }

  /// Lexicographic order on coordinates; used only for canonical sorting.
  friend std::strong_ordering lex_compare(const FieldElem& a, const FieldElem& b);

  std::string to_string() const;

 private:
  FieldTower tower_;
  std::vector<Rational> coords_;
};

inline bool is_zero(const FieldElem& x) { return x.is_zero(); }

/// Brings two elements onto a common tower (one must extend the other).
FieldTower common_tower(const FieldTower& a, const FieldTower& b);

struct ExtendResult {
  FieldTower tower;
  /// A square root of the requested radicand, in `tower`.
  FieldElem root;
  /// False when the radicand was already a square and the tower is unchanged.
  bool extended;
};

/// Adjoins a square root of `radicand`. Rational radicands are stored as
/// squarefree integers; other radicands are stored as given.
ExtendResult tower_extend(const FieldTower& tower, const FieldElem& radicand);
ExtendResult tower_extend(const FieldTower& tower, const Rational& radicand);

/// A square root of `a` in its tower, if one exists. Real towers return the
/// nonnegative root; otherwise the root whose first nonzero coordinate is positive.
std::optional<FieldElem> sqrt_in_field(const FieldElem& a);

/// A field automorphism of a Galois tower, stored by the images of the
/// adjoined roots and by its matrix on the power-product basis.
class GaloisAut {
 public:
  GaloisAut(FieldTower tower, std::vector<FieldElem> root_images);

  const FieldTower& tower() const { return tower_; }
  const std::vector<FieldElem>& root_images() const { return root_images_; }

  FieldElem apply(const FieldElem& x) const;
  bool is_identity() const;

  bool operator==(const GaloisAut& other) const { return root_images_ == other.root_images_; }

 private:
  FieldTower tower_;
  std::vector<FieldElem> root_images_;
  // columns_[j] = coordinates of the image of basis element j
  std::vector<std::vector<Rational>> columns_;
};

FieldElem apply_aut(const GaloisAut& sigma, const FieldElem& x);

class GaloisGroup {
 public:
  GaloisGroup(FieldTower tower, std::vector<GaloisAut> elements);

  const FieldTower& tower() const { return tower_; }
  std::size_t size() const { return elements_.size(); }
  const GaloisAut& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<GaloisAut>& elements() const { return elements_; }

  /// Index of elements[i] after elements[j] (apply j first).
  int multiply(int i, int j) const { return table_[i][j]; }
  int inverse(int i) const;
  int identity() const { return 0; }
  int index_of(const GaloisAut& sigma) const;

  bool is_subgroup(std::span<const int> indices) const;

 private:
  FieldTower tower_;
  std::vector<GaloisAut> elements_;
  std::vector<std::vector<int>> table_;
};

/// Full automorphism group of a Galois tower; identity first.
/// Throws NotGalois naming the first step whose radicand has a conjugate
/// without a square root in the tower.
GaloisGroup galois_group(const FieldTower& tower);

/// A subfield presented as its own tower together with the embedding of its
/// basis into the ambient tower.
struct Subfield {
  FieldTower tower;
  FieldTower ambient;
  // basis_images[j] = ambient coordinates of subfield basis element j
  std::vector<std::vector<Rational>> basis_images;

  FieldElem embed(const FieldElem& x) const;
  /// Subfield coordinates of an ambient element, if it lies in the subfield.
  std::optional<FieldElem> pull_back(const FieldElem& x) const;
  bool is_rationals() const { return tower.level() == 0; }
};

/// Fixed field of the subgroup `subgroup` (indices into `group`).
Subfield fixed_subtower(const GaloisGroup& group, std::span<const int> subgroup);

}  // namespace descent
