#pragma once

#include <array>
#include <optional>
#include <vector>

#include "descent/binary_form.hpp"
#include "descent/conic.hpp"
#include "descent/dense.hpp"
#include "descent/divisor.hpp"
#include "descent/qfield.hpp"

namespace descent {

/// The Galois elements σ for which σ(D) is equivalent to D, one witness
/// φ_σ with φ_σ(σ(D)) = D per element, and the fixed field of that subgroup.
struct ModuliData {
  GaloisGroup group;
  /// Indices into `group`, identity first, then increasing.
  std::vector<int> subgroup;
  /// cochain[k] belongs to subgroup[k]; the identity gets the identity map.
  std::vector<Mobius> cochain;
  Subfield fom;

  bool fom_is_rationals() const { return fom.is_rationals(); }
  /// Position of a Galois index inside `subgroup`, or -1.
  int position(int galois_index) const;
  const Mobius& phi(int galois_index) const;
};

/// Requires a Galois tower (NotGalois otherwise).
ModuliData field_of_moduli(const Divisor& d);

/// c(σ, τ) = φ_σ σ(φ_τ) φ_{στ}^{-1}, stored as indices into the automorphism group.
struct Cocycle {
  std::vector<int> subgroup;
  std::vector<std::vector<int>> values;  // values[i][j] for subgroup[i], subgroup[j]
};

Cocycle descent_cocycle(const ModuliData& data, const Divisor& d, const AutGroup& aut);

/// The quotient P^1 -> P^1 by a finite group, (X : Y) ↦ (F0 : F1), where
/// F0 and F1 are products of a linear form over the group.
struct QuotientMap {
  BinaryForm f0;
  BinaryForm f1;

  int degree() const { return f0.degree(); }
  ProjPoint operator()(const ProjPoint& p) const;
};

QuotientMap quotient_map(const AutGroup& g);

struct RamificationEntry {
  ProjPoint point;  // representative over `point.tower()`
  int index;        // e
  int different;    // d = e - 1 in the tame case
  int residue_degree;
};

struct RamificationLedger {
  int covering_degree = 0;
  std::vector<RamificationEntry> entries;
  std::vector<ProjPoint> branch_points;

  /// 2m - 2 = Σ d_r · deg(r)
  bool satisfies_riemann_hurwitz() const;
  bool tame() const;
};

/// Ledger of z ↦ z^m.
RamificationLedger quotient_ramification(int m);

/// Ledger read off the Wronskian of a cyclic quotient map; residue degrees
/// are over the tower of the map.
RamificationLedger ramification_ledger(const QuotientMap& q, const AutGroup& g);

/// Descent of the quotient line to the field of moduli as a plane conic.
struct Compression {
  QuotientMap quotient;
  /// N_σ with F∘φ_σ = N_σ σ(F), one per subgroup element.
  std::vector<DenseMatrix<FieldElem>> target_cocycle;
  /// Sym²(N_σ) / det N_σ.
  std::vector<DenseMatrix<FieldElem>> veronese_cocycle;
  /// Columns are H-fixed vectors for the twisted action.
  DenseMatrix<FieldElem> basis;
  DenseMatrix<FieldElem> basis_inverse;
  /// Gram matrix of the conic over the field of moduli.
  std::array<std::array<FieldElem, 3>, 3> gram;
  /// The same conic as an integral form when the field of moduli is Q.
  std::optional<TernaryForm> form;
};

/// Throws NonCyclicAut for noncyclic groups and DescentFailure when a
/// cocycle identity or the fixed-space dimension check fails.
Compression compression(const Divisor& d, const ModuliData& data, const AutGroup& aut);

struct CompressedPoint {
  std::array<FieldElem, 3> point;  // conic coordinates over the tower, normalized
  int degree;                      // size of the Galois orbit over the field of moduli
};

struct CompressedDivisor {
  /// One representative per closed point, ordered by first appearance along D.
  std::vector<CompressedPoint> orbit_images;
  /// Number of Aut-orbits in D, i.e. the number of geometric image points.
  std::size_t geometric_points = 0;

  bool all_degrees_even() const;
};

CompressedDivisor compressed_divisor(const Divisor& d, const ModuliData& data, const Compression& c);

struct QuaternionSymbol {
  Integer a;
  Integer b;
  friend bool operator==(const QuaternionSymbol&, const QuaternionSymbol&) = default;
};

/// Decomposes a {1, g}-valued cocycle over an elementary abelian subgroup in
/// the basis of cup products of the radicand characters.
std::vector<QuaternionSymbol> cocycle_class_to_quaternion(const Cocycle& c, const ModuliData& data,
                                                          const AutGroup& aut);

/// Product of the symbols' Hilbert symbols at a place.
int symbol_product(const std::vector<QuaternionSymbol>& symbols, const Place& v);

DenseMatrix<FieldElem> to_matrix(const Mobius& m);

}  // namespace descent
