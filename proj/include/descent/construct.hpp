#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "descent/decide.hpp"

namespace descent {

/// Both intersection points of a rational line with a conic, over the
/// quadratic field they generate.
struct LineSection {
  FieldTower tower;
  std::array<std::array<FieldElem, 3>, 2> points;
};

/// `line` holds (l0, l1, l2) for the line l0 x + l1 y + l2 z = 0.
/// Throws TangentLine when the restricted quadratic has a double root.
LineSection line_section_divisor(const TernaryForm& c, const std::array<Rational, 3>& line);

struct CounterexampleSpec {
  Integer a = -1;
  Integer b = -1;
  int n = 8;
  std::uint64_t seed = 1;
  int max_retries = 50;
};

using ConicCoords = std::array<FieldElem, 3>;

/// The double cover s ↦ s^2 = τ followed by the parametrization τ ↦ P(τ) of
/// the conic a x^2 + b y^2 = z^2 over Q(√a), with p = P(∞) and p̄ = P(0).
struct DoubleCoverData {
  TernaryForm conic;
  FieldTower base;                      // Q(√a)
  QuadraticMap<FieldElem> parametrization;
  ConicCoords p, p_bar;
  /// Degree-2 points of E, as conjugate pairs over Q(√a).
  std::vector<std::array<ConicCoords, 2>> sections;
  bool contains_branch_pair = false;    // {p, p̄} ⊂ E
  Mobius deck;                          // s ↦ -s
  Divisor divisor;                      // f^{-1}(E), over Q(√a, √b)
  int attempts = 0;
};

struct Counterexample {
  DoubleCoverData data;
  Verdict verdict;
};

/// Throws SplitSymbol, BadDegree or RetriesExhausted.
Counterexample gen_counterexample(const CounterexampleSpec& spec, const DecideOptions& options = {});

/// A divisor of even degree n >= 6 with trivial automorphism group whose
/// compression is the pointless conic a x^2 + b y^2 = z^2.
Counterexample gen_conic_model(const CounterexampleSpec& spec, const DecideOptions& options = {});

/// True iff the centralizer of g in G is {id, g}; then |G|/2 is checked odd.
/// Throws NotAnInvolution.
bool check_self_centralizing(const AutGroup& g, int involution);

struct Deg6Form {
  FieldElem lambda;
  Mobius normalizing;                  // sends D to {0, ∞, 1, -1, λ, -λ}
  std::array<FieldElem, 4> lambda_orbit;  // λ, -λ, 1/λ, -1/λ
};

/// Throws HypothesesNotMet unless n = 6 and some involution in Aut has both
/// fixed points in D.
Deg6Form deg6_normal_form(const Divisor& d);

struct HyperellipticReport {
  Divisor divisor;
  std::size_t reduced_order = 0;
  GroupClass reduced_group;
  Verdict verdict;
  /// The divisor has a pointless compression.
  bool obstruction_possible = false;
  std::string note;
};

/// Throws GenusTooSmall below degree 6 and InputError for odd degree.
HyperellipticReport hyperelliptic_branch_analysis(const Divisor& branch, bool odd_infinity,
                                                  const DecideOptions& options = {});

/// A Galois-stable divisor of degree n moved by a random Möbius map.
Divisor random_twisted_divisor(std::size_t n, const FieldTower& tower, std::uint64_t seed);

}  // namespace descent
