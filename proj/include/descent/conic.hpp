#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "descent/dense.hpp"
#include "descent/factor.hpp"
#include "descent/rational.hpp"

namespace descent {

/// The plane conic sum gram(i,j) x_i x_j = 0 over Q.
struct TernaryForm {
  std::array<std::array<Rational, 3>, 3> gram{};

  static TernaryForm diagonal(const Rational& a, const Rational& b, const Rational& c);
  /// Upper triangle g00, g01, g02, g11, g12, g22 of the Gram matrix.
  static TernaryForm from_upper(const std::array<Rational, 6>& upper);

  Rational operator()(const std::array<Rational, 3>& v) const;
  Rational bilinear(const std::array<Rational, 3>& u, const std::array<Rational, 3>& v) const;
  Rational determinant() const;
  std::array<Rational, 6> upper() const;

  friend bool operator==(const TernaryForm&, const TernaryForm&) = default;
};

struct Diagonalization {
  /// Squarefree integers with basis^T * gram * basis = diag(coeffs).
  std::array<Integer, 3> coeffs;
  /// Columns are the new basis vectors.
  DenseMatrix<Rational> basis;
};

Diagonalization diagonalize(const TernaryForm& f, const FactorConfig& config = {});

/// A place of Q: prime = 0 stands for the real place.
struct Place {
  Integer prime;

  bool is_infinite() const { return prime == 0; }
  std::string to_string() const;
  friend bool operator==(const Place&, const Place&) = default;
};

struct PlaceEval {
  Place place;
  int symbol;  // +1 or -1
};

/// Hilbert symbol (a, b)_v for nonzero rationals.
int hilbert_symbol(const Rational& a, const Rational& b, const Place& v);

/// The real place, 2, and every odd prime dividing the numerators or denominators of the inputs.
std::vector<Place> relevant_places(const std::vector<Rational>& values, const FactorConfig& config = {});

struct HasseResult {
  bool solvable;
  /// Diagonal model (a, b, c); the conic is equivalent to z^2 = -ac x^2 - bc y^2.
  std::array<Integer, 3> diagonal;
  /// Symbol (-ac, -bc)_v at every relevant place, in place order.
  std::vector<PlaceEval> evaluations;
  std::vector<PlaceEval> failing;
};

HasseResult hasse_solvable(const TernaryForm& f, const FactorConfig& config = {});

using ConicPoint = std::array<Rational, 3>;

/// A nontrivial integral solution of z^2 = A x^2 + B y^2 (A, B nonzero
/// squarefree integers), as (x, y, z), if one exists.
std::optional<std::array<Integer, 3>> solve_legendre(const Integer& a, const Integer& b, const FactorConfig& config = {});

/// A rational point with primitive integral coordinates, or nullopt when the
/// conic is not locally solvable everywhere.
std::optional<ConicPoint> find_point(const TernaryForm& f, const FactorConfig& config = {});

/// Residual-intersection parametrization: component i of the image of
/// (s : t) is coeff[i][0] s^2 + coeff[i][1] s t + coeff[i][2] t^2.
template <class Scalar>
struct QuadraticMap {
  std::array<std::array<Scalar, 3>, 3> coeff;

  std::array<Scalar, 3> operator()(const Scalar& s, const Scalar& t) const {
    std::array<Scalar, 3> out{coeff[0][0], coeff[1][0], coeff[2][0]};
    for (int i = 0; i < 3; ++i) out[i] = coeff[i][0] * s * s + coeff[i][1] * s * t + coeff[i][2] * t * t;
    return out;
  }
};

/// Lines through p meet the conic again at gram(v,v) p - 2 B(p,v) v where
/// v = s u + t w; u, w together with p must span the plane.
template <class Scalar>
QuadraticMap<Scalar> residual_parametrization(const std::array<std::array<Scalar, 3>, 3>& gram,
                                              const std::array<Scalar, 3>& p, const std::array<Scalar, 3>& u,
                                              const std::array<Scalar, 3>& w) {
  auto bil = [&](const std::array<Scalar, 3>& x, const std::array<Scalar, 3>& y) {
    Scalar acc = gram[0][0] * x[0] * y[0];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i || j) acc = acc + gram[i][j] * x[i] * y[j];
    return acc;
  };
  // Q(v) = Quu s^2 + 2Quw st + Qww t^2 and B(p, v) = Bpu s + Bpw t
  Scalar quu = bil(u, u), quw = bil(u, w), qww = bil(w, w), bpu = bil(p, u), bpw = bil(p, w);
  QuadraticMap<Scalar> out{};
  for (int i = 0; i < 3; ++i) {
    out.coeff[i][0] = quu * p[i] - bpu * u[i] * 2;
    out.coeff[i][1] = quw * p[i] * 2 - (bpu * w[i] + bpw * u[i]) * 2;
    out.coeff[i][2] = qww * p[i] - bpw * w[i] * 2;
  }
  return out;
}

/// Rational parametrization of f from the rational point p. Throws
/// PointNotOnConic when f(p) != 0.
QuadraticMap<Rational> parametrize(const TernaryForm& f, const ConicPoint& p);

}  // namespace descent
