#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "descent/projline.hpp"

namespace descent {

// Homogeneous polynomial in X, Y; coeffs()[i] multiplies X^i Y^(degree - i).
class BinaryForm {
 public:
  explicit BinaryForm(std::vector<FieldElem> coeffs);

  /// y X - x Y, vanishing exactly at p.
  static BinaryForm linear(const ProjPoint& p);
  /// Product of the linear forms of the given points.
  static BinaryForm from_roots(std::span<const ProjPoint> points, const FieldTower& tower);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<FieldElem>& coeffs() const { return coeffs_; }
  const FieldTower& tower() const { return coeffs_.front().tower(); }
  bool is_zero() const;

  FieldElem operator()(const FieldElem& x, const FieldElem& y) const;
  FieldElem operator()(const ProjPoint& p) const { return (*this)(p.x(), p.y()); }

  friend BinaryForm operator*(const BinaryForm& f, const BinaryForm& g);
  friend BinaryForm operator*(const BinaryForm& f, const FieldElem& s);
  friend BinaryForm operator+(const BinaryForm& f, const BinaryForm& g);
  friend BinaryForm operator-(const BinaryForm& f, const BinaryForm& g);
  friend bool operator==(const BinaryForm& f, const BinaryForm& g) { return f.coeffs_ == g.coeffs_; }

  /// F(aX + bY, cX + dY) for the matrix of m.
  BinaryForm substitute(const Mobius& m) const;
  BinaryForm derivative_x() const;
  BinaryForm derivative_y() const;
  BinaryForm embed(const FieldTower& bigger) const;

  /// s with *this = s * other, if the two forms are proportional.
  std::optional<FieldElem> ratio_to(const BinaryForm& other) const;

  std::string to_string() const;

 private:
  std::vector<FieldElem> coeffs_;
};

BinaryForm conjugate(const GaloisAut& sigma, const BinaryForm& f);

}  // namespace descent
