#include "descent/binary_form.hpp"

#include <sstream>

#include "descent/errors.hpp"

namespace descent {

BinaryForm::BinaryForm(std::vector<FieldElem> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw Error(ErrorCode::InputError, "binary form needs at least one coefficient");
  FieldTower t = coeffs_.front().tower();
  for (const auto& c : coeffs_) t = common_tower(t, c.tower());
  for (auto& c : coeffs_) c = c.embed(t);
}

BinaryForm BinaryForm::linear(const ProjPoint& p) { return BinaryForm({-p.x(), p.y()}); }

BinaryForm BinaryForm::from_roots(std::span<const ProjPoint> points, const FieldTower& tower) {
  BinaryForm out({FieldElem(tower, Rational(1))});
  for (const auto& p : points) out = out * linear(p);
  return out;
}

bool BinaryForm::is_zero() const {
  for (const auto& c : coeffs_)
    if (!c.is_zero()) return false;
  return true;
}

FieldElem BinaryForm::operator()(const FieldElem& x, const FieldElem& y) const {
  // Horner in x; each step multiplies the lower terms by one more y
  FieldElem acc = coeffs_.back();
  FieldElem ypow = y;
  for (int i = degree() - 1; i >= 0; --i) {
    acc = acc * x + coeffs_[i] * ypow;
    if (i > 0) ypow = ypow * y;
  }
  return acc;
}

BinaryForm operator*(const BinaryForm& f, const BinaryForm& g) {
  FieldTower t = common_tower(f.tower(), g.tower());
  std::vector<FieldElem> out(f.degree() + g.degree() + 1, FieldElem(t));
  for (int i = 0; i <= f.degree(); ++i) {
    if (f.coeffs_[i].is_zero()) continue;
    for (int j = 0; j <= g.degree(); ++j) out[i + j] += f.coeffs_[i] * g.coeffs_[j];
  }
  return BinaryForm(std::move(out));
}

BinaryForm operator*(const BinaryForm& f, const FieldElem& s) {
  std::vector<FieldElem> out;
  for (const auto& c : f.coeffs_) out.push_back(c * s);
  return BinaryForm(std::move(out));
}

BinaryForm operator+(const BinaryForm& f, const BinaryForm& g) {
  if (f.degree() != g.degree()) throw Error(ErrorCode::InputError, "adding binary forms of different degrees");
  std::vector<FieldElem> out;
  for (int i = 0; i <= f.degree(); ++i) out.push_back(f.coeffs_[i] + g.coeffs_[i]);
  return BinaryForm(std::move(out));
}

BinaryForm operator-(const BinaryForm& f, const BinaryForm& g) {
  if (f.degree() != g.degree()) throw Error(ErrorCode::InputError, "subtracting binary forms of different degrees");
  std::vector<FieldElem> out;
  for (int i = 0; i <= f.degree(); ++i) out.push_back(f.coeffs_[i] - g.coeffs_[i]);
  return BinaryForm(std::move(out));
}

BinaryForm BinaryForm::substitute(const Mobius& m) const {
  FieldTower t = common_tower(tower(), m.tower());
  const int n = degree();
  BinaryForm u({m.b(), m.a()});  // aX + bY
  BinaryForm v({m.d(), m.c()});  // cX + dY
  std::vector<BinaryForm> upow{BinaryForm({FieldElem(t, Rational(1))})}, vpow{upow.front()};
  for (int i = 1; i <= n; ++i) {
    upow.push_back(upow.back() * u);
    vpow.push_back(vpow.back() * v);
  }
  BinaryForm out(std::vector<FieldElem>(n + 1, FieldElem(t)));
  for (int i = 0; i <= n; ++i)
    if (!coeffs_[i].is_zero()) out = out + upow[i] * vpow[n - i] * coeffs_[i];
  return out;
}

BinaryForm BinaryForm::derivative_x() const {
  if (degree() == 0) return BinaryForm({FieldElem(tower())});
  std::vector<FieldElem> out;
  for (int i = 1; i <= degree(); ++i) out.push_back(coeffs_[i] * Rational(i));
  return BinaryForm(std::move(out));
}

BinaryForm BinaryForm::derivative_y() const {
  if (degree() == 0) return BinaryForm({FieldElem(tower())});
  std::vector<FieldElem> out;
  for (int i = 0; i < degree(); ++i) out.push_back(coeffs_[i] * Rational(degree() - i));
  return BinaryForm(std::move(out));
}

BinaryForm BinaryForm::embed(const FieldTower& bigger) const {
  std::vector<FieldElem> out;
  for (const auto& c : coeffs_) out.push_back(c.embed(bigger));
  return BinaryForm(std::move(out));
}

std::optional<FieldElem> BinaryForm::ratio_to(const BinaryForm& other) const {
  if (degree() != other.degree()) return std::nullopt;
  std::optional<FieldElem> s;
  for (int i = 0; i <= degree() && !s; ++i)
    if (!other.coeffs_[i].is_zero()) s = coeffs_[i] / other.coeffs_[i];
  if (!s) return is_zero() ? std::optional<FieldElem>(FieldElem(tower())) : std::nullopt;
  for (int i = 0; i <= degree(); ++i)
    if (coeffs_[i] != other.coeffs_[i] * *s) return std::nullopt;
  return s;
}

std::string BinaryForm::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (coeffs_[i].is_zero()) continue;
    if (!first) os << " + ";
    os << "(" << coeffs_[i].to_string() << ")";
    if (i > 0) os << "*X^" << i;
    if (degree() - i > 0) os << "*Y^" << degree() - i;
    first = false;
  }
  return first ? "0" : os.str();
}

BinaryForm conjugate(const GaloisAut& sigma, const BinaryForm& f) {
  std::vector<FieldElem> out;
  for (const auto& c : f.coeffs()) out.push_back(sigma.apply(c));
  return BinaryForm(std::move(out));
}

}  // namespace descent
