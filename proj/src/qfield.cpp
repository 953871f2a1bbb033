#include "descent/qfield.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "descent/dense.hpp"
#include "descent/errors.hpp"
#include "descent/factor.hpp"

namespace descent {

using Coords = std::vector<Rational>;
using Radicands = std::vector<std::vector<Rational>>;

struct FieldTower::Data {
  Radicands radicands;
  bool real = true;
};

namespace {

bool all_zero(std::span<const Rational> a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& q) { return sgn(q) == 0; });
}

Coords add(std::span<const Rational> a, std::span<const Rational> b) {
  Coords out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Coords sub(std::span<const Rational> a, std::span<const Rational> b) {
  Coords out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Coords neg(std::span<const Rational> a) {
  Coords out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = -a[i];
  return out;
}

Coords concat(Coords lo, const Coords& hi) {
  lo.insert(lo.end(), hi.begin(), hi.end());
  return lo;
}

// Product in the level-`level` field; Karatsuba on the two halves a0 + a1*s.
Coords mul(const Radicands& rad, int level, std::span<const Rational> a, std::span<const Rational> b) {
  if (level == 0) return {a[0] * b[0]};
  const std::size_t h = std::size_t{1} << (level - 1);
  auto a0 = a.first(h), a1 = a.subspan(h), b0 = b.first(h), b1 = b.subspan(h);
  const bool a1z = all_zero(a1), b1z = all_zero(b1);
  if (a1z && b1z) return concat(mul(rad, level - 1, a0, b0), Coords(h, Rational(0)));
  if (a1z) return concat(mul(rad, level - 1, a0, b0), mul(rad, level - 1, a0, b1));
  if (b1z) return concat(mul(rad, level - 1, a0, b0), mul(rad, level - 1, a1, b0));
  Coords p0 = mul(rad, level - 1, a0, b0);
  Coords p1 = mul(rad, level - 1, a1, b1);
  Coords s = mul(rad, level - 1, add(a0, a1), add(b0, b1));
  Coords cross = sub(sub(s, p0), p1);
  Coords low = add(p0, mul(rad, level - 1, p1, rad[level - 1]));
  return concat(std::move(low), cross);
}

Coords inv(const Radicands& rad, int level, std::span<const Rational> a) {
  if (level == 0) {
    if (sgn(a[0]) == 0) throw Error(ErrorCode::DivisionByZero, "division by zero");
    Rational r = 1 / a[0];
    return {r};
  }
  const std::size_t h = std::size_t{1} << (level - 1);
  auto a0 = a.first(h), a1 = a.subspan(h);
  if (all_zero(a1)) return concat(inv(rad, level - 1, a0), Coords(h, Rational(0)));
  Coords sq1 = mul(rad, level - 1, a1, a1);
  Coords norm = sub(mul(rad, level - 1, a0, a0), mul(rad, level - 1, sq1, rad[level - 1]));
  Coords ninv = inv(rad, level - 1, norm);
  return concat(mul(rad, level - 1, a0, ninv), neg(mul(rad, level - 1, a1, ninv)));
}

// Sign under the embedding with every adjoined root positive; radicands must be positive.
int sign_of(const Radicands& rad, int level, std::span<const Rational> a) {
  if (level == 0) return sgn(a[0]);
  const std::size_t h = std::size_t{1} << (level - 1);
  auto a0 = a.first(h), a1 = a.subspan(h);
  int sa = sign_of(rad, level - 1, a0);
  int sb = sign_of(rad, level - 1, a1);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // a0 and a1*s have opposite signs: compare a0^2 with a1^2 * r
  Coords t = sub(mul(rad, level - 1, a0, a0), mul(rad, level - 1, mul(rad, level - 1, a1, a1), rad[level - 1]));
  return sign_of(rad, level - 1, t) > 0 ? sa : sb;
}

std::optional<Coords> sqrt_coords(const Radicands& rad, int level, std::span<const Rational> a) {
  if (level == 0) {
    auto r = rational_sqrt(a[0]);
    if (!r) return std::nullopt;
    return Coords{*r};
  }
  const std::size_t h = std::size_t{1} << (level - 1);
  auto x = a.first(h), y = a.subspan(h);
  const Coords& r = rad[level - 1];
  if (all_zero(y)) {
    if (auto u = sqrt_coords(rad, level - 1, x)) return concat(*u, Coords(h, Rational(0)));
    Coords xr = mul(rad, level - 1, x, inv(rad, level - 1, r));
    if (auto v = sqrt_coords(rad, level - 1, xr)) return concat(Coords(h, Rational(0)), *v);
    return std::nullopt;
  }
  // (u + v s)^2 = (u^2 + v^2 r) + 2uv s; norm x^2 - y^2 r = (u^2 - v^2 r)^2
  Coords norm = sub(mul(rad, level - 1, x, x), mul(rad, level - 1, mul(rad, level - 1, y, y), r));
  auto t = sqrt_coords(rad, level - 1, norm);
  if (!t) return std::nullopt;
  for (int s : {1, -1}) {
    Coords half = add(x, s > 0 ? *t : neg(*t));
    for (auto& q : half) q /= 2;
    auto u = sqrt_coords(rad, level - 1, half);
    if (!u || all_zero(*u)) continue;
    Coords two_u = add(*u, *u);
    Coords v = mul(rad, level - 1, y, inv(rad, level - 1, two_u));
    return concat(*u, v);
  }
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// FieldTower

FieldTower::FieldTower() {
  static const auto rationals = std::make_shared<const Data>();
  data_ = rationals;
}

int FieldTower::level() const { return static_cast<int>(data_->radicands.size()); }

const std::vector<Rational>& FieldTower::radicand_coords(int step) const { return data_->radicands.at(step); }

const std::vector<std::vector<Rational>>& FieldTower::radicands() const { return data_->radicands; }

FieldElem FieldTower::radicand(int step) const {
  return FieldElem(prefix(step), data_->radicands.at(step)).embed(*this);
}

FieldTower FieldTower::prefix(int lvl) const {
  if (lvl == level()) return *this;
  if (lvl == 0) return FieldTower();
  auto data = std::make_shared<Data>();
  data->radicands.assign(data_->radicands.begin(), data_->radicands.begin() + lvl);
  data->real = true;
  for (int i = 0; i < lvl; ++i)
    data->real = data->real && sign_of(data->radicands, i, data->radicands[i]) > 0;
  return FieldTower(std::move(data));
}

bool FieldTower::is_real() const { return data_->real; }

bool FieldTower::extends(const FieldTower& smaller) const {
  if (smaller.level() > level()) return false;
  if (data_ == smaller.data_) return true;
  return std::equal(smaller.data_->radicands.begin(), smaller.data_->radicands.end(), data_->radicands.begin());
}

bool FieldTower::operator==(const FieldTower& other) const {
  return data_ == other.data_ || data_->radicands == other.data_->radicands;
}

std::string FieldTower::describe() const {
  if (level() == 0) return "Q";
  std::ostringstream os;
  os << "Q";
  for (int i = 0; i < level(); ++i) os << "(s" << i + 1 << ")";
  os << " with ";
  for (int i = 0; i < level(); ++i) {
    if (i) os << ", ";
    os << "s" << i + 1 << "^2 = " << FieldElem(prefix(i), data_->radicands[i]).to_string();
  }
  return os.str();
}

FieldTower append_step_unchecked(const FieldTower& tower, std::vector<Rational> radicand) {
  if (radicand.size() != tower.degree()) throw Error(ErrorCode::InputError, "radicand has wrong coordinate count");
  auto data = std::make_shared<FieldTower::Data>(*tower.data_);
  data->real = data->real && sign_of(data->radicands, tower.level(), radicand) > 0;
  data->radicands.push_back(std::move(radicand));
  return FieldTower(std::move(data));
}

FieldTower common_tower(const FieldTower& a, const FieldTower& b) {
  if (a == b || a.extends(b)) return a;
  if (b.extends(a)) return b;
  throw Error(ErrorCode::TowerMismatch, "elements live in incompatible towers: " + a.describe() + " vs " + b.describe());
}

// ---------------------------------------------------------------------------
// FieldElem

FieldElem::FieldElem() : coords_(1, Rational(0)) {}

FieldElem::FieldElem(FieldTower tower, const Rational& value)
    : tower_(std::move(tower)), coords_(tower_.degree(), Rational(0)) {
  coords_[0] = value;
}

FieldElem::FieldElem(FieldTower tower, std::vector<Rational> coords)
    : tower_(std::move(tower)), coords_(std::move(coords)) {
  if (coords_.size() != tower_.degree())
    throw Error(ErrorCode::InputError, "expected " + std::to_string(tower_.degree()) + " coordinates, got " +
                                           std::to_string(coords_.size()));
}

FieldElem FieldElem::root(const FieldTower& tower, int step) {
  return basis(tower, std::size_t{1} << step);
}

FieldElem FieldElem::basis(const FieldTower& tower, std::size_t index) {
  FieldElem e(tower);
  e.coords_.at(index) = 1;
  return e;
}

bool FieldElem::is_zero() const { return all_zero(coords_); }

bool FieldElem::is_one() const { return coords_[0] == 1 && all_zero(std::span(coords_).subspan(1)); }

bool FieldElem::is_rational() const { return all_zero(std::span(coords_).subspan(1)); }

FieldElem FieldElem::embed(const FieldTower& bigger) const {
  if (bigger == tower_) return *this;
  if (!bigger.extends(tower_)) throw Error(ErrorCode::TowerMismatch, "cannot embed into a non-extension");
  FieldElem out(bigger);
  std::copy(coords_.begin(), coords_.end(), out.coords_.begin());
  return out;
}

FieldElem FieldElem::restrict_to(int lvl) const {
  const std::size_t d = std::size_t{1} << lvl;
  if (!all_zero(std::span(coords_).subspan(d)))
    throw Error(ErrorCode::TowerMismatch, "element does not lie in the requested subfield");
  return FieldElem(tower_.prefix(lvl), Coords(coords_.begin(), coords_.begin() + d));
}

FieldElem FieldElem::inverse() const {
  return FieldElem(tower_, inv(tower_.radicands(), tower_.level(), coords_));
}

int FieldElem::sign() const {
  if (!tower_.is_real()) throw Error(ErrorCode::InputError, "sign requires a real tower");
  return sign_of(tower_.radicands(), tower_.level(), coords_);
}

FieldElem& FieldElem::operator+=(const FieldElem& other) {
  if (tower_ != other.tower_) {
    FieldTower t = common_tower(tower_, other.tower_);
    *this = embed(t);
    return *this += other.embed(t);
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

FieldElem& FieldElem::operator-=(const FieldElem& other) {
  if (tower_ != other.tower_) {
    FieldTower t = common_tower(tower_, other.tower_);
    *this = embed(t);
    return *this -= other.embed(t);
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

FieldElem& FieldElem::operator*=(const FieldElem& other) { return *this = *this * other; }

FieldElem& FieldElem::operator/=(const FieldElem& other) { return *this = *this / other; }

FieldElem operator*(const FieldElem& a, const FieldElem& b) {
  if (a.tower_ != b.tower_) {
    FieldTower t = common_tower(a.tower_, b.tower_);
    return a.embed(t) * b.embed(t);
  }
  if (b.is_rational()) return a * b.coords_[0];
  if (a.is_rational()) return b * a.coords_[0];
  return FieldElem(a.tower_, mul(a.tower_.radicands(), a.tower_.level(), a.coords_, b.coords_));
}

FieldElem FieldElem::operator-() const { return FieldElem(tower_, neg(coords_)); }

FieldElem operator+(FieldElem a, const Rational& b) {
  a.coords_[0] += b;
  return a;
}

FieldElem operator*(FieldElem a, const Rational& b) {
  for (auto& q : a.coords_) q *= b;
  return a;
}

FieldElem operator/(FieldElem a, const Rational& b) {
  if (sgn(b) == 0) throw Error(ErrorCode::DivisionByZero, "division by zero");
  for (auto& q : a.coords_) q /= b;
  return a;
}

bool operator==(const FieldElem& a, const FieldElem& b) {
  if (a.tower_ == b.tower_) return a.coords_ == b.coords_;
  FieldTower t = common_tower(a.tower_, b.tower_);
  return a.embed(t).coords_ == b.embed(t).coords_;
}

bool operator==(const FieldElem& a, const Rational& b) { return a.is_rational() && a.coords_[0] == b; }

std::strong_ordering lex_compare(const FieldElem& a, const FieldElem& b) {
  if (a.tower_ != b.tower_) {
    FieldTower t = common_tower(a.tower_, b.tower_);
    return lex_compare(a.embed(t), b.embed(t));
  }
  for (std::size_t i = 0; i < a.coords_.size(); ++i) {
    int c = cmp(a.coords_[i], b.coords_[i]);
    if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }
  return std::strong_ordering::equal;
}

std::string FieldElem::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    const Rational& c = coords_[i];
    if (sgn(c) == 0) continue;
    std::string mono;
    for (int bit = 0; bit < tower_.level(); ++bit)
      if (i & (std::size_t{1} << bit)) mono += (mono.empty() ? "s" : "*s") + std::to_string(bit + 1);
    if (!first) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    Rational ac = abs(c);
    if (mono.empty()) os << ac.get_str();
    else if (ac == 1) os << mono;
    else os << ac.get_str() << "*" << mono;
    first = false;
  }
  return first ? "0" : os.str();
}

// ---------------------------------------------------------------------------
// Square roots and extension

std::optional<FieldElem> sqrt_in_field(const FieldElem& a) {
  const FieldTower& t = a.tower();
  auto r = sqrt_coords(t.radicands(), t.level(), a.coords());
  if (!r) return std::nullopt;
  FieldElem root(t, std::move(*r));
  bool flip = false;
  if (t.is_real()) {
    flip = root.sign() < 0;
  } else {
    for (const auto& q : root.coords())
      if (sgn(q) != 0) {
        flip = sgn(q) < 0;
        break;
      }
  }
  return flip ? -root : root;
}

ExtendResult tower_extend(const FieldTower& tower, const FieldElem& radicand_in) {
  FieldElem radicand = radicand_in.embed(common_tower(tower, radicand_in.tower()));
  if (radicand.tower() != tower) throw Error(ErrorCode::TowerMismatch, "radicand lives outside the tower");
  if (radicand.is_zero()) throw Error(ErrorCode::ZeroRadicand, "cannot adjoin the square root of zero");
  if (auto r = sqrt_in_field(radicand)) return {tower, *r, false};
  if (radicand.is_rational()) {
    auto dec = squarefree_decompose(radicand.rational_value());
    Coords coords(tower.degree(), Rational(0));
    coords[0] = dec.core;
    FieldTower bigger = append_step_unchecked(tower, std::move(coords));
    return {bigger, FieldElem::root(bigger, tower.level()) * dec.scale, true};
  }
  FieldTower bigger = append_step_unchecked(tower, radicand.coords());
  return {bigger, FieldElem::root(bigger, tower.level()), true};
}

ExtendResult tower_extend(const FieldTower& tower, const Rational& radicand) {
  return tower_extend(tower, FieldElem(tower, radicand));
}

// ---------------------------------------------------------------------------
// Galois theory

GaloisAut::GaloisAut(FieldTower tower, std::vector<FieldElem> root_images)
    : tower_(std::move(tower)), root_images_(std::move(root_images)) {
  const std::size_t d = tower_.degree();
  std::vector<FieldElem> images;
  images.reserve(d);
  images.emplace_back(tower_, Rational(1));
  for (std::size_t j = 1; j < d; ++j) {
    int top = 0;
    while ((std::size_t{2} << top) <= j) ++top;
    images.push_back(images[j ^ (std::size_t{1} << top)] * root_images_[top]);
  }
  columns_.reserve(d);
  for (auto& img : images) columns_.push_back(img.coords());
}

FieldElem GaloisAut::apply(const FieldElem& x_in) const {
  FieldElem x = x_in.embed(tower_);
  Coords out(tower_.degree(), Rational(0));
  for (std::size_t j = 0; j < out.size(); ++j) {
    const Rational& c = x.coords()[j];
    if (sgn(c) == 0) continue;
    for (std::size_t i = 0; i < out.size(); ++i)
      if (sgn(columns_[j][i]) != 0) out[i] += c * columns_[j][i];
  }
  return FieldElem(tower_, std::move(out));
}

bool GaloisAut::is_identity() const {
  for (int i = 0; i < tower_.level(); ++i)
    if (root_images_[i] != FieldElem::root(tower_, i)) return false;
  return true;
}

FieldElem apply_aut(const GaloisAut& sigma, const FieldElem& x) { return sigma.apply(x); }

GaloisGroup::GaloisGroup(FieldTower tower, std::vector<GaloisAut> elements)
    : tower_(std::move(tower)), elements_(std::move(elements)) {
  const std::size_t n = elements_.size();
  table_.assign(n, std::vector<int>(n, -1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<FieldElem> imgs;
      for (const auto& r : elements_[j].root_images()) imgs.push_back(elements_[i].apply(r));
      int k = index_of(GaloisAut(tower_, std::move(imgs)));
      check(k >= 0, "Galois group not closed under composition");
      table_[i][j] = k;
    }
}

int GaloisGroup::inverse(int i) const {
  for (std::size_t j = 0; j < size(); ++j)
    if (table_[i][j] == 0) return static_cast<int>(j);
  throw Error(ErrorCode::InternalInconsistency, "missing inverse in Galois group");
}

int GaloisGroup::index_of(const GaloisAut& sigma) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (elements_[i] == sigma) return static_cast<int>(i);
  return -1;
}

bool GaloisGroup::is_subgroup(std::span<const int> indices) const {
  std::set<int> s(indices.begin(), indices.end());
  if (!s.count(0)) return false;
  for (int a : s)
    for (int b : s)
      if (!s.count(table_[a][b])) return false;
  return true;
}

GaloisGroup galois_group(const FieldTower& tower) {
  const int L = tower.level();
  std::vector<std::vector<FieldElem>> partial{{}};
  for (int step = 0; step < L; ++step) {
    std::vector<std::vector<FieldElem>> next;
    const Coords& r = tower.radicand_coords(step);
    for (auto& images : partial) {
      // evaluate the partial automorphism on the step radicand
      FieldElem value(tower);
      for (std::size_t j = 0; j < r.size(); ++j) {
        if (sgn(r[j]) == 0) continue;
        FieldElem mono(tower, Rational(1));
        for (int bit = 0; bit < step; ++bit)
          if (j & (std::size_t{1} << bit)) mono = mono * images[bit];
        value += mono * r[j];
      }
      auto t = sqrt_in_field(value);
      if (!t)
        throw Error(ErrorCode::NotGalois, "tower is not Galois: a conjugate of the radicand of step " +
                                              std::to_string(step + 1) + " has no square root in the tower");
      auto plus = images;
      plus.push_back(*t);
      auto minus = images;
      minus.push_back(-*t);
      next.push_back(std::move(plus));
      next.push_back(std::move(minus));
    }
    partial = std::move(next);
  }
  std::vector<GaloisAut> elements;
  for (auto& images : partial) elements.emplace_back(tower, std::move(images));
  check(elements.front().is_identity(), "first Galois element must be the identity");
  return GaloisGroup(tower, std::move(elements));
}

// ---------------------------------------------------------------------------
// Fixed fields

FieldElem Subfield::embed(const FieldElem& x_in) const {
  FieldElem x = x_in.embed(tower);
  Coords out(ambient.degree(), Rational(0));
  for (std::size_t j = 0; j < basis_images.size(); ++j) {
    if (sgn(x.coords()[j]) == 0) continue;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += x.coords()[j] * basis_images[j][i];
  }
  return FieldElem(ambient, std::move(out));
}

std::optional<FieldElem> Subfield::pull_back(const FieldElem& x_in) const {
  FieldElem x = x_in.embed(ambient);
  DenseMatrix<Rational> a(ambient.degree(), basis_images.size(), Rational(0));
  for (std::size_t j = 0; j < basis_images.size(); ++j)
    for (std::size_t i = 0; i < ambient.degree(); ++i) a(i, j) = basis_images[j][i];
  auto sol = solve(a, x.coords());
  if (!sol) return std::nullopt;
  return FieldElem(tower, std::move(*sol));
}

Subfield fixed_subtower(const GaloisGroup& group, std::span<const int> subgroup) {
  if (!group.is_subgroup(subgroup)) throw Error(ErrorCode::InputError, "fixed_subtower: not a subgroup");
  const int n = static_cast<int>(group.size());

  // Chain S = S_0 < S_1 < ... < S_j = G with index 2 at each step.
  std::vector<std::vector<int>> chain;
  std::vector<int> generators;
  std::vector<int> current(subgroup.begin(), subgroup.end());
  std::sort(current.begin(), current.end());
  while (static_cast<int>(current.size()) < n) {
    std::set<int> cur(current.begin(), current.end());
    int chosen = -1;
    for (int g = 0; g < n && chosen < 0; ++g) {
      if (cur.count(g) || !cur.count(group.multiply(g, g))) continue;
      bool normalizes = true;
      for (int s : current)
        if (!cur.count(group.multiply(group.multiply(g, s), group.inverse(g)))) {
          normalizes = false;
          break;
        }
      if (normalizes) chosen = g;
    }
    check(chosen >= 0, "no index-2 overgroup found (Galois group not a 2-group?)");
    chain.push_back(current);
    generators.push_back(chosen);
    std::set<int> next = cur;
    for (int s : current) next.insert(group.multiply(chosen, s));
    current.assign(next.begin(), next.end());
  }

  const FieldTower& ambient = group.tower();
  Subfield out{FieldTower(), ambient, {FieldElem(ambient, Rational(1)).coords()}};
  for (int k = static_cast<int>(chain.size()) - 1; k >= 0; --k) {
    const auto& t = chain[k];
    const GaloisAut& g = group[generators[k]];
    std::optional<FieldElem> y;
    for (std::size_t b = 0; b < ambient.degree() && !y; ++b) {
      FieldElem e = FieldElem::basis(ambient, b);
      FieldElem u(ambient);
      for (int s : t) u += group[s].apply(e);
      FieldElem cand = u - g.apply(u);
      if (!cand.is_zero()) y = cand;
    }
    check(y.has_value(), "no anti-invariant element found");
    auto rad = out.pull_back(*y * *y);
    check(rad.has_value(), "square of anti-invariant element is not in the smaller fixed field");
    if (rad->is_rational()) {
      auto dec = squarefree_decompose(rad->rational_value());
      *y = *y / dec.scale;
      rad = FieldElem(out.tower, Rational(dec.core));
    }
    out.tower = append_step_unchecked(out.tower, rad->coords());
    const std::size_t old = out.basis_images.size();
    for (std::size_t j = 0; j < old; ++j) out.basis_images.push_back((FieldElem(ambient, out.basis_images[j]) * *y).coords());
  }
  return out;
}

}  // namespace descent
