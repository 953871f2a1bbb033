#include "descent/moduli.hpp"

#include <algorithm>

#include "descent/errors.hpp"

namespace descent {

namespace {

using Matrix = DenseMatrix<FieldElem>;

Matrix conjugate_matrix(const GaloisAut& sigma, const Matrix& m) {
  Matrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = sigma.apply(m(i, j));
  return out;
}

bool proportional(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows() * a.cols();
  auto at = [](const Matrix& m, std::size_t k) -> const FieldElem& { return m(k / m.cols(), k % m.cols()); };
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k + 1; l < n; ++l)
      if (!(at(a, k) * at(b, l) - at(a, l) * at(b, k)).is_zero()) return false;
  return true;
}

// Action of N on (y0^2, y0 y1, y1^2), divided by det N.
Matrix symmetric_square(const Matrix& n) {
  const FieldElem &a = n(0, 0), &b = n(0, 1), &c = n(1, 0), &d = n(1, 1);
  FieldElem det = a * d - b * c;
  FieldElem inv = det.inverse();
  Matrix s(3, 3, FieldElem(a.tower()));
  s(0, 0) = a * a;
  s(0, 1) = a * b * Rational(2);
  s(0, 2) = b * b;
  s(1, 0) = a * c;
  s(1, 1) = a * d + b * c;
  s(1, 2) = b * d;
  s(2, 0) = c * c;
  s(2, 1) = c * d * Rational(2);
  s(2, 2) = d * d;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) s(i, j) = s(i, j) * inv;
  return s;
}

std::array<FieldElem, 3> normalize(std::array<FieldElem, 3> v) {
  int k = 0;
  while (k < 3 && v[k].is_zero()) ++k;
  check(k < 3, "zero vector in projective plane");
  FieldElem inv = v[k].inverse();
  for (auto& x : v) x = x * inv;
  return v;
}

std::array<FieldElem, 3> veronese(const ProjPoint& y) {
  return {y.x() * y.x(), y.x() * y.y(), y.y() * y.y()};
}

std::array<FieldElem, 3> mat_vec(const Matrix& m, const std::array<FieldElem, 3>& v) {
  std::array<FieldElem, 3> out{FieldElem(v[0].tower()), FieldElem(v[0].tower()), FieldElem(v[0].tower())};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) out[i] += m(i, j) * v[j];
  return out;
}

// First nonzero coefficient index of F at X^i, i.e. the order of vanishing at (0 : 1).
int vanishing_order_at_zero(const BinaryForm& f) {
  int k = 0;
  while (k <= f.degree() && f.coeffs()[k].is_zero()) ++k;
  check(k <= f.degree(), "zero form has no vanishing order");
  return k;
}

int vanishing_order(const BinaryForm& f, const ProjPoint& p) {
  const FieldTower& t = p.tower();
  // M(0 : 1) = p
  Mobius m = p.is_infinity() ? Mobius(FieldElem(t), p.x(), FieldElem(t, 1L), FieldElem(t))
                             : Mobius(FieldElem(t, 1L), p.x(), FieldElem(t), FieldElem(t, 1L));
  return vanishing_order_at_zero(f.substitute(m));
}

std::vector<ProjPoint> small_rational_points(const FieldTower& t) {
  std::vector<ProjPoint> out{ProjPoint::affine(FieldElem(t)), ProjPoint::infinity(t)};
  for (long k = 1; k <= 12; ++k) {
    out.push_back(ProjPoint::affine(FieldElem(t, k)));
    out.push_back(ProjPoint::affine(FieldElem(t, -k)));
    if (k > 1) out.push_back(ProjPoint::affine(FieldElem(t, Rational(1, k))));
  }
  return out;
}

BinaryForm orbit_form(const AutGroup& g, const ProjPoint& alpha) {
  BinaryForm ell = BinaryForm::linear(alpha);
  BinaryForm f = ell.substitute(g[0]);
  for (std::size_t k = 1; k < g.size(); ++k) f = f * ell.substitute(g[k]);
  return f;
}

}  // namespace

DenseMatrix<FieldElem> to_matrix(const Mobius& m) {
  Matrix out(2, 2, m.a());
  out(0, 1) = m.b();
  out(1, 0) = m.c();
  out(1, 1) = m.d();
  return out;
}

// ---------------------------------------------------------------------------
// Field of moduli and cocycle

int ModuliData::position(int galois_index) const {
  auto it = std::find(subgroup.begin(), subgroup.end(), galois_index);
  return it == subgroup.end() ? -1 : static_cast<int>(it - subgroup.begin());
}

const Mobius& ModuliData::phi(int galois_index) const {
  int k = position(galois_index);
  if (k < 0) throw Error(ErrorCode::InputError, "Galois element outside the moduli subgroup");
  return cochain[k];
}

ModuliData field_of_moduli(const Divisor& d) {
  if (d.degree() < 3) throw Error(ErrorCode::DegreeTooSmall, "field of moduli needs at least three points");
  GaloisGroup group = galois_group(d.tower());
  std::vector<int> subgroup;
  std::vector<Mobius> cochain;
  for (int i = 0; i < static_cast<int>(group.size()); ++i) {
    if (i == group.identity()) {
      subgroup.push_back(i);
      cochain.push_back(Mobius::identity(d.tower()));
      continue;
    }
    if (auto phi = pgl2_equivalent(conjugate_divisor(group[i], d), d)) {
      subgroup.push_back(i);
      cochain.push_back(std::move(*phi));
    }
  }
  check(group.is_subgroup(subgroup), "moduli elements do not form a subgroup");
  Subfield fom = fixed_subtower(group, subgroup);
  return ModuliData{std::move(group), std::move(subgroup), std::move(cochain), std::move(fom)};
}

Cocycle descent_cocycle(const ModuliData& data, const Divisor& d, const AutGroup& aut) {
  const std::size_t h = data.subgroup.size();
  Cocycle c{data.subgroup, std::vector<std::vector<int>>(h, std::vector<int>(h, -1))};
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      int s = data.subgroup[i], t = data.subgroup[j];
      int st = data.group.multiply(s, t);
      Mobius value = data.cochain[i] * conjugate(data.group[s], data.cochain[j]) * data.phi(st).inverse();
      int k = aut.index_of(value);
      if (k < 0 || !(d.image(value) == d))
        throw Error(ErrorCode::InternalInconsistency, "cocycle value does not stabilize the divisor");
      c.values[i][j] = k;
    }
  return c;
}

// ---------------------------------------------------------------------------
// Quotient map and ramification

ProjPoint QuotientMap::operator()(const ProjPoint& p) const { return ProjPoint(f0(p), f1(p)); }

QuotientMap quotient_map(const AutGroup& g) {
  const FieldTower& t = g[0].tower();
  auto candidates = small_rational_points(t);
  std::optional<ProjPoint> alpha;
  std::vector<ProjPoint> alpha_orbit;
  for (const auto& p : candidates) {
    if (!alpha) {
      alpha = p;
      for (const auto& m : g.elements()) alpha_orbit.push_back(m(p));
      continue;
    }
    if (std::find(alpha_orbit.begin(), alpha_orbit.end(), p) != alpha_orbit.end()) continue;
    return QuotientMap{orbit_form(g, *alpha), orbit_form(g, p)};
  }
  throw Error(ErrorCode::InternalInconsistency, "no second orbit among small rational points");
}

bool RamificationLedger::satisfies_riemann_hurwitz() const {
  int sum = 0;
  for (const auto& e : entries) sum += e.different * e.residue_degree;
  return sum == 2 * covering_degree - 2;
}

bool RamificationLedger::tame() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.different == e.index - 1; });
}

RamificationLedger quotient_ramification(int m) {
  if (m < 2) throw Error(ErrorCode::InputError, "quotient_ramification needs m >= 2");
  FieldTower q;
  ProjPoint zero = ProjPoint::affine(FieldElem(q)), inf = ProjPoint::infinity(q);
  RamificationLedger out;
  out.covering_degree = m;
  out.entries = {{zero, m, m - 1, 1}, {inf, m, m - 1, 1}};
  out.branch_points = {zero, inf};
  return out;
}

RamificationLedger ramification_ledger(const QuotientMap& q, const AutGroup& g) {
  if (!g.classification().is_cyclic()) throw Error(ErrorCode::NonCyclicAut, "ramification ledger needs a cyclic group");
  RamificationLedger out;
  out.covering_degree = q.degree();
  auto gen = g.generator();
  check(gen.has_value(), "cyclic group without a generator");
  if (g.size() == 1) return out;

  BinaryForm wronskian = q.f0.derivative_x() * q.f1.derivative_y() - q.f0.derivative_y() * q.f1.derivative_x();
  FixedPoints fixed = fixed_points(g[*gen]);
  BinaryForm w = wronskian.embed(fixed.tower);
  QuotientMap qe{q.f0.embed(fixed.tower), q.f1.embed(fixed.tower)};
  const bool conjugate_pair = fixed.tower.level() > g[0].tower().level();
  int total = 0;
  for (const auto& p : fixed.points) {
    int mult = vanishing_order(w, p);
    total += mult;
    if (!conjugate_pair || out.entries.empty()) out.entries.push_back({p, mult + 1, mult, conjugate_pair ? 2 : 1});
    out.branch_points.push_back(qe(p));
  }
  check(total == w.degree(), "Wronskian has roots away from the fixed points");
  return out;
}

// ---------------------------------------------------------------------------
// Compression

Compression compression(const Divisor& d, const ModuliData& data, const AutGroup& aut) {
  if (!aut.classification().is_cyclic()) throw Error(ErrorCode::NonCyclicAut, "compression is computed for cyclic groups");
  const FieldTower& t = d.tower();
  const FieldElem zero(t);
  Compression out{quotient_map(aut), {}, {}, {}, {}, {}, std::nullopt};
  const QuotientMap& q = out.quotient;
  const std::size_t h = data.subgroup.size();
  const int m = q.degree();

  for (std::size_t k = 0; k < h; ++k) {
    const GaloisAut& sigma = data.group[data.subgroup[k]];
    const Mobius& phi = data.cochain[k];
    BinaryForm s0 = conjugate(sigma, q.f0), s1 = conjugate(sigma, q.f1);
    Matrix a(m + 1, 2, zero);
    for (int r = 0; r <= m; ++r) {
      a(r, 0) = s0.coeffs()[r];
      a(r, 1) = s1.coeffs()[r];
    }
    auto x0 = solve(a, q.f0.substitute(phi).coeffs());
    auto x1 = solve(a, q.f1.substitute(phi).coeffs());
    if (!x0 || !x1) throw Error(ErrorCode::DescentFailure, "twisted quotient forms leave the invariant pencil");
    Matrix n(2, 2, zero);
    n(0, 0) = (*x0)[0];
    n(0, 1) = (*x0)[1];
    n(1, 0) = (*x1)[0];
    n(1, 1) = (*x1)[1];
    if ((n(0, 0) * n(1, 1) - n(0, 1) * n(1, 0)).is_zero())
      throw Error(ErrorCode::DescentFailure, "singular induced map on the quotient line");
    out.target_cocycle.push_back(n);
    out.veronese_cocycle.push_back(symmetric_square(n));
  }

  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      int s = data.subgroup[i], tt = data.subgroup[j];
      int st = data.position(data.group.multiply(s, tt));
      const GaloisAut& sigma = data.group[s];
      if (!proportional(out.target_cocycle[i] * conjugate_matrix(sigma, out.target_cocycle[j]), out.target_cocycle[st]))
        throw Error(ErrorCode::DescentFailure, "induced maps on the quotient fail the cocycle identity");
      if (!(out.veronese_cocycle[i] * conjugate_matrix(sigma, out.veronese_cocycle[j]) == out.veronese_cocycle[st]))
        throw Error(ErrorCode::DescentFailure, "symmetric-square lift is not an exact cocycle");
    }

  // H-fixed vectors: averages of e_i times tower basis elements
  Matrix basis(3, 0, zero);
  std::vector<std::array<FieldElem, 3>> fixed;
  for (std::size_t b = 0; b < t.degree() && fixed.size() < 3; ++b)
    for (int i = 0; i < 3 && fixed.size() < 3; ++i) {
      std::array<FieldElem, 3> v{zero, zero, zero};
      for (std::size_t k = 0; k < h; ++k) {
        FieldElem coeff = data.group[data.subgroup[k]].apply(FieldElem::basis(t, b));
        for (int r = 0; r < 3; ++r) v[r] += out.veronese_cocycle[k](r, i) * coeff;
      }
      Matrix trial(3, fixed.size() + 1, zero);
      for (std::size_t c = 0; c < fixed.size(); ++c)
        for (int r = 0; r < 3; ++r) trial(r, c) = fixed[c][r];
      for (int r = 0; r < 3; ++r) trial(r, fixed.size()) = v[r];
      if (rank(trial) == fixed.size() + 1) fixed.push_back(v);
    }
  if (fixed.size() != 3) throw Error(ErrorCode::DescentFailure, "fixed space of the twisted action is too small");
  out.basis = Matrix(3, 3, zero);
  for (int c = 0; c < 3; ++c)
    for (int r = 0; r < 3; ++r) out.basis(r, c) = fixed[c][r];
  auto inv = inverse(out.basis);
  check(inv.has_value(), "independent fixed vectors form a singular matrix");
  out.basis_inverse = *inv;

  // W^T A W with A the matrix of y0 y2 - y1^2
  Matrix a(3, 3, zero);
  a(0, 2) = a(2, 0) = FieldElem(t, Rational(1, 2));
  a(1, 1) = FieldElem(t, -1L);
  Matrix g = out.basis.transpose() * a * out.basis;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      auto x = data.fom.pull_back(g(i, j));
      if (!x) throw Error(ErrorCode::DescentFailure, "descended conic has coefficients outside the field of moduli");
      out.gram[i][j] = *x;
    }

  if (data.fom_is_rationals()) {
    Integer den = 1, num = 0;
    for (const auto& row : out.gram)
      for (const auto& x : row) {
        const Rational& v = x.rational_value();
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
        mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), v.get_num_mpz_t());
      }
    TernaryForm f;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) f.gram[i][j] = out.gram[i][j].rational_value() * Rational(den) / Rational(num);
    check(f.determinant() != 0, "descended conic is singular");
    out.form = f;
  }
  return out;
}

bool CompressedDivisor::all_degrees_even() const {
  return std::all_of(orbit_images.begin(), orbit_images.end(), [](const auto& p) { return p.degree % 2 == 0; });
}

CompressedDivisor compressed_divisor(const Divisor& d, const ModuliData& data, const Compression& c) {
  std::vector<std::array<FieldElem, 3>> images;
  for (const auto& x : d.points()) {
    auto z = normalize(mat_vec(c.basis_inverse, veronese(c.quotient(x))));
    if (std::find(images.begin(), images.end(), z) == images.end()) images.push_back(z);
  }
  CompressedDivisor out;
  out.geometric_points = images.size();
  std::vector<bool> seen(images.size(), false);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (seen[i]) continue;
    std::vector<std::array<FieldElem, 3>> orbit;
    for (int s : data.subgroup) {
      const GaloisAut& sigma = data.group[s];
      auto z = normalize({sigma.apply(images[i][0]), sigma.apply(images[i][1]), sigma.apply(images[i][2])});
      if (std::find(orbit.begin(), orbit.end(), z) != orbit.end()) continue;
      auto it = std::find(images.begin(), images.end(), z);
      check(it != images.end(), "Galois conjugate of a compressed point is not an image point");
      seen[it - images.begin()] = true;
      orbit.push_back(z);
    }
    out.orbit_images.push_back({images[i], static_cast<int>(orbit.size())});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quaternion decomposition

namespace {

// Gaussian elimination over GF(2); rows carry the right-hand side in the last bit.
using Row = std::vector<std::uint8_t>;

std::optional<std::vector<std::uint8_t>> solve_gf2(std::vector<Row> rows, std::size_t unknowns) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t col = 0; col < unknowns && r < rows.size(); ++col) {
    std::size_t p = r;
    while (p < rows.size() && !rows[p][col]) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[r]);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != r && rows[i][col])
        for (std::size_t j = col; j <= unknowns; ++j) rows[i][j] ^= rows[r][j];
    pivots.push_back(col);
    ++r;
  }
  for (std::size_t i = r; i < rows.size(); ++i)
    if (rows[i][unknowns]) return std::nullopt;
  std::vector<std::uint8_t> x(unknowns, 0);
  for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = rows[i][unknowns];
  return x;
}

}  // namespace

std::vector<QuaternionSymbol> cocycle_class_to_quaternion(const Cocycle& c, const ModuliData& data,
                                                          const AutGroup& aut) {
  if (aut.size() > 2) throw Error(ErrorCode::UnsupportedAut, "quaternion decomposition needs Aut of order at most 2");
  if (!data.fom_is_rationals())
    throw Error(ErrorCode::HypothesesNotMet, "quaternion decomposition needs field of moduli Q");
  if (aut.size() == 1) return {};
  const FieldTower& t = data.group.tower();
  const int r = t.level();
  std::vector<Integer> d(r);
  for (int i = 0; i < r; ++i) {
    const auto& coords = t.radicand_coords(i);
    for (std::size_t k = 1; k < coords.size(); ++k)
      if (sgn(coords[k]) != 0)
        throw Error(ErrorCode::NonElementaryGaloisQuotient, "tower is not generated by square roots of rationals");
    check(is_integer(coords[0]), "rational radicands are stored as integers");
    d[i] = coords[0].get_num();
  }
  const std::size_t h = c.subgroup.size();
  if (h != (std::size_t{1} << r))
    throw Error(ErrorCode::NonElementaryGaloisQuotient, "Galois group is not elementary abelian of full rank");

  // exponent vector of each element: bit i set when the i-th root changes sign
  std::vector<std::vector<std::uint8_t>> e(h, std::vector<std::uint8_t>(r, 0));
  for (std::size_t k = 0; k < h; ++k) {
    const GaloisAut& sigma = data.group[c.subgroup[k]];
    for (int i = 0; i < r; ++i) {
      FieldElem root = FieldElem::root(t, i);
      FieldElem image = sigma.apply(root);
      if (image == -root)
        e[k][i] = 1;
      else if (!(image == root))
        throw Error(ErrorCode::NonElementaryGaloisQuotient, "Galois element does not act by signs on the roots");
    }
  }

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < r; ++i)
    for (int j = i; j < r; ++j) pairs.emplace_back(i, j);
  const std::size_t unknowns = pairs.size() + h;
  std::vector<Row> rows;
  for (std::size_t s = 0; s < h; ++s)
    for (std::size_t tt = 0; tt < h; ++tt) {
      Row row(unknowns + 1, 0);
      for (std::size_t p = 0; p < pairs.size(); ++p) row[p] = e[s][pairs[p].first] & e[tt][pairs[p].second];
      int st = data.position(data.group.multiply(c.subgroup[s], c.subgroup[tt]));
      row[pairs.size() + s] ^= 1;
      row[pairs.size() + tt] ^= 1;
      row[pairs.size() + st] ^= 1;
      row[unknowns] = c.values[s][tt] != aut.identity();
      rows.push_back(std::move(row));
    }
  auto x = solve_gf2(std::move(rows), unknowns);
  check(x.has_value(), "cocycle is not a sum of cup products and a coboundary");

  std::vector<QuaternionSymbol> out;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (!(*x)[p]) continue;
    auto [i, j] = pairs[p];
    out.push_back(i == j ? QuaternionSymbol{d[i], Integer(-1)} : QuaternionSymbol{d[i], d[j]});
  }
  return out;
}

int symbol_product(const std::vector<QuaternionSymbol>& symbols, const Place& v) {
  int s = 1;
  for (const auto& q : symbols) s *= hilbert_symbol(Rational(q.a), Rational(q.b), v);
  return s;
}

}  // namespace descent
