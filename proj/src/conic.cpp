#include "descent/conic.hpp"

#include <algorithm>
#include <set>

#include "descent/errors.hpp"

namespace descent {

// ---------------------------------------------------------------------------
// TernaryForm

TernaryForm TernaryForm::diagonal(const Rational& a, const Rational& b, const Rational& c) {
  TernaryForm f;
  f.gram[0][0] = a;
  f.gram[1][1] = b;
  f.gram[2][2] = c;
  return f;
}

TernaryForm TernaryForm::from_upper(const std::array<Rational, 6>& u) {
  TernaryForm f;
  f.gram[0][0] = u[0];
  f.gram[0][1] = f.gram[1][0] = u[1];
  f.gram[0][2] = f.gram[2][0] = u[2];
  f.gram[1][1] = u[3];
  f.gram[1][2] = f.gram[2][1] = u[4];
  f.gram[2][2] = u[5];
  return f;
}

Rational TernaryForm::operator()(const std::array<Rational, 3>& v) const { return bilinear(v, v); }

Rational TernaryForm::bilinear(const std::array<Rational, 3>& u, const std::array<Rational, 3>& v) const {
  Rational acc = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += gram[i][j] * u[i] * v[j];
  return acc;
}

Rational TernaryForm::determinant() const {
  const auto& g = gram;
  Rational det = g[0][0] * (g[1][1] * g[2][2] - g[1][2] * g[2][1]) - g[0][1] * (g[1][0] * g[2][2] - g[1][2] * g[2][0]) +
                 g[0][2] * (g[1][0] * g[2][1] - g[1][1] * g[2][0]);
  return det;
}

std::array<Rational, 6> TernaryForm::upper() const {
  return {gram[0][0], gram[0][1], gram[0][2], gram[1][1], gram[1][2], gram[2][2]};
}

// ---------------------------------------------------------------------------
// Diagonalization

namespace {

DenseMatrix<Rational> gram_matrix(const TernaryForm& f) {
  DenseMatrix<Rational> g(3, 3, Rational(0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = f.gram[i][j];
  return g;
}

void add_column(DenseMatrix<Rational>& p, std::size_t dst, std::size_t src, const Rational& factor) {
  for (std::size_t i = 0; i < p.rows(); ++i) p(i, dst) += factor * p(i, src);
}

}  // namespace

Diagonalization diagonalize(const TernaryForm& f, const FactorConfig& config) {
  if (sgn(f.determinant()) == 0) throw Error(ErrorCode::SingularForm, "singular ternary form");
  DenseMatrix<Rational> g = gram_matrix(f);
  DenseMatrix<Rational> p(3, 3, Rational(0));
  for (int i = 0; i < 3; ++i) p(i, i) = 1;
  for (std::size_t k = 0; k < 3; ++k) {
    DenseMatrix<Rational> m = p.transpose() * g * p;
    if (sgn(m(k, k)) == 0) {
      std::size_t j = k + 1;
      while (j < 3 && sgn(m(j, j)) == 0) ++j;
      if (j < 3) {
        for (std::size_t i = 0; i < 3; ++i) std::swap(p(i, k), p(i, j));
      } else {
        j = k + 1;
        while (j < 3 && sgn(m(k, j)) == 0) ++j;
        check(j < 3, "nonsingular form reduced to a zero row");
        add_column(p, k, j, Rational(1));
      }
      m = p.transpose() * g * p;
    }
    for (std::size_t j = k + 1; j < 3; ++j)
      if (sgn(m(k, j)) != 0) add_column(p, j, k, Rational(-m(k, j) / m(k, k)));
  }
  DenseMatrix<Rational> m = p.transpose() * g * p;
  Diagonalization out{{}, p};
  for (std::size_t k = 0; k < 3; ++k) {
    auto dec = squarefree_decompose(m(k, k), config);
    out.coeffs[k] = dec.core;
    for (std::size_t i = 0; i < 3; ++i) out.basis(i, k) /= dec.scale;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Hilbert symbols

std::string Place::to_string() const { return is_infinite() ? "inf" : prime.get_str(); }

namespace {

// Square class representative: num * den.
Integer square_class(const Rational& q) { return q.get_num() * q.get_den(); }

unsigned long valuation(Integer& n, const Integer& p) {
  unsigned long v = 0;
  while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
    n /= p;
    ++v;
  }
  return v;
}

int legendre(const Integer& a, const Integer& p) { return mpz_legendre(a.get_mpz_t(), p.get_mpz_t()); }

unsigned long mod_small(const Integer& n, unsigned long m) { return mpz_fdiv_ui(n.get_mpz_t(), m); }

}  // namespace

int hilbert_symbol(const Rational& a_in, const Rational& b_in, const Place& v) {
  if (sgn(a_in) == 0 || sgn(b_in) == 0) throw Error(ErrorCode::InputError, "Hilbert symbol of zero");
  Integer a = square_class(a_in), b = square_class(b_in);
  if (v.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
  const Integer& p = v.prime;
  unsigned long alpha = valuation(a, p), beta = valuation(b, p);
  if (p == 2) {
    unsigned long u4 = mod_small(a, 4), w4 = mod_small(b, 4);
    unsigned long u8 = mod_small(a, 8), w8 = mod_small(b, 8);
    int eps_u = u4 == 3, eps_w = w4 == 3;
    int omega_u = (u8 == 3 || u8 == 5), omega_w = (w8 == 3 || w8 == 5);
    int e = (eps_u * eps_w + static_cast<int>(alpha % 2) * omega_w + static_cast<int>(beta % 2) * omega_u) % 2;
    return e ? -1 : 1;
  }
  int s = 1;
  if ((alpha * beta) % 2 == 1 && mod_small(p, 4) == 3) s = -s;
  if (beta % 2 == 1) s *= legendre(a, p);
  if (alpha % 2 == 1) s *= legendre(b, p);
  return s;
}

std::vector<Place> relevant_places(const std::vector<Rational>& values, const FactorConfig& config) {
  std::set<Integer> primes{Integer(2)};
  for (const auto& q : values)
    for (const Integer* part : {&q.get_num(), &q.get_den()}) {
      if (*part == 0) continue;
      for (const auto& [p, e] : factorize(*part, config)) primes.insert(p);
    }
  std::vector<Place> out{Place{0}};
  for (const auto& p : primes) out.push_back(Place{p});
  return out;
}

HasseResult hasse_solvable(const TernaryForm& f, const FactorConfig& config) {
  Diagonalization d = diagonalize(f, config);
  const auto& [a, b, c] = d.coeffs;
  Rational big_a(Integer(-a * c)), big_b(Integer(-b * c));
  HasseResult out{true, d.coeffs, {}, {}};
  int product = 1;
  for (const auto& place : relevant_places({Rational(a), Rational(b), Rational(c)}, config)) {
    int s = hilbert_symbol(big_a, big_b, place);
    out.evaluations.push_back({place, s});
    if (s < 0) out.failing.push_back({place, s});
    product *= s;
  }
  check(product == 1, "Hilbert reciprocity violated");
  out.solvable = out.failing.empty();
  return out;
}

// ---------------------------------------------------------------------------
// Legendre descent

namespace {

std::optional<Integer> sqrt_mod_prime(const Integer& a_in, const Integer& p) {
  Integer a = a_in % p;
  if (a < 0) a += p;
  if (a == 0) return Integer(0);
  if (p == 2) return a;
  if (legendre(a, p) != 1) return std::nullopt;
  // Tonelli-Shanks
  Integer q = p - 1;
  unsigned long s = 0;
  while (mpz_even_p(q.get_mpz_t())) {
    q /= 2;
    ++s;
  }
  Integer z = 2;
  while (legendre(z, p) != -1) ++z;
  auto powm = [&](const Integer& base, const Integer& e) {
    Integer r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), p.get_mpz_t());
    return r;
  };
  Integer c = powm(z, q), x = powm(a, (q + 1) / 2), t = powm(a, q);
  unsigned long m = s;
  while (t != 1) {
    unsigned long i = 0;
    Integer tt = t;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    Integer b = c;
    for (unsigned long j = 0; j + i + 1 < m; ++j) b = b * b % p;
    x = x * b % p;
    c = b * b % p;
    t = t * c % p;
    m = i;
  }
  return x;
}

// A root of t^2 = a modulo the squarefree modulus n > 0.
std::optional<Integer> sqrt_mod_squarefree(const Integer& a, const Integer& n, const FactorConfig& config) {
  if (n == 1) return Integer(0);
  Integer root = 0, modulus = 1;
  for (const auto& [p, e] : factorize(n, config)) {
    auto r = sqrt_mod_prime(a, p);
    if (!r) return std::nullopt;
    // CRT: root ≡ root (mod modulus), root ≡ r (mod p)
    Integer inv;
    mpz_invert(inv.get_mpz_t(), modulus.get_mpz_t(), p.get_mpz_t());
    Integer k = ((*r - root) % p + p) % p * inv % p;
    root += modulus * k;
    modulus *= p;
  }
  return root;
}

std::array<Integer, 3> primitive(std::array<Integer, 3> v) {
  Integer g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

std::optional<std::array<Integer, 3>> legendre_descent(const Integer& a, const Integer& b, const FactorConfig& config,
                                                       int depth) {
  if (depth > 500) return std::nullopt;
  if (a == 1) return std::array<Integer, 3>{1, 0, 1};
  if (b == 1) return std::array<Integer, 3>{0, 1, 1};
  if (a == -b) return std::array<Integer, 3>{1, 1, 0};
  if (a < 0 && b < 0) return std::nullopt;
  if (abs(a) > abs(b)) {
    auto r = legendre_descent(b, a, config, depth + 1);
    if (!r) return std::nullopt;
    return std::array<Integer, 3>{(*r)[1], (*r)[0], (*r)[2]};
  }
  const Integer n = abs(b);
  auto t = sqrt_mod_squarefree(a, n, config);
  if (!t) return std::nullopt;
  Integer tt = *t % n;
  if (2 * tt > n) tt -= n;
  Integer k = (tt * tt - a) / b;
  if (k == 0) return std::nullopt;
  auto dec = squarefree_decompose(Rational(k), config);
  Integer s = dec.scale.get_num();
  auto r = legendre_descent(a, dec.core, config, depth + 1);
  if (!r) return std::nullopt;
  const auto& [x1, y1, z1] = *r;
  return primitive({z1 + tt * x1, dec.core * s * y1, z1 * tt + a * x1});
}

std::optional<std::array<Integer, 3>> legendre_search(const Integer& a, const Integer& b, long bound) {
  for (long h = 1; h <= bound; ++h)
    for (long x = 0; x <= h; ++x) {
      long y = h - x;
      Integer rhs = a * x * x + b * y * y;
      if (auto z = integer_sqrt_exact(rhs)) return primitive({Integer(x), Integer(y), *z});
    }
  return std::nullopt;
}

}  // namespace

std::optional<std::array<Integer, 3>> solve_legendre(const Integer& a, const Integer& b, const FactorConfig& config) {
  if (a == 0 || b == 0) throw Error(ErrorCode::InputError, "Legendre equation with a zero coefficient");
  if (auto r = legendre_descent(a, b, config, 0)) {
    const auto& [x, y, z] = *r;
    check(z * z == a * x * x + b * y * y, "Legendre descent produced a non-solution");
    return r;
  }
  return legendre_search(a, b, 400);
}

std::optional<ConicPoint> find_point(const TernaryForm& f, const FactorConfig& config) {
  HasseResult h = hasse_solvable(f, config);
  if (!h.solvable) return std::nullopt;
  Diagonalization d = diagonalize(f, config);
  const auto& [a, b, c] = d.coeffs;
  auto da = squarefree_decompose(Rational(Integer(-a * c)), config);
  auto db = squarefree_decompose(Rational(Integer(-b * c)), config);
  auto sol = solve_legendre(da.core, db.core, config);
  if (!sol) throw Error(ErrorCode::SearchExhausted, "no point found on a locally solvable conic");
  std::vector<Rational> diag_point{Rational((*sol)[0]) / da.scale, Rational((*sol)[1]) / db.scale,
                                   Rational((*sol)[2]) / Rational(c)};
  std::vector<Rational> v = d.basis * diag_point;
  // clear denominators and content
  Integer den = 1;
  for (const auto& q : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
  std::array<Integer, 3> iv;
  for (int i = 0; i < 3; ++i) {
    Rational scaled = v[i] * den;
    iv[i] = scaled.get_num();
  }
  iv = primitive(iv);
  ConicPoint out{Rational(iv[0]), Rational(iv[1]), Rational(iv[2])};
  check(sgn(f(out)) == 0, "found point is not on the conic");
  return out;
}

QuadraticMap<Rational> parametrize(const TernaryForm& f, const ConicPoint& p) {
  if (sgn(f(p)) != 0) throw Error(ErrorCode::PointNotOnConic, "parametrization point is not on the conic");
  int k = 0;
  while (sgn(p[k]) == 0) ++k;
  std::array<Rational, 3> u{}, w{};
  u[(k + 1) % 3] = 1;
  w[(k + 2) % 3] = 1;
  return residual_parametrization(f.gram, p, u, w);
}

}  // namespace descent
