#include <cstdlib>

#include "descent/conic.hpp"
#include "descent/errors.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace descent;
using testing::rat;

namespace {

// ax^2 + by^2 = z^2 has a primitive solution modulo m.
bool primitive_solution_mod(long a, long b, long m, long p) {
  for (long x = 0; x < m; ++x)
    for (long y = 0; y < m; ++y)
      for (long z = 0; z < m; ++z) {
        if (x % p == 0 && y % p == 0 && z % p == 0) continue;
        long v = ((a * x * x + b * y * y - z * z) % m + m) % m;
        if (v == 0) return true;
      }
  return false;
}

// Rational point on ax^2 + by^2 + cz^2 = 0 inside a box.
bool point_in_box(long a, long b, long c, long bound) {
  for (long x = 0; x <= bound; ++x)
    for (long y = -bound; y <= bound; ++y)
      for (long z = -bound; z <= bound; ++z) {
        if (x == 0 && y == 0 && z == 0) continue;
        if (a * x * x + b * y * y + c * z * z == 0) return true;
      }
  return false;
}

long squarefree_small(std::mt19937_64& rng, long bound) {
  std::uniform_int_distribution<long> dist(-bound, bound);
  for (;;) {
    long v = dist(rng);
    if (v == 0) continue;
    bool sf = true;
    for (long d = 2; d * d <= std::labs(v); ++d)
      if (v % (d * d) == 0) sf = false;
    if (sf) return v;
  }
}

std::vector<int> failing_primes(const HasseResult& h) {
  std::vector<int> out;
  for (const auto& e : h.failing) out.push_back(e.place.is_infinite() ? 0 : static_cast<int>(e.place.prime.get_si()));
  return out;
}

}  // namespace

TEST_CASE("sum of three squares fails at infinity and 2") {
  auto h = hasse_solvable(TernaryForm::diagonal(1, 1, 1));
  CHECK_FALSE(h.solvable);
  CHECK(failing_primes(h) == std::vector<int>{0, 2});
  CHECK(h.diagonal == std::array<Integer, 3>{1, 1, 1});
  CHECK_FALSE(find_point(TernaryForm::diagonal(1, 1, 1)).has_value());
}

TEST_CASE("x^2 + y^2 - 3z^2 fails at 2 and 3") {
  auto h = hasse_solvable(TernaryForm::diagonal(1, 1, -3));
  CHECK_FALSE(h.solvable);
  CHECK(failing_primes(h) == std::vector<int>{2, 3});
}

TEST_CASE("points on solvable conics") {
  for (long c : {-2L, -5L, -13L, -65L}) {
    TernaryForm f = TernaryForm::diagonal(1, 1, c);
    auto p = find_point(f);
    REQUIRE(p.has_value());
    CHECK(f(*p) == 0);
  }
  TernaryForm g = TernaryForm::from_upper({rat(3), rat(1), rat(-2), rat(5), rat(0), rat(-7)});
  auto h = hasse_solvable(g);
  auto p = find_point(g);
  CHECK(h.solvable == p.has_value());
  if (p) CHECK(g(*p) == 0);
}

TEST_CASE("diagonalization scales to squarefree integers") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    std::array<Rational, 6> u;
    for (auto& x : u) x = testing::random_rational(rng, 6, 3);
    TernaryForm f = TernaryForm::from_upper(u);
    if (f.determinant() == 0) continue;
    auto d = diagonalize(f);
    DenseMatrix<Rational> g(3, 3, Rational(0));
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) g(r, c) = f.gram[r][c];
    DenseMatrix<Rational> m = d.basis.transpose() * g * d.basis;
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t c = 0; c < 3; ++c) CHECK(m(r, c) == (r == c ? Rational(d.coeffs[r]) : Rational(0)));
  }
  CHECK_THROWS_AS(diagonalize(TernaryForm::diagonal(1, 1, 0)), Error);
}

TEST_CASE("Hilbert symbols at odd primes match a mod p^2 search") {
  for (long p : {3L, 5L, 7L, 11L})
    for (long a : {1L, -1L, 2L, 3L, -3L, 5L, 6L, -7L, 10L, 11L})
      for (long b : {1L, -1L, 2L, 3L, 5L, -5L, 7L, 14L, -11L}) {
        bool solvable = primitive_solution_mod(a, b, p * p, p);
        CHECK(hilbert_symbol(Rational(a), Rational(b), Place{p}) == (solvable ? 1 : -1));
      }
}

TEST_CASE("Hilbert symbols at 2 match a mod 64 search") {
  const long units[] = {1, 3, 5, 7, -1, -3, 2, 6, 10, 14, -2, -6};
  for (long a : units)
    for (long b : units) {
      bool solvable = primitive_solution_mod(a, b, 64, 2);
      CHECK(hilbert_symbol(Rational(a), Rational(b), Place{2}) == (solvable ? 1 : -1));
    }
}

TEST_CASE("Hilbert symbol properties") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 500; ++i) {
    Rational a = testing::random_rational(rng, 60, 12), b = testing::random_rational(rng, 60, 12);
    if (a == 0 || b == 0) continue;
    int product = 1;
    for (const auto& v : relevant_places({a, b})) {
      int s = hilbert_symbol(a, b, v);
      CHECK(s == hilbert_symbol(b, a, v));
      CHECK(hilbert_symbol(a, -a, v) == 1);
      CHECK(hilbert_symbol(a, a * a * b, v) == s);
      Rational c = testing::random_rational(rng, 20, 5);
      if (c != 0) CHECK(hilbert_symbol(a, b * c, v) == s * hilbert_symbol(a, c, v));
      product *= s;
    }
    CHECK(product == 1);
  }
}

TEST_CASE("local-global test agrees with a bounded point search") {
  // coefficients up to 10 in absolute value: a solvable conic has a point in a box of radius 10
  std::mt19937_64 rng(77);
  int solvable_count = 0;
  for (int i = 0; i < 100; ++i) {
    long a = squarefree_small(rng, 10), b = squarefree_small(rng, 10), c = squarefree_small(rng, 10);
    bool found = point_in_box(a, b, c, 10);
    auto h = hasse_solvable(TernaryForm::diagonal(a, b, c));
    CHECK_MESSAGE(h.solvable == found, a << " " << b << " " << c);
    solvable_count += found;
    auto p = find_point(TernaryForm::diagonal(a, b, c));
    CHECK(p.has_value() == found);
  }
  CHECK(solvable_count > 10);
  CHECK(solvable_count < 90);
}

TEST_CASE("Legendre equations with larger coefficients") {
  std::mt19937_64 rng(3);
  int solved = 0;
  for (int i = 0; i < 400; ++i) {
    long a = squarefree_small(rng, 2000), b = squarefree_small(rng, 2000);
    TernaryForm f = TernaryForm::diagonal(a, b, -1);
    auto h = hasse_solvable(f);
    if (!h.solvable) continue;
    auto s = solve_legendre(Integer(a), Integer(b));
    REQUIRE(s.has_value());
    const auto& [x, y, z] = *s;
    CHECK(z * z == a * x * x + b * y * y);
    CHECK_FALSE((x == 0 && y == 0 && z == 0));
    ++solved;
  }
  CHECK(solved > 8);
}

TEST_CASE("parametrization lands on the conic and covers it") {
  std::mt19937_64 rng(9);
  int checked = 0;
  for (int i = 0; i < 60 && checked < 25; ++i) {
    std::array<Rational, 6> u;
    for (auto& x : u) x = testing::random_rational(rng, 5, 2);
    TernaryForm f = TernaryForm::from_upper(u);
    if (f.determinant() == 0) continue;
    auto p = find_point(f);
    if (!p) continue;
    auto map = parametrize(f, *p);
    for (int s = -3; s <= 3; ++s)
      for (int t = -3; t <= 3; ++t) CHECK(f(map(Rational(s), Rational(t))) == 0);
    // some parameter value maps to a point other than p
    auto image = map(Rational(1), Rational(2));
    bool nonzero = image[0] != 0 || image[1] != 0 || image[2] != 0;
    CHECK(nonzero);
    ++checked;
  }
  CHECK(checked >= 10);
  CHECK_THROWS_AS(parametrize(TernaryForm::diagonal(1, 1, -2), {rat(1), rat(0), rat(0)}), Error);
}
