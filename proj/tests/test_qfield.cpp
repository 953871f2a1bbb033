#include <algorithm>
#include <set>

#include "descent/errors.hpp"
#include "descent/factor.hpp"
#include "descent/qfield.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace descent;
using testing::multiquadratic;
using testing::numeric_value;

namespace {

constexpr long double kTol = 1e-9L;

FieldElem sqrt2(const FieldTower& t) { return FieldElem::root(t, 0); }

}  // namespace

TEST_CASE("rational parsing") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational("-7") == Rational(-7));
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
  CHECK_THROWS_AS(parse_rational("x"), Error);
  CHECK(to_string(parse_rational("-3/9")) == "-1/3");
}

TEST_CASE("squarefree decomposition and factoring") {
  auto d = squarefree_decompose(Rational(-72, 5));
  CHECK(d.core == -10);
  CHECK(d.scale == Rational(6, 5));
  CHECK(d.core * d.scale * d.scale == Rational(-72, 5));

  Integer n = Integer("1000003") * Integer("1000033") * 12;
  Integer product = 1;
  for (auto& [p, e] : factorize(n)) {
    CHECK(is_probable_prime(p));
    for (unsigned i = 0; i < e; ++i) product *= p;
  }
  CHECK(product == n);
}

TEST_CASE("tower_extend") {
  auto r = tower_extend(FieldTower(), Rational(2));
  CHECK(r.extended);
  CHECK(r.tower.level() == 1);
  CHECK(r.tower.degree() == 2);

  auto again = tower_extend(r.tower, Rational(2));
  CHECK_FALSE(again.extended);
  CHECK(again.tower == r.tower);
  CHECK(again.root * again.root == 2);

  // 12 is stored as 3 with the root scaled by 2
  auto twelve = tower_extend(FieldTower(), Rational(12));
  CHECK(twelve.tower.radicand_coords(0)[0] == 3);
  CHECK(twelve.root * twelve.root == 12);

  FieldTower t = multiquadratic({2, 3});
  FieldElem s6 = FieldElem::root(t, 0) * FieldElem::root(t, 1);
  auto six = sqrt_in_field(FieldElem(t, Rational(6)));
  REQUIRE(six.has_value());
  CHECK(*six == s6);

  CHECK_THROWS_AS(tower_extend(t, Rational(0)), Error);
}

TEST_CASE("field arithmetic examples") {
  FieldTower t = multiquadratic({2});
  FieldElem a = sqrt2(t) + 1, b = sqrt2(t) - 1;
  CHECK((a * b).is_one());
  CHECK(FieldElem(t, Rational(1)) / a == b);
  CHECK_THROWS_AS(a / FieldElem(t), Error);
}

TEST_CASE("mixed towers promote to the larger one") {
  FieldTower t1 = multiquadratic({2});
  FieldTower t2 = descent::tower_extend(t1, Rational(3)).tower;
  FieldElem x = sqrt2(t1) + FieldElem::root(t2, 1);
  CHECK(x.tower() == t2);
  FieldTower other = multiquadratic({5});
  CHECK_THROWS_AS(sqrt2(t1) + FieldElem::root(other, 0), Error);
}

TEST_CASE("arithmetic agrees with the real embedding") {
  std::mt19937_64 rng(11);
  FieldTower t = multiquadratic({2, 3, 5});
  // a non-multiquadratic real step on top
  t = tower_extend(t, FieldElem::root(t, 0) + 2).tower;
  REQUIRE(t.is_real());
  for (int i = 0; i < 60; ++i) {
    FieldElem a = testing::random_elem(rng, t), b = testing::random_nonzero(rng, t);
    long double na = numeric_value(a), nb = numeric_value(b);
    long double scale = 1 + std::fabs(na * nb) + std::fabs(na / nb);
    CHECK(std::fabs(numeric_value(a * b) - na * nb) < kTol * scale);
    CHECK(std::fabs(numeric_value(a / b) - na / nb) < kTol * scale);
    CHECK(std::fabs(numeric_value(a - b) - (na - nb)) < kTol * scale);
    CHECK((a * b) / b == a);
    if (std::fabs(na) > 1e-6) CHECK(a.sign() == (na > 0 ? 1 : -1));
  }
}

TEST_CASE("sqrt_in_field") {
  CHECK(*sqrt_in_field(FieldElem(FieldTower(), Rational(4))) == 2);
  FieldTower t2 = multiquadratic({2});
  CHECK_FALSE(sqrt_in_field(FieldElem(t2, Rational(5))).has_value());

  std::mt19937_64 rng(5);
  FieldTower t = multiquadratic({2, 3});
  t = tower_extend(t, FieldElem::root(t, 1) + 5).tower;
  FieldTower complex_tower = multiquadratic({-1, 3});
  for (const FieldTower* tw : {&t, &complex_tower}) {
    for (int i = 0; i < 30; ++i) {
      FieldElem r = testing::random_elem(rng, *tw);
      auto s = sqrt_in_field(r * r);
      REQUIRE(s.has_value());
      CHECK(*s * *s == r * r);
      CHECK((*s == r || *s == -r));
      if (tw->is_real()) CHECK(numeric_value(*s) >= 0);
    }
  }
  // a nonsquare of the top step: its own radicand
  FieldElem top = t.radicand(2) * FieldElem::root(t, 2);
  CHECK_FALSE(sqrt_in_field(top).has_value());
}

TEST_CASE("galois_group of a biquadratic field") {
  FieldTower t = multiquadratic({2, 3});
  GaloisGroup g = galois_group(t);
  REQUIRE(g.size() == 4);
  CHECK(g[0].is_identity());
  std::set<std::pair<int, int>> patterns;
  for (std::size_t i = 0; i < g.size(); ++i) {
    int s1 = g[i].root_images()[0] == FieldElem::root(t, 0) ? 1 : -1;
    int s2 = g[i].root_images()[1] == FieldElem::root(t, 1) ? 1 : -1;
    patterns.insert({s1, s2});
    CHECK(g.multiply(i, i) == 0);  // elementary abelian
  }
  CHECK(patterns.size() == 4);
  CHECK(galois_group(FieldTower()).size() == 1);
}

TEST_CASE("galois_group rejects a non-normal tower") {
  FieldTower t = multiquadratic({2});
  t = tower_extend(t, sqrt2(t) + 1).tower;
  try {
    galois_group(t);
    FAIL("expected NotGalois");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotGalois);
    CHECK(std::string(e.what()).find("step 2") != std::string::npos);
  }
}

TEST_CASE("galois group of a cyclic quartic tower") {
  // Q(sqrt(2+sqrt2)) is Galois with cyclic group of order 4
  FieldTower t = multiquadratic({2});
  t = tower_extend(t, sqrt2(t) + 2).tower;
  GaloisGroup g = galois_group(t);
  REQUIRE(g.size() == 4);
  int order4 = 0;
  for (std::size_t i = 0; i < 4; ++i)
    if (g.multiply(i, i) != 0) ++order4;
  CHECK(order4 == 2);
}

TEST_CASE("apply_aut is a ring homomorphism") {
  std::mt19937_64 rng(3);
  FieldTower t = multiquadratic({2, -3, 5});
  GaloisGroup g = galois_group(t);
  for (std::size_t k = 0; k < g.size(); ++k)
    for (int i = 0; i < 10; ++i) {
      FieldElem a = testing::random_elem(rng, t), b = testing::random_elem(rng, t);
      CHECK(apply_aut(g[k], a + b) == apply_aut(g[k], a) + apply_aut(g[k], b));
      CHECK(apply_aut(g[k], a * b) == apply_aut(g[k], a) * apply_aut(g[k], b));
      CHECK(apply_aut(g[0], a) == a);
    }
  // sigma: sqrt2 -> -sqrt2 fixes sqrt(-3) and negates sqrt2*sqrt(-3)
  GaloisAut flip(t, {-FieldElem::root(t, 0), FieldElem::root(t, 1), FieldElem::root(t, 2)});
  CHECK(apply_aut(flip, sqrt2(t) + 3) == 3 - sqrt2(t));
  FieldElem s6 = FieldElem::root(t, 0) * FieldElem::root(t, 1);
  CHECK(apply_aut(flip, s6) == -s6);
}

TEST_CASE("group axioms via the multiplication table") {
  FieldTower t = multiquadratic({2});
  t = tower_extend(t, sqrt2(t) + 2).tower;
  t = tower_extend(t, Rational(-1)).tower;
  GaloisGroup g = galois_group(t);
  const int n = static_cast<int>(g.size());
  REQUIRE(n == 8);
  for (int a = 0; a < n; ++a) {
    CHECK(g.multiply(0, a) == a);
    CHECK(g.multiply(a, 0) == a);
    CHECK(g.multiply(a, g.inverse(a)) == 0);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) CHECK(g.multiply(g.multiply(a, b), c) == g.multiply(a, g.multiply(b, c)));
  }
}

TEST_CASE("fixed_subtower") {
  FieldTower t = multiquadratic({2, 3});
  GaloisGroup g = galois_group(t);
  std::vector<int> all{0, 1, 2, 3};
  CHECK(fixed_subtower(g, all).is_rationals());
  std::vector<int> trivial{0};
  CHECK(fixed_subtower(g, trivial).tower.degree() == 4);

  GaloisAut flip(t, {-FieldElem::root(t, 0), FieldElem::root(t, 1)});
  std::vector<int> s{0, g.index_of(flip)};
  Subfield f = fixed_subtower(g, s);
  REQUIRE(f.tower.level() == 1);
  CHECK(f.tower.radicand_coords(0)[0] == 3);
  CHECK(f.embed(FieldElem::root(f.tower, 0)) == FieldElem::root(t, 1));
}

TEST_CASE("fixed field degree times subgroup order is the tower degree") {
  std::mt19937_64 rng(9);
  FieldTower t = multiquadratic({2});
  t = tower_extend(t, sqrt2(t) + 2).tower;
  t = tower_extend(t, Rational(-3)).tower;
  GaloisGroup g = galois_group(t);
  const int n = static_cast<int>(g.size());
  for (int mask = 1; mask < (1 << n); mask += 2) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.push_back(i);
    if (!g.is_subgroup(s)) continue;
    Subfield f = fixed_subtower(g, s);
    CHECK(f.tower.degree() * s.size() == t.degree());
    // embedded elements are fixed and products embed multiplicatively
    FieldElem x = testing::random_elem(rng, f.tower), y = testing::random_elem(rng, f.tower);
    for (int i : s) CHECK(g[i].apply(f.embed(x)) == f.embed(x));
    CHECK(f.embed(x * y) == f.embed(x) * f.embed(y));
    CHECK(*f.pull_back(f.embed(x)) == x);
  }
}
