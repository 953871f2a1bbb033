#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "descent/divisor.hpp"
#include "descent/qfield.hpp"

namespace testing {

using descent::FieldElem;
using descent::FieldTower;
using descent::Rational;

inline Rational rat(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational random_rational(std::mt19937_64& rng, long num_bound = 9, long den_bound = 4) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound), den(1, den_bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline FieldElem random_elem(std::mt19937_64& rng, const FieldTower& tower, long num_bound = 9) {
  std::vector<Rational> coords;
  for (std::size_t i = 0; i < tower.degree(); ++i) coords.push_back(random_rational(rng, num_bound));
  return FieldElem(tower, std::move(coords));
}

inline FieldElem random_nonzero(std::mt19937_64& rng, const FieldTower& tower) {
  for (;;) {
    FieldElem x = random_elem(rng, tower);
    if (!x.is_zero()) return x;
  }
}

inline descent::Mobius random_mobius(std::mt19937_64& rng, const FieldTower& tower) {
  for (;;) {
    FieldElem a = random_elem(rng, tower, 5), b = random_elem(rng, tower, 5), c = random_elem(rng, tower, 5),
              d = random_elem(rng, tower, 5);
    if (!(a * d - b * c).is_zero()) return descent::Mobius(a, b, c, d);
  }
}

inline descent::ProjPoint point(const FieldElem& x) { return descent::ProjPoint::affine(x); }

inline descent::ProjPoint point(const FieldTower& t, long num, long den = 1) {
  return descent::ProjPoint::affine(FieldElem(t, rat(num, den)));
}

inline descent::ProjPoint infinity(const FieldTower& t) { return descent::ProjPoint::infinity(t); }

// n distinct random affine rational points.
inline std::vector<descent::ProjPoint> random_rational_points(std::mt19937_64& rng, const FieldTower& t, std::size_t n) {
  std::vector<descent::ProjPoint> out;
  while (out.size() < n) {
    auto p = point(FieldElem(t, random_rational(rng, 30, 7)));
    bool fresh = true;
    for (const auto& q : out) fresh = fresh && !(q == p);
    if (fresh) out.push_back(p);
  }
  return out;
}

inline FieldTower multiquadratic(const std::vector<long>& radicands) {
  FieldTower t;
  for (long r : radicands) t = descent::tower_extend(t, Rational(r)).tower;
  return t;
}

// Floating-point value of an element of a real tower under the positive-root
// embedding, evaluated directly from the radicand data.
inline long double numeric_value(const FieldElem& x) {
  const FieldTower& t = x.tower();
  std::vector<long double> roots;
  for (int i = 0; i < t.level(); ++i) {
    const auto& r = t.radicand_coords(i);
    long double v = 0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      long double mono = r[j].get_d();
      for (int b = 0; b < i; ++b)
        if (j & (std::size_t{1} << b)) mono *= roots[b];
      v += mono;
    }
    roots.push_back(std::sqrt(v));
  }
  long double v = 0;
  for (std::size_t j = 0; j < x.coords().size(); ++j) {
    long double mono = x.coords()[j].get_d();
    for (int b = 0; b < t.level(); ++b)
      if (j & (std::size_t{1} << b)) mono *= roots[b];
    v += mono;
  }
  return v;
}

}  // namespace testing
