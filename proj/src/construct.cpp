#include "descent/construct.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "descent/errors.hpp"

namespace descent {

namespace {

Rational random_rational(std::mt19937_64& rng, long num_bound, long den_bound) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound), den(1, den_bound);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

FieldElem random_elem(std::mt19937_64& rng, const FieldTower& t, bool sparse) {
  std::vector<Rational> coords;
  for (std::size_t i = 0; i < t.degree(); ++i)
    coords.push_back(sparse && i > 0 && rng() % 2 ? Rational(0) : random_rational(rng, 9, 4));
  return FieldElem(t, std::move(coords));
}

ConicCoords conjugate(const GaloisAut& sigma, const ConicCoords& c) {
  return {sigma.apply(c[0]), sigma.apply(c[1]), sigma.apply(c[2])};
}

ConicCoords cross(const ConicCoords& u, const ConicCoords& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

bool proportional(const ConicCoords& u, const ConicCoords& v) {
  auto c = cross(u, v);
  return c[0].is_zero() && c[1].is_zero() && c[2].is_zero();
}

// Normalized so the first nonzero coordinate is 1.
ConicCoords normalize(ConicCoords c) {
  auto it = std::find_if(c.begin(), c.end(), [](const FieldElem& x) { return !x.is_zero(); });
  check(it != c.end(), "zero conic coordinates");
  FieldElem inv = it->inverse();
  for (auto& x : c) x = x * inv;
  return c;
}

FieldElem eval_form(const TernaryForm& f, const ConicCoords& c) {
  FieldElem acc(c[0].tower());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += c[i] * c[j] * f.gram[i][j];
  return acc;
}

// Parameter (s : t) of a conic point c != p for the map v ↦ Q(v) p - 2 B(p, v) v
// with v = s u + t w: the coordinates of c along u and w.
ProjPoint parameter_of(const ConicCoords& c, const ConicCoords& p, const ConicCoords& u, const ConicCoords& w) {
  const FieldTower& t = c[0].tower();
  DenseMatrix<FieldElem> m(3, 3, FieldElem(t));
  for (int i = 0; i < 3; ++i) {
    m(i, 0) = p[i];
    m(i, 1) = u[i];
    m(i, 2) = w[i];
  }
  auto x = solve(m, std::vector<FieldElem>(c.begin(), c.end()));
  check(x.has_value(), "parametrization frame is degenerate");
  return ProjPoint((*x)[1], (*x)[2]);
}

// The cover s ↦ s^2 composed with the conic parametrization, set up for the
// symbol (a, b).
struct CoverSetup {
  TernaryForm conic;
  FieldTower base, tower;
  GaloisAut sigma;
  QuadraticMap<FieldElem> param;
  ConicCoords p, p_bar;
  Rational kappa;
  FieldElem beta;
};

CoverSetup cover_setup(const CounterexampleSpec& spec, const FactorConfig& factor) {
  if (sgn(spec.a) == 0 || sgn(spec.b) == 0) throw Error(ErrorCode::InputError, "symbol entries must be nonzero");
  TernaryForm conic = TernaryForm::diagonal(Rational(spec.a), Rational(spec.b), -1);
  if (hasse_solvable(conic, factor).solvable)
    throw Error(ErrorCode::SplitSymbol, "the conic of (" + spec.a.get_str() + ", " + spec.b.get_str() + ") has points");

  FieldTower q;
  ExtendResult ext = tower_extend(q, Rational(spec.a));
  check(ext.extended, "a is a square for a pointless conic");
  const FieldTower& base = ext.tower;
  const FieldElem& r = ext.root;
  GaloisAut sigma(base, {-FieldElem::root(base, 0)});

  std::array<std::array<FieldElem, 3>, 3> gram;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) gram[i][j] = FieldElem(base, conic.gram[i][j]);
  FieldElem zero(base), one(base, 1L);
  ConicCoords p{one, zero, r}, p_bar{one, zero, -r}, u{zero, one, zero}, w{zero, zero, one};
  auto param = residual_parametrization(gram, p, u, w);
  check(proportional(param(one, zero), p), "p is not the tangent parameter");
  check(proportional(param(zero, one), p_bar), "p-bar is not at parameter zero");

  // σ(P(τ)) = P(κ / σ(τ))
  ProjPoint image = parameter_of(conjugate(sigma, param(one, one)), p, u, w);
  check(!image.is_infinity(), "conjugate point lands on p");
  FieldElem kappa = image.x() / image.y();
  check(kappa.is_rational(), "descent constant is not rational");
  FieldElem probe(base, std::vector<Rational>{Rational(2), Rational(1)});
  check(proportional(conjugate(sigma, param(probe, one)), param(kappa, sigma.apply(probe))),
        "conjugate parametrization is not P(κ/τ)");

  ExtendResult top = tower_extend(base, kappa);
  return {conic, base, top.tower, sigma, param, p, p_bar, kappa.rational_value(), top.root};
}

bool distinct(std::vector<ProjPoint> pts) {
  std::sort(pts.begin(), pts.end());
  return std::adjacent_find(pts.begin(), pts.end()) == pts.end();
}

FieldElem random_parameter(std::mt19937_64& rng, const FieldTower& base) {
  for (;;) {
    FieldElem w(base, std::vector<Rational>{random_rational(rng, 6, 3), random_rational(rng, 6, 3)});
    if (!w.is_zero()) return w;
  }
}

// Checks that the pair {c, σ(c)} is cut out by a rational line.
void check_rational_section(const CoverSetup& s, const ConicCoords& c) {
  ConicCoords c_bar = conjugate(s.sigma, c);
  check(eval_form(s.conic, c).is_zero() && eval_form(s.conic, c_bar).is_zero(), "section point is off the conic");
  ConicCoords line = normalize(cross(c, c_bar));
  for (const auto& x : line) check(x.is_rational(), "section line is not rational");
}

}  // namespace

LineSection line_section_divisor(const TernaryForm& c, const std::array<Rational, 3>& line) {
  int k = 0;
  while (k < 3 && sgn(line[k]) == 0) ++k;
  if (k == 3) throw Error(ErrorCode::InputError, "zero line");
  std::array<Rational, 3> u{}, v{};
  int i = (k + 1) % 3, j = (k + 2) % 3;
  u[i] = 1;
  u[k] = -line[i] / line[k];
  v[j] = 1;
  v[k] = -line[j] / line[k];
  Rational qa = c(u), qb = 2 * c.bilinear(u, v), qc = c(v);
  Rational disc = qb * qb - 4 * qa * qc;
  if (sgn(disc) == 0 && !(sgn(qa) == 0 && sgn(qb) == 0 && sgn(qc) == 0))
    throw Error(ErrorCode::TangentLine, "line is tangent to the conic");
  if (sgn(qa) == 0 && sgn(qb) == 0 && sgn(qc) == 0) throw Error(ErrorCode::InputError, "line lies on the conic");

  ExtendResult ext = tower_extend(FieldTower{}, disc);
  const FieldTower& t = ext.tower;
  auto combine = [&](const FieldElem& s, const FieldElem& w) {
    ConicCoords out;
    for (int m = 0; m < 3; ++m) out[m] = s * u[m] + w * v[m];
    return normalize(out);
  };
  FieldElem one(t, 1L);
  if (sgn(qa) == 0) return {t, {combine(one, FieldElem(t)), combine(FieldElem(t, -qc), FieldElem(t, qb))}};
  FieldElem den(t, 2 * qa);
  return {t, {combine((ext.root - qb) / den, one), combine((-ext.root - qb) / den, one)}};
}

bool check_self_centralizing(const AutGroup& g, int involution) {
  if (involution < 0 || static_cast<std::size_t>(involution) >= g.size() || g.order(involution) != 2)
    throw Error(ErrorCode::NotAnInvolution, "element is not an involution of the group");
  std::size_t centralizer = 0;
  for (std::size_t h = 0; h < g.size(); ++h)
    centralizer += g.multiply(static_cast<int>(h), involution) == g.multiply(involution, static_cast<int>(h));
  if (centralizer != 2) return false;
  check((g.size() / 2) % 2 == 1, "self-centralizing involution in a group of order divisible by 4");
  return true;
}

Counterexample gen_counterexample(const CounterexampleSpec& spec, const DecideOptions& options) {
  if (spec.n < 8 || spec.n % 2 != 0) throw Error(ErrorCode::BadDegree, "counterexamples need even n >= 8");
  CoverSetup s = cover_setup(spec, options.factor);
  const FieldTower& t = s.tower;
  const bool branch_pair = spec.n % 4 == 2;
  const int pairs = branch_pair ? (spec.n - 2) / 4 : spec.n / 4;
  Mobius deck(FieldElem(t, -1L), FieldElem(t), FieldElem(t), FieldElem(t, 1L));
  FieldElem one_base(s.base, 1L);

  std::mt19937_64 rng(spec.seed);
  for (int attempt = 1; attempt <= spec.max_retries; ++attempt) {
    std::vector<ProjPoint> pts;
    std::vector<std::array<ConicCoords, 2>> sections;
    for (int k = 0; k < pairs; ++k) {
      FieldElem w = random_parameter(rng, s.base);
      ConicCoords c = s.param(w * w, one_base);
      check_rational_section(s, c);
      sections.push_back({normalize(c), normalize(conjugate(s.sigma, c))});
      FieldElem lifted = w.embed(t), other = s.beta / s.sigma.apply(w).embed(t);
      for (const auto& x : {lifted, -lifted, other, -other}) pts.push_back(ProjPoint::affine(x));
    }
    if (branch_pair) {
      pts.push_back(ProjPoint::affine(FieldElem(t)));
      pts.push_back(ProjPoint::infinity(t));
    }
    if (!distinct(pts)) continue;
    Divisor d(pts);
    const std::size_t deg_e = 2 * sections.size() + (branch_pair ? 2 : 0);
    check(d.degree() == 2 * deg_e - (branch_pair ? 2 : 0), "degree bookkeeping of the cover");
    check(static_cast<int>(d.degree()) == spec.n, "cover has the wrong degree");

    AutGroup aut = compute_aut(d);
    int g = aut.index_of(deck);
    check(g >= 0, "deck involution is not an automorphism");
    if (!check_self_centralizing(aut, g)) continue;

    Verdict v = decide(d, options);
    check(v.outcome == Outcome::NotDefined, "generated divisor is defined over its field of moduli");
    check(v.fom.is_rationals(), "generated divisor has field of moduli larger than Q");
    DoubleCoverData data{s.conic, s.base,      s.param, normalize(s.p), normalize(s.p_bar), std::move(sections),
                         branch_pair, deck,    d,       attempt};
    return {std::move(data), std::move(v)};
  }
  throw Error(ErrorCode::RetriesExhausted, "no self-centralizing configuration within the retry budget");
}

Counterexample gen_conic_model(const CounterexampleSpec& spec, const DecideOptions& options) {
  if (spec.n < 6 || spec.n % 2 != 0) throw Error(ErrorCode::BadDegree, "conic models need even n >= 6");
  CoverSetup s = cover_setup(spec, options.factor);
  const FieldTower& base = s.base;
  FieldElem one(base, 1L), kappa(base, s.kappa);

  std::mt19937_64 rng(spec.seed);
  for (int attempt = 1; attempt <= spec.max_retries; ++attempt) {
    std::vector<ProjPoint> pts;
    std::vector<std::array<ConicCoords, 2>> sections;
    for (int k = 0; k < spec.n / 2; ++k) {
      FieldElem tau = random_parameter(rng, base);
      ConicCoords c = s.param(tau, one);
      check_rational_section(s, c);
      sections.push_back({normalize(c), normalize(conjugate(s.sigma, c))});
      pts.push_back(ProjPoint::affine(tau));
      pts.push_back(ProjPoint::affine(kappa / s.sigma.apply(tau)));
    }
    if (!distinct(pts)) continue;
    Divisor d(pts);
    if (compute_aut(d).size() != 1) continue;
    Verdict v = decide(d, options);
    check(v.outcome == Outcome::DefinedOnConic, "trivial-automorphism divisor on a pointless conic");
    Mobius id = Mobius::identity(base);
    DoubleCoverData data{s.conic, base, s.param, normalize(s.p), normalize(s.p_bar), std::move(sections), false, id, d,
                         attempt};
    return {std::move(data), std::move(v)};
  }
  throw Error(ErrorCode::RetriesExhausted, "no automorphism-free configuration within the retry budget");
}

Deg6Form deg6_normal_form(const Divisor& d) {
  if (d.degree() != 6) throw Error(ErrorCode::HypothesesNotMet, "normal form needs degree 6");
  const FieldTower& t = d.tower();
  AutGroup aut = compute_aut(d);
  for (std::size_t k = 0; k < aut.size(); ++k) {
    if (aut.order(static_cast<int>(k)) != 2) continue;
    FixedPoints fp = fixed_points(aut[k]);
    if (fp.tower != t || fp.points.size() != 2) continue;
    const ProjPoint &f0 = fp.points[0], &f1 = fp.points[1];
    if (!d.contains(f0) || !d.contains(f1)) continue;
    auto one_it = std::find_if(d.points().begin(), d.points().end(),
                               [&](const ProjPoint& q) { return !(q == f0) && !(q == f1); });
    ProjPoint zero = ProjPoint::affine(FieldElem(t)), inf = ProjPoint::infinity(t),
              one = ProjPoint::affine(FieldElem(t, 1L)), minus_one = ProjPoint::affine(FieldElem(t, -1L));
    Mobius m = mobius_from_triples(f0, f1, *one_it, zero, inf, one);
    Divisor image = d.image(m);
    check(image.contains(minus_one), "normalized involution is not x -> -x");
    std::vector<FieldElem> rest;
    for (const auto& q : image.points())
      if (!(q == zero) && !(q == inf) && !(q == one) && !(q == minus_one)) rest.push_back(q.x() / q.y());
    check(rest.size() == 2 && rest[0] == -rest[1], "normal form is not {0, inf, 1, -1, l, -l}");
    FieldElem lambda = lex_compare(rest[0], rest[1]) > 0 ? rest[0] : rest[1];
    check(!lambda.is_zero() && lambda != 1 && lambda != -1, "degenerate normal form");
    Mobius swap(FieldElem(t), lambda, FieldElem(t, 1L), FieldElem(t));
    check(image.image(swap) == image, "x -> l/x does not preserve the normal form");
    return {lambda, m, {lambda, -lambda, lambda.inverse(), -lambda.inverse()}};
  }
  throw Error(ErrorCode::HypothesesNotMet, "no involution with both fixed points in the divisor");
}

HyperellipticReport hyperelliptic_branch_analysis(const Divisor& branch, bool odd_infinity,
                                                  const DecideOptions& options) {
  std::vector<ProjPoint> pts = branch.points();
  if (odd_infinity) {
    ProjPoint inf = ProjPoint::infinity(branch.tower());
    if (branch.contains(inf)) throw Error(ErrorCode::InputError, "branch divisor already contains infinity");
    pts.push_back(inf);
  }
  if (pts.size() < 6) throw Error(ErrorCode::GenusTooSmall, "branch divisor of degree below 6 gives genus < 2");
  if (pts.size() % 2 != 0) throw Error(ErrorCode::InputError, "branch divisor must have even degree");

  HyperellipticReport report{Divisor(pts), 0, {}, {}, false, ""};
  AutGroup aut = compute_aut(report.divisor);
  report.reduced_order = aut.size();
  report.reduced_group = aut.classification();
  report.verdict = decide(report.divisor, options);
  const auto& comp = report.verdict.compression;
  report.obstruction_possible = comp && comp->has_point.has_value() && !*comp->has_point;
  if (report.obstruction_possible) check(report.reduced_group.is_cyclic(), "pointless compression with a noncyclic group");
  report.note = report.obstruction_possible
                    ? "reduced group is cyclic and the compression is pointless; the branch divisor carries an obstruction"
                    : "the compression has a point or the group is not cyclic; no obstruction from the branch divisor";
  report.note += "; descent of the curve itself is not decided";
  return report;
}

Divisor random_twisted_divisor(std::size_t n, const FieldTower& tower, std::uint64_t seed) {
  if (n < 3) throw Error(ErrorCode::DegreeTooSmall, "divisors need at least three points");
  GaloisGroup group = galois_group(tower);
  std::mt19937_64 rng(seed);
  std::vector<ProjPoint> pts;
  std::set<ProjPoint> seen;
  int misses = 0;
  while (pts.size() < n) {
    std::size_t remaining = n - pts.size();
    bool rational = tower.level() == 0 || remaining == 1 || misses > 20;
    FieldElem x = rational ? FieldElem(tower, random_rational(rng, 30, 7)) : random_elem(rng, tower, true);
    std::vector<ProjPoint> orbit;
    for (const auto& sigma : group.elements()) {
      ProjPoint q = ProjPoint::affine(sigma.apply(x));
      if (std::find(orbit.begin(), orbit.end(), q) == orbit.end()) orbit.push_back(q);
    }
    bool fresh = orbit.size() <= remaining;
    for (const auto& q : orbit) fresh = fresh && !seen.contains(q);
    if (!fresh) {
      ++misses;
      continue;
    }
    misses = 0;
    for (const auto& q : orbit) {
      seen.insert(q);
      pts.push_back(q);
    }
  }
  // small integral twist keeps the compression coefficients factorable
  std::uniform_int_distribution<long> small(-3, 3);
  auto entry = [&] {
    std::vector<Rational> coords;
    for (std::size_t i = 0; i < tower.degree(); ++i) coords.emplace_back(small(rng));
    return FieldElem(tower, std::move(coords));
  };
  Mobius m = Mobius::identity(tower);
  for (;;) {
    FieldElem a = entry(), b = entry(), c = entry(), d = entry();
    if (!(a * d - b * c).is_zero()) {
      m = Mobius(a, b, c, d);
      break;
    }
  }
  Divisor out = Divisor(pts).image(m);
  check(field_of_moduli(out).fom_is_rationals(), "twisted Galois-stable divisor has a larger field of moduli");
  return out;
}

}  // namespace descent
