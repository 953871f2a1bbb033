#include "descent/decide.hpp"

#include <chrono>
#include <random>

#include "descent/errors.hpp"

namespace descent {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::DefinedOnP1: return "DefinedOnP1";
    case Outcome::DefinedOnConic: return "DefinedOnConic";
    case Outcome::NotDefined: return "NotDefined";
    case Outcome::DefinedOverFom: return "DefinedOverFom";
    case Outcome::UnsupportedBase: return "UnsupportedBase";
  }
  return "?";
}

std::string to_string(FastRule r) {
  switch (r) {
    case FastRule::OddDegree: return "n-odd";
    case FastRule::DegreeFour: return "n-4";
    case FastRule::DegreeSix: return "n-6";
    case FastRule::NonCyclic: return "noncyclic";
    case FastRule::CyclicOdd: return "cyclic-odd";
  }
  return "?";
}

namespace {

using Matrix = DenseMatrix<FieldElem>;
using Clock = std::chrono::steady_clock;

Matrix conjugate_matrix(const GaloisAut& sigma, const Matrix& m) {
  Matrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = sigma.apply(m(i, j));
  return out;
}

FieldElem det2(const Matrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

bool is_scalar(const Matrix& m) {
  return m(0, 1).is_zero() && m(1, 0).is_zero() && m(0, 0) == m(1, 1);
}

FieldElem random_small(std::mt19937_64& rng, const FieldTower& t) {
  std::uniform_int_distribution<long> dist(-3, 3);
  std::vector<Rational> coords;
  for (std::size_t i = 0; i < t.degree(); ++i) coords.emplace_back(dist(rng));
  return FieldElem(t, std::move(coords));
}

BinaryForm monic_form(const Divisor& d) {
  BinaryForm f = BinaryForm::from_roots(d.points(), d.tower());
  std::size_t k = 0;
  while (f.coeffs()[k].is_zero()) ++k;
  return f * f.coeffs()[k].inverse();
}

BinaryForm pull_back_form(const BinaryForm& f, const Subfield& fom) {
  std::vector<FieldElem> coeffs;
  for (const auto& c : f.coeffs()) {
    auto x = fom.pull_back(c);
    if (!x) throw Error(ErrorCode::InternalInconsistency, "model form has coefficients outside the field of moduli");
    coeffs.push_back(*x);
  }
  return BinaryForm(std::move(coeffs));
}

// mu with mu * sigma(mu) = lambda, for lambda in the fixed field of sigma.
std::optional<FieldElem> norm_preimage(const FieldElem& lambda, const GaloisAut& sigma, const Subfield& fom,
                                       const FactorConfig& factor) {
  const FieldTower& t = lambda.tower();
  auto lam = fom.pull_back(lambda);
  check(lam.has_value(), "norm target outside the fixed field");
  if (auto root = sqrt_in_field(*lam)) return fom.embed(*root);
  if (!fom.is_rationals()) return std::nullopt;
  std::optional<FieldElem> delta;
  for (std::size_t b = 0; b < t.degree() && !delta; ++b) {
    FieldElem e = FieldElem::basis(t, b);
    FieldElem cand = e - sigma.apply(e);
    if (!cand.is_zero()) delta = cand;
  }
  check(delta.has_value(), "nontrivial Galois element fixes every basis element");
  FieldElem dd = *delta * *delta;
  check(dd.is_rational(), "square of an anti-invariant is not rational");
  std::optional<ConicPoint> p;
  try {
    p = find_point(TernaryForm::diagonal(1, -dd.rational_value(), -lam->rational_value()), factor);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FactorizationTooLarge) throw;
  }
  if (!p) return std::nullopt;
  const auto& [x, y, z] = *p;
  check(sgn(z) != 0, "norm equation solution at infinity");
  return (FieldElem(t, x) + *delta * y) / FieldElem(t, z);
}

}  // namespace

// ---------------------------------------------------------------------------
// Model construction

P1Model build_p1_model(const Divisor& d, const ModuliData& data, const AutGroup& aut, const DecideOptions& options) {
  const FieldTower& t = d.tower();
  const std::size_t h = data.subgroup.size();

  bool stable = true;
  for (std::size_t k = 1; k < h && stable; ++k) stable = conjugate_divisor(data.group[data.subgroup[k]], d) == d;
  if (stable) return P1Model{pull_back_form(monic_form(d), data.fom), Mobius::identity(t)};
  if (h > 2) throw Error(ErrorCode::ModelConstructionFailed, "explicit models need a moduli subgroup of order at most 2");

  const GaloisAut& sigma = data.group[data.subgroup[1]];
  for (const auto& g : aut.elements()) {
    Mobius phi = g * data.cochain[1];
    Matrix m = to_matrix(phi);
    Matrix square = m * conjugate_matrix(sigma, m);
    if (!is_scalar(square)) continue;
    auto mu = norm_preimage(square(0, 0), sigma, data.fom, options.factor);
    if (!mu) continue;
    FieldElem inv = mu->inverse();
    Matrix n = m;
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) n(i, j) = m(i, j) * inv;
    Matrix check_id = n * conjugate_matrix(sigma, n);
    check(is_scalar(check_id) && check_id(0, 0).is_one(), "normalized cocycle is not trivial");

    std::mt19937_64 rng(options.seed);
    for (int attempt = 0; attempt < 64; ++attempt) {
      Matrix a(2, 2, FieldElem(t));
      if (attempt == 0) {
        a(0, 0) = a(1, 1) = FieldElem(t, 1L);
      } else {
        for (std::size_t i = 0; i < 2; ++i)
          for (std::size_t j = 0; j < 2; ++j) a(i, j) = random_small(rng, t);
      }
      Matrix sa = n * conjugate_matrix(sigma, a);
      Matrix b = a;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) b(i, j) = a(i, j) + sa(i, j);
      if (det2(b).is_zero()) continue;
      Mobius bm(b(0, 0), b(0, 1), b(1, 0), b(1, 1));
      Divisor model = d.image(bm.inverse());
      check(conjugate_divisor(sigma, model) == model, "averaged change of coordinates does not descend the divisor");
      BinaryForm f = monic_form(model);
      check(conjugate(sigma, f) == f, "model form is not Galois-stable");
      return P1Model{pull_back_form(f, data.fom), bm};
    }
  }
  throw Error(ErrorCode::ModelConstructionFailed, "no trivializable cochain adjustment found");
}

// ---------------------------------------------------------------------------
// Decision

Verdict decide(const Divisor& d, const DecideOptions& options) {
  auto stage_start = Clock::now();
  Verdict v;
  auto lap = [&](const char* name) {
    auto now = Clock::now();
    v.timings.emplace_back(name, std::chrono::duration<double>(now - stage_start).count());
    stage_start = now;
  };

  AutGroup aut = compute_aut(d);
  lap("aut");
  ModuliData data = field_of_moduli(d);
  lap("moduli");

  const std::size_t n = d.degree();
  const GroupClass cls = aut.classification();
  v.degree = n;
  v.fom = data.fom;
  v.moduli_subgroup = data.subgroup;
  v.aut_order = aut.size();
  v.aut_class = cls;

  std::optional<Compression> comp;
  std::optional<CompressedDivisor> compressed;
  std::optional<HasseResult> hasse;
  bool factoring_failed = false;
  if (cls.is_cyclic()) {
    comp = compression(d, data, aut);
    compressed = compressed_divisor(d, data, *comp);
    CompressionSummary summary;
    summary.form = comp->form;
    for (const auto& p : compressed->orbit_images) summary.orbit_degrees.push_back(p.degree);
    summary.ledger = ramification_ledger(comp->quotient, aut);
    if (comp->form) {
      try {
        hasse = hasse_solvable(*comp->form, options.factor);
        summary.has_point = hasse->solvable;
        summary.evaluations = hasse->evaluations;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::FactorizationTooLarge) throw;
        factoring_failed = true;
      }
    }
    v.compression = std::move(summary);
    lap("compression");
  }
  const bool pointless = hasse && !hasse->solvable;
  if (pointless) {
    check(compressed->all_degrees_even(), "pointless compression with an odd-degree compressed point");
    check(n % 2 == 0, "pointless compression for an odd-degree divisor");
  }

  auto finish = [&](Outcome o, Certificate c) {
    v.outcome = o;
    v.certificate = std::move(c);
    if (o == Outcome::NotDefined) check(cls.cyclic_even(), "obstruction without an even cyclic group");
    return v;
  };

  if (!cls.is_cyclic()) return finish(Outcome::DefinedOnP1, FastPath{FastRule::NonCyclic});
  if (n % 2 == 1) return finish(Outcome::DefinedOnP1, FastPath{FastRule::OddDegree});
  if (n == 4) return finish(Outcome::DefinedOnP1, FastPath{FastRule::DegreeFour});

  const bool even_group = aut.size() % 2 == 0;
  if (hasse) {
    const TernaryForm& form = *comp->form;
    if (hasse->solvable) {
      if (options.build_models && data.subgroup.size() <= 2) {
        try {
          auto model = build_p1_model(d, data, aut, options);
          lap("model");
          return finish(Outcome::DefinedOnP1, std::move(model));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ModelConstructionFailed) throw;
        }
      }
      try {
        auto point = find_point(form, options.factor);
        check(point.has_value(), "locally solvable compression without a point");
        return finish(Outcome::DefinedOnP1, PointWitness{form, *point});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::FactorizationTooLarge) throw;
      }
      if (n == 6) return finish(Outcome::DefinedOnP1, FastPath{FastRule::DegreeSix});
      return finish(Outcome::UnsupportedBase, Refusal{"point search exceeds the factoring bound"});
    }
    if (even_group) {
      check(n != 6, "degree-6 divisor with an obstruction");
      Obstruction ob{form, hasse->failing, std::nullopt};
      if (aut.size() == 2) {
        try {
          ob.symbols = cocycle_class_to_quaternion(descent_cocycle(data, d, aut), data, aut);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NonElementaryGaloisQuotient) throw;
        }
      }
      return finish(Outcome::NotDefined, std::move(ob));
    }
    return finish(Outcome::DefinedOnConic, ConicModel{form, *compressed, hasse->failing});
  }

  if (n == 6) return finish(even_group ? Outcome::DefinedOnP1 : Outcome::DefinedOverFom, FastPath{FastRule::DegreeSix});
  if (!even_group) return finish(Outcome::DefinedOverFom, FastPath{FastRule::CyclicOdd});
  return finish(Outcome::UnsupportedBase, Refusal{factoring_failed
                                                     ? "compression coefficients exceed the factoring bound"
                                                     : "local analysis over a field of moduli larger than Q"});
}

// ---------------------------------------------------------------------------
// Certificate checking

namespace {

CertificateCheck fail(std::string reason) { return {false, std::move(reason)}; }

CertificateCheck check_places(const TernaryForm& form, const std::vector<PlaceEval>& failing, const FactorConfig& factor) {
  if (failing.empty()) return fail("no failing place claimed");
  Diagonalization diag = diagonalize(form, factor);
  const auto& [a, b, c] = diag.coeffs;
  Rational big_a(Integer(-a * c)), big_b(Integer(-b * c));
  for (const auto& e : failing) {
    int s = hilbert_symbol(big_a, big_b, e.place);
    if (s != e.symbol) return fail("Hilbert symbol at " + e.place.to_string() + " does not match the claim");
    if (s != -1) return fail("claimed failing place " + e.place.to_string() + " is locally solvable");
  }
  return {true, ""};
}

}  // namespace

CertificateCheck verify_certificate(const Divisor& d, const Verdict& v, const FactorConfig& factor) {
  const std::size_t n = d.degree();
  if (n != v.degree) return fail("degree mismatch");

  if (const auto* fp = std::get_if<FastPath>(&v.certificate)) {
    switch (fp->rule) {
      case FastRule::OddDegree:
        return n % 2 == 1 ? CertificateCheck{true, ""} : fail("odd-degree rule on an even-degree divisor");
      case FastRule::DegreeFour: return n == 4 ? CertificateCheck{true, ""} : fail("degree-4 rule on another degree");
      case FastRule::DegreeSix: return n == 6 ? CertificateCheck{true, ""} : fail("degree-6 rule on another degree");
      case FastRule::NonCyclic: {
        GroupClass cls = compute_aut(d).classification();
        return !cls.is_cyclic() ? CertificateCheck{true, ""} : fail("noncyclic rule on a cyclic group");
      }
      case FastRule::CyclicOdd: {
        AutGroup aut = compute_aut(d);
        return aut.classification().is_cyclic() && aut.size() % 2 == 1 ? CertificateCheck{true, ""}
                                                                        : fail("cyclic-odd rule does not apply");
      }
    }
  }
  if (const auto* model = std::get_if<P1Model>(&v.certificate)) {
    if (model->form.degree() != static_cast<int>(n)) return fail("model form has the wrong degree");
    if (!(model->form.tower() == v.fom.tower)) return fail("model form is not over the field of moduli");
    std::vector<FieldElem> coeffs;
    for (const auto& c : model->form.coeffs()) coeffs.push_back(v.fom.embed(c));
    BinaryForm ambient(std::move(coeffs));
    if (ambient.is_zero()) return fail("zero model form");
    Mobius inv = model->change.inverse();
    for (const auto& p : d.points())
      if (!ambient(inv(p)).is_zero()) return fail("a point of B^-1(D) is not a root of the model form");
    return {true, ""};
  }
  if (const auto* w = std::get_if<PointWitness>(&v.certificate)) {
    const auto& p = w->point;
    if (sgn(p[0]) == 0 && sgn(p[1]) == 0 && sgn(p[2]) == 0) return fail("zero witness point");
    return sgn(w->form(p)) == 0 ? CertificateCheck{true, ""} : fail("witness point is not on the compression");
  }
  if (const auto* ob = std::get_if<Obstruction>(&v.certificate)) {
    if (!v.aut_class.cyclic_even()) return fail("obstruction needs an even cyclic group");
    return check_places(ob->form, ob->failing, factor);
  }
  if (const auto* cm = std::get_if<ConicModel>(&v.certificate)) {
    if (!cm->compressed.all_degrees_even()) return fail("compressed divisor has an odd-degree point");
    return check_places(cm->form, cm->failing, factor);
  }
  if (std::holds_alternative<Refusal>(v.certificate))
    return v.outcome == Outcome::UnsupportedBase ? CertificateCheck{true, ""} : fail("refusal attached to a verdict");
  return fail("unknown certificate");
}

}  // namespace descent
