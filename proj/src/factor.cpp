#include "descent/factor.hpp"

#include <algorithm>
#include <map>

#include "descent/errors.hpp"

namespace descent {

namespace {

Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// Brent's cycle variant; returns a nontrivial factor or 0 on failure.
Integer pollard_brent(const Integer& n, unsigned long c_seed, unsigned long max_iterations) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Integer c = c_seed;
  Integer y = 2, x, q = 1, g = 1, ys;
  auto step = [&](Integer& v) {
    v = v * v + c;
    mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
  };
  unsigned long r = 1, iterations = 0;
  constexpr unsigned long batch = 64;
  while (g == 1) {
    x = y;
    for (unsigned long i = 0; i < r; ++i) step(y);
    unsigned long k = 0;
    while (k < r && g == 1) {
      ys = y;
      unsigned long lim = std::min(batch, r - k);
      for (unsigned long i = 0; i < lim; ++i) {
        step(y);
        Integer diff = x - y;
        q = q * abs(diff);
        mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
      g = gcd(q, n);
      k += lim;
      iterations += lim;
      if (iterations > max_iterations) return 0;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      step(ys);
      g = gcd(abs(Integer(x - ys)), n);
    } while (g == 1);
  }
  return g == n ? Integer(0) : g;
}

void split_cofactor(const Integer& n, const FactorConfig& config, std::map<Integer, unsigned>& out) {
  if (n == 1) return;
  if (is_probable_prime(n)) {
    ++out[n];
    return;
  }
  for (unsigned long c = 1; c < 20; ++c) {
    Integer f = pollard_brent(n, c, config.rho_iterations);
    if (f != 0 && f != 1 && f != n) {
      split_cofactor(f, config, out);
      split_cofactor(n / f, config, out);
      return;
    }
  }
  throw Error(ErrorCode::FactorizationTooLarge, "could not factor " + n.get_str());
}

}  // namespace

bool is_probable_prime(const Integer& n) { return n > 1 && mpz_probab_prime_p(n.get_mpz_t(), 30) > 0; }

Factorization factorize(const Integer& n_in, const FactorConfig& config) {
  if (n_in == 0) throw Error(ErrorCode::InputError, "cannot factor zero");
  Integer n = abs(n_in);
  if (mpz_sizeinbase(n.get_mpz_t(), 2) > config.max_bits)
    throw Error(ErrorCode::FactorizationTooLarge,
                "integer exceeds factoring bound of " + std::to_string(config.max_bits) + " bits");
  std::map<Integer, unsigned> found;
  for (unsigned long p = 2; p <= config.trial_bound; p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > n) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ++found[Integer(p)];
      n /= p;
    }
  }
  if (n > 1) {
    Integer bound = config.trial_bound;
    if (n <= bound * bound)
      ++found[n];
    else
      split_cofactor(n, config, found);
  }
  return {found.begin(), found.end()};
}

SquarefreeDecomposition squarefree_decompose(const Rational& q, const FactorConfig& config) {
  if (q == 0) throw Error(ErrorCode::InputError, "squarefree decomposition of zero");
  // q = num/den = num*den / den^2
  Integer m = q.get_num() * q.get_den();
  Integer core = sgn(m) < 0 ? -1 : 1;
  Integer root = 1;
  for (const auto& [p, e] : factorize(m, config)) {
    if (e % 2 == 1) core *= p;
    for (unsigned i = 0; i < e / 2; ++i) root *= p;
  }
  Rational scale(root, q.get_den());
  scale.canonicalize();
  return {core, scale};
}

}  // namespace descent
