#pragma once

#include <utility>
#include <vector>

#include "descent/rational.hpp"

namespace descent {

// Desk-scale factoring: trial division up to trial_bound, then Pollard rho
// (Brent) on the cofactor. Inputs wider than max_bits, or cofactors rho
// cannot split within rho_iterations, raise FactorizationTooLarge.
struct FactorConfig {
  unsigned long trial_bound = 1'000'000;
  unsigned max_bits = 256;
  unsigned long rho_iterations = 2'000'000;
};

using Factorization = std::vector<std::pair<Integer, unsigned>>;

// Prime factorization of |n| in increasing prime order; n != 0.
Factorization factorize(const Integer& n, const FactorConfig& config = {});

// q = core * scale^2 with core a squarefree integer (sign carried by core).
struct SquarefreeDecomposition {
  Integer core;
  Rational scale;
};

SquarefreeDecomposition squarefree_decompose(const Rational& q, const FactorConfig& config = {});

bool is_probable_prime(const Integer& n);

}  // namespace descent
