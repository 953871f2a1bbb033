#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "descent/moduli.hpp"

namespace descent {

enum class Outcome {
  DefinedOnP1,     // descends to a divisor on the projective line over the field of moduli
  DefinedOnConic,  // defined over the field of moduli on a pointless conic
  NotDefined,      // the field of moduli is not a field of definition
  DefinedOverFom,  // defined over the field of moduli; P1 versus conic not resolved
  UnsupportedBase,
};

enum class FastRule { OddDegree, DegreeFour, DegreeSix, NonCyclic, CyclicOdd };

std::string to_string(Outcome o);
std::string to_string(FastRule r);

/// The model B^{-1}(D), given by a binary form over the field of moduli.
struct P1Model {
  BinaryForm form;  // coefficients in the field of moduli tower
  Mobius change;    // B, over the divisor's tower
};

/// A rational point on the compression, used when no explicit model was built.
struct PointWitness {
  TernaryForm form;
  ConicPoint point;
};

struct ConicModel {
  TernaryForm form;
  CompressedDivisor compressed;
  std::vector<PlaceEval> failing;
};

struct Obstruction {
  TernaryForm form;
  std::vector<PlaceEval> failing;
  std::optional<std::vector<QuaternionSymbol>> symbols;
};

struct FastPath {
  FastRule rule;
};

struct Refusal {
  std::string reason;
};

using Certificate = std::variant<P1Model, PointWitness, ConicModel, Obstruction, FastPath, Refusal>;

struct CompressionSummary {
  std::optional<TernaryForm> form;  // absent when the field of moduli is not Q
  std::optional<bool> has_point;    // decided only over Q
  std::vector<PlaceEval> evaluations;
  std::vector<int> orbit_degrees;
  RamificationLedger ledger;
};

struct Verdict {
  Outcome outcome = Outcome::UnsupportedBase;
  std::size_t degree = 0;
  Subfield fom;
  std::vector<int> moduli_subgroup;
  std::size_t aut_order = 0;
  GroupClass aut_class;
  std::optional<CompressionSummary> compression;
  Certificate certificate = Refusal{};
  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
};

struct DecideOptions {
  FactorConfig factor;
  std::uint64_t seed = 1;
  bool build_models = true;
};

Verdict decide(const Divisor& d, const DecideOptions& options = {});

/// Explicit model over the field of moduli. Requires |H| <= 2, or D stable
/// under H. Throws ModelConstructionFailed otherwise.
P1Model build_p1_model(const Divisor& d, const ModuliData& data, const AutGroup& aut, const DecideOptions& options = {});

struct CertificateCheck {
  bool ok;
  std::string reason;
};

CertificateCheck verify_certificate(const Divisor& d, const Verdict& v, const FactorConfig& factor = {});

}  // namespace descent
