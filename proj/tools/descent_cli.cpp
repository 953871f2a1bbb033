#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include <CLI11.hpp>

#include "descent/errors.hpp"
#include "descent/serialize.hpp"

using namespace descent;

namespace {

enum Exit { kOk = 0, kInput = 2, kUnsupported = 3, kInternal = 4 };

struct Options {
  std::string input = "-";
  std::uint64_t seed = 1;
  int max_retries = 50;
  unsigned long factor_bound = FactorConfig{}.trial_bound;
  bool pretty = false;
  bool compact = false;
  bool timings = false;
};

void add_common(CLI::App* sub, Options& o, bool with_input = true) {
  if (with_input) sub->add_option("--input", o.input, "JSON payload file, - for stdin");
  sub->add_option("--seed", o.seed, "randomness seed");
  sub->add_option("--max-retries", o.max_retries, "retry budget for generators")->check(CLI::PositiveNumber);
  sub->add_option("--factor-bound", o.factor_bound, "trial-division bound before Pollard rho")
      ->check(CLI::PositiveNumber);
  auto* pretty = sub->add_flag("--pretty", o.pretty, "indented output");
  auto* compact = sub->add_flag("--json", o.compact, "compact output (default)");
  pretty->excludes(compact);
  sub->add_flag("--timings", o.timings, "include per-stage timings");
}

json read_payload(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InputError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  return parse_document(text);
}

DecideOptions decide_options(const Options& o) {
  DecideOptions d;
  d.seed = o.seed;
  d.factor.trial_bound = o.factor_bound;
  return d;
}

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::InputError:
    case ErrorCode::ZeroRadicand:
    case ErrorCode::TowerMismatch:
    case ErrorCode::NotGalois:
    case ErrorCode::RepeatedPoints:
    case ErrorCode::DegreeTooSmall:
    case ErrorCode::UndefinedCrossRatio:
    case ErrorCode::SingularForm:
    case ErrorCode::PointNotOnConic:
    case ErrorCode::TangentLine:
    case ErrorCode::SplitSymbol:
    case ErrorCode::BadDegree:
    case ErrorCode::NotAnInvolution:
    case ErrorCode::HypothesesNotMet:
    case ErrorCode::GenusTooSmall:
      return kInput;
    default:
      return kInternal;
  }
}

int emit(const json& out, const Options& o, int code = kOk) {
  std::cout << (o.pretty ? out.dump(2) : out.dump()) << '\n';
  return code;
}

int cmd_analyze(const Options& o) {
  Divisor d = divisor_from_json(read_payload(o.input));
  Verdict v = decide(d, decide_options(o));
  json out = verdict_to_json(v, o.timings);
  out["tower"] = to_json(d.tower());
  return emit(out, o, v.outcome == Outcome::UnsupportedBase ? kUnsupported : kOk);
}

int cmd_equivalence(const Options& o) {
  json payload = read_payload(o.input);
  if (!payload.is_object() || !payload.contains("first") || !payload.contains("second"))
    throw Error(ErrorCode::InputError, "expected fields 'first' and 'second'");
  Divisor a = divisor_from_json(payload["first"], "first"), b = divisor_from_json(payload["second"], "second");
  if (a.tower() != b.tower()) throw Error(ErrorCode::TowerMismatch, "divisors live over different towers");
  std::optional<Mobius> m;
  if (a.degree() == b.degree()) m = pgl2_equivalent(a, b);
  json out{{"equivalent", m.has_value()}, {"witness", m ? to_json(*m) : json(nullptr)}};
  return emit(out, o);
}

int cmd_conic(const Options& o) {
  TernaryForm f = form_from_json(read_payload(o.input));
  FactorConfig factor;
  factor.trial_bound = o.factor_bound;
  HasseResult h = hasse_solvable(f, factor);
  json out = to_json(h);
  out["form"] = to_json(f);
  if (h.solvable) {
    auto p = find_point(f, factor);
    json pt = json::array();
    for (const auto& x : *p) pt.push_back(to_json(x));
    out["point"] = pt;
  } else {
    out["point"] = nullptr;
  }
  return emit(out, o);
}

struct SymbolFlags {
  long a = -1, b = -1;
  int n = 8;
  bool conic_model = false;
};

int cmd_counterexample(const Options& o, const SymbolFlags& flags, const CLI::App& sub) {
  CounterexampleSpec spec{flags.a, flags.b, flags.n, o.seed, o.max_retries};
  if (sub.count("--input")) {
    json payload = read_payload(o.input);
    if (!payload.is_object()) throw Error(ErrorCode::InputError, "expected an object");
    if (payload.contains("a") && !sub.count("--a")) spec.a = rational_from_json(payload["a"], "a").get_num();
    if (payload.contains("b") && !sub.count("--b")) spec.b = rational_from_json(payload["b"], "b").get_num();
    if (payload.contains("n") && !sub.count("--n")) {
      if (!payload["n"].is_number_integer()) throw Error(ErrorCode::InputError, "n: expected an integer");
      spec.n = payload["n"].get<int>();
    }
    if (payload.contains("seed") && !sub.count("--seed")) {
      if (!payload["seed"].is_number_unsigned()) throw Error(ErrorCode::InputError, "seed: expected an unsigned integer");
      spec.seed = payload["seed"].get<std::uint64_t>();
    }
  }
  DecideOptions d = decide_options(o);
  Counterexample ce = flags.conic_model ? gen_conic_model(spec, d) : gen_counterexample(spec, d);
  json out = counterexample_to_json(ce, o.timings);
  out["spec"] = {{"a", spec.a.get_str()}, {"b", spec.b.get_str()}, {"n", spec.n}, {"seed", spec.seed}};
  return emit(out, o);
}

int cmd_hyperelliptic(const Options& o) {
  json payload = read_payload(o.input);
  if (!payload.is_object() || !payload.contains("branch"))
    throw Error(ErrorCode::InputError, "expected field 'branch'");
  Divisor branch = divisor_from_json(payload["branch"], "branch");
  bool odd = false;
  if (payload.contains("odd_infinity")) {
    if (!payload["odd_infinity"].is_boolean()) throw Error(ErrorCode::InputError, "odd_infinity: expected a boolean");
    odd = payload["odd_infinity"].get<bool>();
  }
  return emit(hyperelliptic_to_json(hyperelliptic_branch_analysis(branch, odd, decide_options(o)), o.timings), o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Field of moduli versus field of definition for divisors on the projective line"};
  app.require_subcommand(1);
  Options o;
  SymbolFlags flags;

  auto* analyze = app.add_subcommand("analyze", "decide descent for a divisor");
  add_common(analyze, o);
  auto* equivalence = app.add_subcommand("equivalence", "PGL2 equivalence of two divisors");
  add_common(equivalence, o);
  auto* conic = app.add_subcommand("conic", "local-global analysis of a plane conic");
  add_common(conic, o);
  auto* hyper = app.add_subcommand("hyperelliptic", "branch-divisor analysis of a hyperelliptic curve");
  add_common(hyper, o);
  auto* counter = app.add_subcommand("counterexample", "divisor not defined over its field of moduli");
  add_common(counter, o);
  counter->add_option("--a", flags.a, "first symbol entry");
  counter->add_option("--b", flags.b, "second symbol entry");
  counter->add_option("--n", flags.n, "degree");
  counter->add_flag("--conic-model", flags.conic_model, "generate a divisor defined only on the conic");

  CLI11_PARSE(app, argc, argv);

  try {
    if (analyze->parsed()) return cmd_analyze(o);
    if (equivalence->parsed()) return cmd_equivalence(o);
    if (conic->parsed()) return cmd_conic(o);
    if (hyper->parsed()) return cmd_hyperelliptic(o);
    return cmd_counterexample(o, flags, *counter);
  } catch (const Error& e) {
    json err{{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    json err{{"error", {{"code", "InternalInconsistency"}, {"message", e.what()}}}};
    std::cerr << err.dump() << '\n';
    return kInternal;
  }
}
