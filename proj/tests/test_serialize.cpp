#include <functional>

#include "descent/errors.hpp"
#include "descent/serialize.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace descent;
using testing::point;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InternalInconsistency;
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("divisors round-trip bit-exactly") {
  std::mt19937_64 rng(21);
  std::vector<FieldTower> towers{FieldTower{}, testing::multiquadratic({2}), testing::multiquadratic({-1, 3})};
  FieldTower q2 = testing::multiquadratic({2});
  towers.push_back(append_step_unchecked(q2, {Rational(-12), Rational(8)}));
  for (const auto& t : towers) {
    for (int i = 0; i < 10; ++i) {
      std::vector<ProjPoint> pts;
      while (pts.size() < 5) {
        ProjPoint p = point(testing::random_elem(rng, t));
        if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
      }
      if (i % 3 == 0) pts.push_back(ProjPoint::infinity(t));
      Divisor d(pts);
      json j = to_json(d);
      Divisor back = divisor_from_json(parse_document(j.dump()));
      CHECK(back == d);
      CHECK(back.tower() == d.tower());
      CHECK(to_json(back).dump() == j.dump());
    }
  }
}

TEST_CASE("maps and forms round-trip") {
  std::mt19937_64 rng(4);
  FieldTower t = testing::multiquadratic({5});
  for (int i = 0; i < 10; ++i) {
    Mobius m = testing::random_mobius(rng, t);
    CHECK(mobius_from_json(to_json(m), t, "m") == m);
  }
  TernaryForm f = TernaryForm::from_upper({1, testing::rat(1, 2), 0, -3, 2, 7});
  CHECK(form_from_json(to_json(f)) == f);
  CHECK(form_from_json(parse_document(R"({"diagonal": ["1", "1", "-1/3"]})")) ==
        TernaryForm::diagonal(1, 1, testing::rat(-1, 3)));
}

TEST_CASE("schema errors name the field") {
  CHECK(code_of([] { divisor_from_json(parse_document(R"({"points": [["1/0", "1"]]})")); }) == ErrorCode::InputError);
  CHECK(message_of([] { divisor_from_json(parse_document(R"({"points": [["1/0", "1"]]})")); })
            .starts_with("points[0][0]"));
  CHECK(message_of([] { divisor_from_json(parse_document(R"({"points": [["1", "x"]]})")); })
            .starts_with("points[0][1]"));
  CHECK(message_of([] {
          divisor_from_json(parse_document(R"({"tower": [["2"]], "points": [[["1", "2", "3"], "1"]]})"));
        }).starts_with("points[0][0]"));
  CHECK(message_of([] { divisor_from_json(parse_document(R"({"tower": [["4"]], "points": []})")); })
            .starts_with("tower[0]"));
  CHECK(message_of([] { divisor_from_json(parse_document(R"({"pts": []})")); }).find("points") != std::string::npos);
  CHECK(message_of([] { divisor_from_json(parse_document(R"({"points": [["0", "0"]]})")); })
            .starts_with("points[0]"));
  CHECK(message_of([] { divisor_from_json(parse_document(R"({"points": [["1", "1"], ["2", "2"]]})")); })
            .starts_with("points"));
  CHECK(code_of([] { parse_document("{\"points\": [}"); }) == ErrorCode::InputError);
  CHECK(code_of([] { form_from_json(parse_document(R"({"diagonal": ["1", "0", "1"]})")); }) == ErrorCode::InputError);
  CHECK(code_of([] { rational_from_json("3/-4", "q"); }) == ErrorCode::InputError);
  CHECK(rational_from_json("-6/4", "q") == testing::rat(-3, 2));
  CHECK(rational_from_json(7, "q") == 7);
}

TEST_CASE("verdict reports are deterministic") {
  std::mt19937_64 rng(13);
  FieldTower t = testing::multiquadratic({2});
  std::vector<ProjPoint> pts = testing::random_rational_points(rng, t, 4);
  FieldElem s = FieldElem::root(t, 0);
  pts.push_back(point(s + 1));
  pts.push_back(point(-s + 1));
  Divisor d = Divisor(pts).image(testing::random_mobius(rng, t));
  json a = verdict_to_json(decide(d)), b = verdict_to_json(decide(d));
  CHECK(a.dump() == b.dump());
  CHECK(a["outcome"] == "DefinedOnP1");
  CHECK_FALSE(a.contains("timings"));
  CHECK(verdict_to_json(decide(d), true).contains("timings"));
}
