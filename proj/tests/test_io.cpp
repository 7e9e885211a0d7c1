#include "doctest.h"

#include "pettyfn/suites.hpp"

using namespace pettyfn;

namespace {

ParseError parse_failure(const std::string& text) {
  try {
    parse_descriptor(text);
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ParseError("", 0, 0);
}

}  // namespace

TEST_CASE("descriptors parse into bodies and functions") {
  const Descriptor sq = parse_descriptor(R"({"name": "sq", "type": "polytope", "vertices": [[0,0],[1,0],[1,1],[0,1]]})");
  REQUIRE(sq.is_body());
  CHECK(sq.name == "sq");
  CHECK(volume(sq.body()) == doctest::Approx(1.0));

  const Descriptor cube = parse_descriptor(R"({"type": "cube", "dim": 3, "half_width": 0.5})");
  CHECK(volume(cube.body()) == doctest::Approx(1.0));

  const Descriptor simplex = parse_descriptor(R"({"type": "simplex", "dim": 2})");
  CHECK(origin_inradius(simplex.body()) > 0.0);

  const Descriptor g = parse_descriptor(R"({"type": "gaussian", "covariance": [[2, 0.5], [0.5, 1]], "amplitude": 3})");
  REQUIRE_FALSE(g.is_body());
  CHECK(g.dim() == 2);
  CHECK(g.function().amplitude() == 3.0);

  const Descriptor grid = parse_descriptor(
      R"({"type": "grid_potential", "phi": {"box": {"lo": [-1], "hi": [1]}, "shape": [3], "values": ["inf", 0, "inf"]}})");
  CHECK(eval(grid.function(), Vec::Zero(1)) == doctest::Approx(1.0));

  CHECK(parse_descriptor(R"({"type": "gaussian"})", 3).dim() == 3);
  CHECK(parse_descriptor(R"({"type": "indicator", "body": {"type": "ball"}})", 4).dim() == 4);

  const Descriptor hg = parse_descriptor(R"({"type": "half_gaussian", "polar": true})");
  CHECK(is_integrable(hg.function()).status == Integrability::NotIntegrable);
}

TEST_CASE("parse errors carry line and column") {
  const ParseError syntax = parse_failure("{\n  \"type\": \"ball\",\n  \"dim\": 2,,\n}");
  CHECK(syntax.line() == 3);
  CHECK(syntax.column() >= 10);

  const ParseError radius = parse_failure("{\"type\": \"ball\",\n \"dim\": 2, \"radius\": -1}");
  CHECK(radius.line() == 2);
  CHECK(radius.column() == 12);
  CHECK(radius.diagnostic().rfind("2:12: ", 0) == 0);

  const ParseError kind = parse_failure(R"({"type": "dodecahedron"})");
  CHECK(kind.line() == 1);
  CHECK(std::string(kind.what()).find("dodecahedron") != std::string::npos);

  CHECK(parse_failure("[1, 2]").line() == 1);
  CHECK(parse_failure(R"({"name": "x"})").line() == 1);
  CHECK(parse_failure(R"({"type": "grid_potential", "phi": {"box": {"lo": [0], "hi": [1]}, "shape": [3], "values": [1, 2]}})")
            .line() == 1);
  CHECK_THROWS_AS(load_descriptor("/nonexistent/descriptor.json"), ParseError);
}

TEST_CASE("bodies and functions round trip through JSON") {
  const std::vector<std::string> texts{
      R"({"type": "polytope", "vertices": [[0,0],[2,0],[0,1]]})",
      R"({"type": "ball", "dim": 3, "radius": 0.5})",
      R"({"type": "zonotope", "generators": [[1,0],[0,1],[1,1]]})",
      R"({"type": "scaled", "factor": 2, "body": {"type": "ball", "dim": 2}})",
  };
  for (const auto& t : texts) {
    const ConvexBody b = parse_descriptor(t).body();
    const ConvexBody back = body_from_json(to_json(b));
    CHECK(volume(back) == doctest::Approx(volume(b)).epsilon(1e-12));
  }
  const GridFn grid = GridFn::sample(Box{Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)}, {3, 3},
                                     [](const Vec& x) { return x[0] > 0.5 ? kInf : x.squaredNorm(); });
  for (const LogConcaveFn& f :
       {LogConcaveFn::grid(grid), LogConcaveFn::gaussian(2, 0.7, 2.0), LogConcaveFn::radial(3, 1.5, 0.8), LogConcaveFn::half_gaussian(true),
        LogConcaveFn::exp_gauge(ConvexBody::ball(2, 1.0)), LogConcaveFn::zero(2)}) {
    const LogConcaveFn back = function_from_json(to_json(f));
    CHECK(back.kind() == f.kind());
    CHECK(back.dim() == f.dim());
    Vec x = Vec::Constant(f.dim(), 0.3);
    CHECK(eval(back, x) == doctest::Approx(eval(f, x)).epsilon(1e-12));
  }
}

TEST_CASE("reports round trip through JSON, including non-finite values") {
  VerificationReport r = make_report("check", "subject", 2.0, kInf, Direction::LessEqual, 1e-3, 0.1, true, 1e-2);
  r.detail = "d";
  const nlohmann::json j = to_json(r);
  CHECK(j.at("rhs") == "inf");
  CHECK(report_from_json(nlohmann::json::parse(j.dump())) == r);

  const VerificationReport s = skipped_report("check", "subject", "precondition");
  CHECK(report_from_json(to_json(s)) == s);
}

TEST_CASE("table output is aligned") {
  const std::vector<VerificationReport> rs{make_report("a", "long subject name", 1, 1, Direction::Equal, 1e-6),
                                           make_report("longer-name", "s", 2, 1, Direction::LessEqual, 1e-3)};
  const std::string t = format_table(rs);
  std::vector<std::size_t> status_col;
  std::size_t pos = 0;
  while ((pos = t.find('\n', pos)) != std::string::npos && pos + 1 < t.size()) {
    const std::size_t next = t.find('\n', pos + 1);
    const std::string line = t.substr(pos + 1, next - pos - 1);
    const std::size_t p = line.find("passed") != std::string::npos ? line.find("passed") : line.find("failed");
    if (p != std::string::npos) status_col.push_back(p);
    pos = next;
  }
  REQUIRE(status_col.size() == 2);
  CHECK(status_col[0] == status_col[1]);
}

TEST_CASE("t tokens") {
  CHECK(parse_log_t("exp(-9)") == -9.0);
  CHECK(parse_log_t("e^-3") == -3.0);
  CHECK(parse_log_t("1") == 0.0);
  CHECK(parse_log_t(" 0.5 ") == doctest::Approx(std::log(0.5)));
  CHECK_THROWS_AS(parse_log_t("-1"), ParseError);
  CHECK_THROWS_AS(parse_log_t("abc"), ParseError);
}

TEST_CASE("describe") {
  const std::string sq = describe(parse_descriptor(
      R"({"type": "exp_gauge", "body": {"type": "polytope", "vertices": [[-1,-1],[1,-1],[1,1],[-1,1]]}})"));
  CHECK(sq.find("‖f‖_1 = 8\n") != std::string::npos);
  const std::string hg = describe(parse_descriptor(R"({"type": "half_gaussian"})"));
  CHECK(hg.find("polar: NOT integrable, witness direction (-1)") != std::string::npos);
  const std::string ball = describe(parse_descriptor(R"({"type": "ball", "dim": 2})"));
  CHECK(ball.find("volume 3.141592654 (n=2)") != std::string::npos);
}

TEST_CASE("suites") {
  SuiteConfig c;
  c.suite = "identities";
  const SuiteResult ids = run_suite(c);
  CHECK(ids.reports.size() == 32);
  CHECK(ids.exit_code() == 0);

  c.suite = "falsify-fz52";
  const SuiteResult fz = run_suite(c);
  REQUIRE(fz.tables.size() == 1);
  CHECK(fz.tables[0].rows[3].quantity == 10.0);
  CHECK(fz.exit_code() == 0);
  c.threshold = 1e9;
  CHECK(run_suite(c).exit_code() == 1);

  c = {};
  c.suite = "theorem";
  c.inputs = {R"({"type": "gaussian", "dim": 2, "sigma": 1})"};
  const SuiteResult th = run_suite(c);
  REQUIRE(th.reports.size() == 1);
  CHECK(th.reports[0].lhs == doctest::Approx(2 * kPi * kPi * kPi).epsilon(1e-3));
  CHECK(run_suite(c).render("json") == th.render("json"));

  // A tiny tolerance scale turns the radial equality band into a failure.
  c.tolerance_scale = 1e-6;
  CHECK(run_suite(c).exit_code() == 1);

  c = {};
  c.suite = "integrability";
  c.inputs = {R"({"type": "half_gaussian"})"};
  const SuiteResult hg = run_suite(c);
  CHECK(hg.exit_code() == 0);
  bool skipped = false;
  for (const auto& r : hg.reports) skipped = skipped || r.status == Status::Skipped;
  CHECK(skipped);

  c = {};
  c.suite = "nope";
  CHECK_THROWS_AS(run_suite(c), ParseError);
  c.suite = "identities";
  c.dim = 7;
  CHECK_THROWS_AS(run_suite(c), ParseError);
  c = {};
  c.suite = "identities";
  c.inputs = {R"({"type": "gaussian", "dim": 2})"};
  CHECK_THROWS_AS(run_suite(c), ParseError);
}
