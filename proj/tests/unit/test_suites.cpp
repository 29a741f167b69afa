#include <doctest.h>

#include <nlohmann/json.hpp>

#include "nordenlab/suites.hpp"
#include "oracles.hpp"

using namespace nordenlab;

namespace {

SuiteOptions small(std::size_t points = 4) {
  SuiteOptions o;
  o.points = points;
  return o;
}

void check_status_invariant(const SuiteReport& r) {
  for (const auto& c : r.checks) {
    CAPTURE(c.id);
    if (c.status == CheckStatus::pass) CHECK(c.max_violation <= c.tol);
    if (c.status == CheckStatus::fail) CHECK_FALSE(c.max_violation <= c.tol);
    CHECK_FALSE(c.anchor.empty());
  }
}

}  // namespace

TEST_CASE("suite names") {
  CHECK(parse_suite("base") == Suite::base);
  CHECK(parse_suite("generalized") == Suite::generalized);
  CHECK(parse_suite("cotangent") == Suite::cotangent);
  CHECK(parse_suite("kahler-flat") == Suite::kahler_flat);
  CHECK(parse_suite("all") == Suite::all);
  CHECK_THROWS_AS(parse_suite("everything"), std::invalid_argument);
  for (auto s : {Suite::base, Suite::generalized, Suite::cotangent, Suite::kahler_flat, Suite::all})
    CHECK(parse_suite(to_string(s)) == s);
}

TEST_CASE("option validation") {
  const auto c = oracle::chart("flat");
  auto o = small();
  o.points = 0;
  CHECK_THROWS_AS(run_check(c, Suite::base, o), std::invalid_argument);
  o = small();
  o.order = minimum_order(Suite::cotangent) - 1;
  CHECK_THROWS_AS(run_check(c, Suite::cotangent, o), std::invalid_argument);
  o = small();
  o.order = 4;
  CHECK_THROWS_AS(run_check(c, Suite::base, o), std::invalid_argument);
  o = small();
  o.fiber_box = {1.0, -1.0};
  CHECK_THROWS_AS(run_check(c, Suite::cotangent, o), std::invalid_argument);
  o = small();
  o.tol = -1.0;
  CHECK_THROWS_AS(run_check(c, Suite::base, o), std::invalid_argument);
}

TEST_CASE("flat chart: every suite passes") {
  const auto r = run_check(oracle::chart("flat"), Suite::all, small());
  CHECK(r.passed());
  CHECK(r.exit_code() == 0);
  check_status_invariant(r);
  for (const auto& c : r.checks) {
    CAPTURE(c.id);
    CHECK(c.status != CheckStatus::fail);
    CHECK(c.status != CheckStatus::hypothesis_not_met);
  }
  REQUIRE(r.find("kf.tilde-curvature") != nullptr);
  CHECK(r.find("kf.tilde-curvature")->status == CheckStatus::pass);
  CHECK(r.find("nope") == nullptr);
}

TEST_CASE("catalog order is fixed and shared across charts") {
  const auto a = run_check(oracle::chart("flat"), Suite::all, small(3));
  const auto b = run_check(oracle::chart("conformal"), Suite::all, small(3));
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) CHECK(a.checks[i].id == b.checks[i].id);
  CHECK(a.checks.front().id == "norden.metric-symmetric");
  std::size_t last_group = 0;
  const char* groups[] = {"norden.", "base.", "gen.", "cot.", "kf."};
  for (const auto& c : a.checks) {
    std::size_t g = 0;
    while (c.id.rfind(groups[g], 0) != 0) ++g;
    CHECK(g >= last_group);
    last_group = g;
  }
}

TEST_CASE("hypotheses that are not met do not fail the run") {
  SUBCASE("curved Kahler chart") {
    const auto r = run_check(oracle::chart("holo_hyperbolic"), Suite::kahler_flat, small(2));
    const auto* kf = r.find("kf.tilde-curvature");
    REQUIRE(kf != nullptr);
    CHECK(kf->status == CheckStatus::hypothesis_not_met);
    CHECK(kf->note.find("R != 0") != std::string::npos);
    CHECK(r.exit_code() == 0);
  }
  SUBCASE("non-integrable J skips the canonical-connection checks") {
    const auto r = run_check(oracle::chart("nonintegrable_J"), Suite::base, small(2));
    CHECK(r.find("base.canonical-metric")->status == CheckStatus::hypothesis_not_met);
    CHECK(r.exit_code() == 0);
  }
  SUBCASE("holo_z is flat Kahler, so its kahler-flat checks run and pass") {
    const auto r = run_check(oracle::chart("holo_z"), Suite::kahler_flat, small(4));
    CHECK(r.find("kf.tilde-nabla-j")->status == CheckStatus::pass);
    CHECK(r.find("kf.tilde-curvature")->status == CheckStatus::pass);
  }
}

TEST_CASE("comparison-only records never affect the exit code") {
  const auto r = run_check(oracle::chart("holo_hyperbolic"), Suite::cotangent, small(2));
  const auto* hh = r.find("cot.closed-form-compare-hh");
  REQUIRE(hh != nullptr);
  CHECK(hh->status == CheckStatus::comparison_only);
  CHECK(hh->max_violation > hh->tol);
  CHECK(r.exit_code() == 0);
  check_status_invariant(r);
}

TEST_CASE("a failing structure stops the run with exit code 1") {
  const auto r = run_check(oracle::chart("riemannian"), Suite::all, small());
  CHECK(r.exit_code() == 1);
  const auto* js = r.find("norden.j-g-symmetric");
  REQUIRE(js != nullptr);
  CHECK(js->status == CheckStatus::fail);
  CHECK(js->max_violation == 2.0);
  CHECK(r.find("gen.jhat-square") == nullptr);
  const auto v = run_validate(oracle::chart("riemannian"), small());
  CHECK(v.exit_code() == 1);
}

TEST_CASE("JSON schema") {
  auto o = small(3);
  o.seed = 7;
  const auto r = run_check(oracle::chart("flat"), Suite::cotangent, o);
  const auto text = to_json(r);
  const auto j = nlohmann::json::parse(text);
  CHECK(j["suite"] == "cotangent");
  CHECK(j["chart"] == "flat");
  CHECK(j["meta"]["seed"] == 7);
  CHECK(j["meta"]["points"] == 3);
  CHECK(j["meta"]["order"] == 3);
  CHECK(j["meta"]["tol"] == 1e-8);
  CHECK(j["meta"]["version"] == std::string(library_version()));
  REQUIRE(j["checks"].is_array());
  REQUIRE(j["checks"].size() == r.checks.size());
  for (std::size_t i = 0; i < r.checks.size(); ++i) {
    const auto& c = j["checks"][i];
    CHECK(c["id"] == r.checks[i].id);
    CHECK(c.contains("anchor"));
    CHECK(c.contains("max_violation"));
    CHECK(c.contains("tol"));
    CHECK(c.contains("status"));
    const std::string s = c["status"];
    CHECK((s == "pass" || s == "fail" || s == "hypothesis-not-met" || s == "comparison-only"));
  }
  CHECK(text.find("\"suite\"") < text.find("\"chart\""));
  CHECK(text.find("\"chart\"") < text.find("\"meta\""));
  CHECK(text.find("\"meta\"") < text.find("\"checks\""));
  CHECK(to_json(run_check(oracle::chart("flat"), Suite::cotangent, o)) == text);
}

TEST_CASE("text report lists one line per check") {
  const auto r = run_validate(oracle::chart("flat"), small());
  const auto t = to_text(r);
  for (const auto& c : r.checks) CHECK(t.find(c.id) != std::string::npos);
}
