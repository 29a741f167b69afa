#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch() {
  const fs::path dir(NORDENLAB_SCRATCH_DIR);
  fs::create_directories(dir);
  return dir;
}

Run run(const std::string& args) {
  static int counter = 0;
  const auto dir = scratch();
  const auto out = dir / ("out" + std::to_string(counter) + ".txt");
  const auto err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string("\"") + NORDENLAB_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string spec(const std::string& name) { return std::string("\"") + NORDENLAB_SPEC_DIR + "/" + name + ".json\""; }

}  // namespace

TEST_CASE("validate exit codes") {
  const auto ok = run("validate " + spec("flat"));
  CHECK(ok.code == 0);
  CHECK(ok.out.find("norden.j-g-symmetric") != std::string::npos);

  const auto bad = run("validate " + spec("riemannian"));
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL") != std::string::npos);

  const auto broken = scratch() / "broken.json";
  std::ofstream(broken) << "{ \"name\": \"broken\", \"dimension\": 2,";
  const auto malformed = run("validate \"" + broken.string() + "\"");
  CHECK(malformed.code == 2);
  CHECK(malformed.err.find("malformed JSON") != std::string::npos);

  const auto missing = run("validate \"" + (scratch() / "missing.json").string() + "\"");
  CHECK(missing.code == 2);
}

TEST_CASE("syntax errors in expressions are reported with their position") {
  const auto p = scratch() / "syntax.json";
  std::ofstream(p) << R"js({"name": "s", "dimension": 2, "coordinates": ["x", "y"],
    "metric": [["1", "0"], ["0", "x^(-1)"]], "complex_structure": [["0", "-1"], ["1", "0"]],
    "sample_box": [[-1, 1], [-1, 1]]})js";
  const auto r = run("validate \"" + p.string() + "\"");
  CHECK(r.code == 2);
  CHECK(r.err.find("exponent must be a nonnegative integer") != std::string::npos);
  CHECK(r.err.find("position 2") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run("check " + spec("flat") + " --suite everything").code == 2);
  CHECK(run("check " + spec("flat") + " --points 0").code == 2);
  CHECK(run("check " + spec("flat") + " --order 1 --suite cotangent").code == 2);
  CHECK(run("check " + spec("flat") + " --format xml").code == 2);
  CHECK(run("frobnicate").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("check suites") {
  const auto all = run("check " + spec("flat") + " --suite all --points 5");
  CHECK(all.code == 0);
  CHECK(all.out.find("FAIL") == std::string::npos);

  const auto kf = run("check " + spec("holo_hyperbolic") + " --suite kahler-flat --points 2 --format json");
  CHECK(kf.code == 0);
  const auto j = nlohmann::json::parse(kf.out);
  bool not_met = false;
  for (const auto& c : j["checks"])
    if (c["status"] == "hypothesis-not-met") not_met = true;
  CHECK(not_met);

  CHECK(run("check " + spec("riemannian") + " --suite base").code == 1);
}

TEST_CASE("JSON output is byte-identical across runs") {
  const std::string args = "check " + spec("flat") + " --suite cotangent --points 5 --seed 7 --format json";
  const auto a = run(args);
  const auto b = run(args);
  CHECK(a.code == 0);
  CHECK_FALSE(a.out.empty());
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["meta"]["seed"] == 7);
  CHECK(j["meta"]["points"] == 5);
  const auto other = run("check " + spec("flat") + " --suite cotangent --points 5 --seed 8 --format json");
  CHECK(other.out != a.out);
}

TEST_CASE("--out writes the report to a file and nothing to stdout") {
  const auto target = scratch() / "report.json";
  fs::remove(target);
  const auto r = run("check " + spec("holo_z") + " --suite base --points 3 --format json --out \"" + target.string() + "\"");
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  REQUIRE(fs::exists(target));
  CHECK_FALSE(fs::exists(fs::path(target.string() + ".tmp")));
  CHECK(nlohmann::json::parse(slurp(target))["suite"] == "base");
}

TEST_CASE("--fiber-box is honoured") {
  const auto a = run("check " + spec("holo_z") + " --suite cotangent --points 4 --format json --fiber-box -1,1");
  const auto b = run("check " + spec("holo_z") + " --suite cotangent --points 4 --format json --fiber-box 2,3");
  CHECK(a.code == 0);
  CHECK(b.code == 0);
  const auto ja = nlohmann::json::parse(a.out);
  const auto jb = nlohmann::json::parse(b.out);
  CHECK(ja["meta"]["fiber_box"] == nlohmann::json::array({-1.0, 1.0}));
  CHECK(jb["meta"]["fiber_box"] == nlohmann::json::array({2.0, 3.0}));
  CHECK(run("check " + spec("holo_z") + " --fiber-box 1,-1").code == 2);
}
