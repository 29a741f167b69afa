// nordenlab: load a chart spec and run verification suites.
//
// Exit codes: 0 all assertions pass, 1 an assertion failed, 2 usage or input error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "nordenlab/suites.hpp"

namespace {

using namespace nordenlab;

void emit(const std::string& body, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << body << std::flush;
    return;
  }
  const std::filesystem::path target(out_path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::invalid_argument("cannot write " + tmp.string());
    f << body;
    if (!f.flush()) throw std::invalid_argument("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks of Norden structures on the generalized tangent and cotangent bundles"};
  app.set_version_flag("--version", std::string(library_version()));
  app.require_subcommand(1);

  SuiteOptions opts;
  std::string spec_path;
  std::string suite_name = "all";
  std::string format = "text";
  std::string out_path;
  std::vector<double> fiber_box;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("spec", spec_path, "chart spec (JSON)")->required();
    cmd->add_option("--points", opts.points, "number of sample points")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "sampling seed")->capture_default_str();
    cmd->add_option("--tol", opts.tol, "tolerance")->capture_default_str();
    cmd->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
    cmd->add_option("--out", out_path, "write the report here instead of stdout");
  };

  auto* validate = app.add_subcommand("validate", "check the Norden structure invariants of a chart");
  add_common(validate);
  auto* check = app.add_subcommand("check", "run a verification suite");
  add_common(check);
  check->add_option("--suite", suite_name, "base, generalized, cotangent, kahler-flat or all")
      ->check(CLI::IsMember({"base", "generalized", "cotangent", "kahler-flat", "all"}))
      ->capture_default_str();
  check->add_option("--order", opts.order, "jet order")->capture_default_str();
  check->add_option("--fiber-box", fiber_box, "fibre sampling box lo,hi")->delimiter(',')->expected(2);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (fiber_box.size() == 2) opts.fiber_box = {fiber_box[0], fiber_box[1]};
    auto chart = std::make_shared<const NordenChart>(load_chart_file(spec_path));
    const SuiteReport report =
        validate->parsed() ? run_validate(chart, opts) : run_check(chart, parse_suite(suite_name), opts);
    emit(format == "json" ? to_json(report) : to_text(report), out_path);
    return report.exit_code();
  } catch (const ChartError& e) {
    std::cerr << "nordenlab: " << e.what() << "\n";
  } catch (const SamplingError& e) {
    std::cerr << "nordenlab: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "nordenlab: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "nordenlab: evaluation failed: " << e.what() << "\n";
  }
  return 2;
}
