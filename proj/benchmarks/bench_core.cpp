#include <benchmark/benchmark.h>

#include <memory>
#include <string>

#include "nordenlab/suites.hpp"

using namespace nordenlab;

namespace {

std::shared_ptr<const NordenChart> chart(const std::string& name) {
  return std::make_shared<const NordenChart>(load_chart_file(std::string(NORDENLAB_SPEC_DIR) + "/" + name + ".json"));
}

void jet_multiply(benchmark::State& state) {
  const auto nvars = static_cast<std::size_t>(state.range(0));
  std::vector<double> p(nvars, 0.3);
  const auto x = seed_variables(p, 3);
  Jet a = x[0] * x[1] + 1.0;
  Jet b = x[nvars - 1] - 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(jet_multiply)->Arg(2)->Arg(4)->Arg(8);

void expression_jet(benchmark::State& state) {
  const auto e = parse("exp(2*x1)*cos(2*x2) - x3*x4^2/(1 + x1^2)").bind(std::vector<std::string>{"x1", "x2", "x3", "x4"});
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  for (auto _ : state) benchmark::DoNotOptimize(eval_jet(e, p, 3));
}
BENCHMARK(expression_jet);

void levi_civita_curvature(benchmark::State& state) {
  const auto c = chart("holo_hyperbolic");
  const auto lc = Connection::levi_civita(c);
  const std::vector<double> p{0.2, 0.1, 0.5, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(curvature_at(lc, p));
}
BENCHMARK(levi_civita_curvature);

void cotangent_oracle(benchmark::State& state) {
  const auto c = chart(state.range(0) == 2 ? "holo_z" : "holo_hyperbolic");
  const auto lc = Connection::levi_civita(c);
  const auto p = sample_cotangent_points(*c, 42, 2)[1];
  for (auto _ : state) benchmark::DoNotOptimize(levi_civita_oracle(cotangent_context(lc, p, 3)));
}
BENCHMARK(cotangent_oracle)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void full_check(benchmark::State& state) {
  const auto c = chart("holo_z");
  SuiteOptions o;
  o.points = 5;
  for (auto _ : state) benchmark::DoNotOptimize(run_check(c, Suite::all, o));
}
BENCHMARK(full_check)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
