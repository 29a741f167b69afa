#include <doctest.h>

#include <cmath>
#include <random>

#include "nordenlab/expr.hpp"
#include "oracles.hpp"

using namespace nordenlab;

namespace {

Jet jet_of(const std::string& src, std::vector<std::string> coords, std::vector<double> point, int order) {
  return eval_jet(parse(src).bind(coords), point, order);
}

}  // namespace

TEST_CASE("layout sizes and multi-index lookup") {
  const auto& two = JetLayout::get(2);
  CHECK(two.count(0) == 1);
  CHECK(two.count(1) == 3);
  CHECK(two.count(2) == 6);
  CHECK(two.count(3) == 10);
  const auto& eight = JetLayout::get(8);
  CHECK(eight.count(3) == 165);
  const int xy[] = {0, 1};
  const int yx[] = {1, 0};
  CHECK(two.index_of(xy) == two.index_of(yx));
  CHECK(&JetLayout::get(2) == &two);
}

TEST_CASE("polynomial partials are exact") {
  const auto j = jet_of("x^2 + y", {"x", "y"}, {2.0, 1.0}, 2);
  CHECK(j.value() == 5.0);
  CHECK(j.partial({0}) == 4.0);
  CHECK(j.partial({1}) == 1.0);
  CHECK(j.partial({0, 0}) == 2.0);
  CHECK(j.partial({0, 1}) == 0.0);
  CHECK(j.partial({1, 1}) == 0.0);

  const auto c = jet_of("1", {"x", "y"}, {0.3, -7.0}, 3);
  CHECK(c.value() == 1.0);
  for (std::size_t m = 1; m < c.coefficients().size(); ++m) CHECK(c.coefficients()[m] == 0.0);

  const auto cubic = jet_of("x^2*y", {"x", "y"}, {1.5, -2.0}, 3);
  CHECK(cubic.partial({0, 0, 1}) == 2.0);
  CHECK(cubic.partial({0, 1, 0}) == 2.0);
  CHECK(cubic.partial({0, 0, 0}) == 0.0);
}

TEST_CASE("transcendental partials agree with central differences") {
  const std::vector<std::string> xy{"x", "y"};
  const auto e = parse("sin(x)*exp(y)").bind(xy);
  const std::vector<double> p{0.3, 0.2};
  const auto j = eval_jet(e, p, 2);
  auto f = [&](const std::vector<double>& q) { return e.eval(q); };
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(j.partial({static_cast<int>(i)}) == doctest::Approx(oracle::partial(f, p, i, 1e-4)).epsilon(1e-6));
    for (std::size_t k = 0; k < 2; ++k)
      CHECK(j.partial({static_cast<int>(i), static_cast<int>(k)}) ==
            doctest::Approx(oracle::second_partial(f, p, i, k, 1e-4)).epsilon(1e-6));
  }
}

TEST_CASE("derivative lowers the order and shifts coefficients") {
  const auto j = jet_of("x^3*y + cos(y)", {"x", "y"}, {0.7, 0.4}, 3);
  const auto d = j.derivative(0);
  CHECK(d.order() == 2);
  CHECK(d.value() == doctest::Approx(3 * 0.49 * 0.4));
  CHECK(d.partial({0}) == doctest::Approx(6 * 0.7 * 0.4));
  CHECK(d.partial({0, 1}) == doctest::Approx(6 * 0.7));
  CHECK(j.truncated(1).order() == 1);
}

TEST_CASE("binary operations truncate to the lower order") {
  const auto a = Jet::variable(2, 3, 0, 1.0);
  const auto b = Jet::variable(2, 1, 1, 2.0);
  CHECK((a * b).order() == 1);
  CHECK((a + b).order() == 1);
}

TEST_CASE("reciprocal of a vanishing jet is a domain error") {
  const auto x = Jet::variable(1, 2, 0, 0.0);
  CHECK_THROWS_AS(reciprocal(x), DomainError);
  const auto e = parse("1/x").bind(std::vector<std::string>{"x"});
  CHECK_THROWS_AS(eval_jet(e, std::vector<double>{0.0}, 2), DomainError);
}

TEST_CASE("jets over different variable counts do not mix") {
  CHECK_THROWS(Jet::variable(2, 1, 0, 0.0) + Jet::variable(3, 1, 0, 0.0));
}

TEST_CASE("property: product of evaluated polynomials equals evaluated product") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const std::vector<std::string> xyz{"x", "y", "z"};
  const char* polys[] = {"x^2*y - 3*z", "1 + x*y*z", "y^3 - x", "2*x^2 + z^2*y", "x - y + z"};
  for (int trial = 0; trial < 20; ++trial) {
    const std::string f = polys[trial % 5];
    const std::string g = polys[(trial * 3 + 1) % 5];
    const std::vector<double> p{u(rng), u(rng), u(rng)};
    const auto lhs = eval_jet(parse("(" + f + ")*(" + g + ")").bind(xyz), p, 3);
    const auto rhs = eval_jet(parse(f).bind(xyz), p, 3) * eval_jet(parse(g).bind(xyz), p, 3);
    for (std::size_t m = 0; m < lhs.coefficients().size(); ++m)
      CHECK(lhs.coefficients()[m] == doctest::Approx(rhs.coefficients()[m]).epsilon(1e-14).scale(1.0));
  }
}

namespace {

std::string random_expression(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_int_distribution<int> var(0, 1);
  std::uniform_real_distribution<double> num(0.5, 2.0);
  const char* names[] = {"x", "y"};
  switch (pick(rng)) {
    case 0:
    case 1:
      return names[var(rng)];
    case 2:
      return std::to_string(num(rng));
    case 3:
      return "(" + random_expression(rng, depth - 1) + " + " + random_expression(rng, depth - 1) + ")";
    case 4:
      return "(" + random_expression(rng, depth - 1) + " - " + random_expression(rng, depth - 1) + ")";
    case 5:
      return "(" + random_expression(rng, depth - 1) + " * " + random_expression(rng, depth - 1) + ")";
    case 6:
      return "(" + random_expression(rng, depth - 1) + ")/(2 + sin(" + random_expression(rng, depth - 1) + "))";
    case 7:
      return "sin(" + random_expression(rng, depth - 1) + ")";
    case 8:
      return "exp(" + random_expression(rng, depth - 1) + "/4)";
    default:
      return "(" + random_expression(rng, depth - 1) + ")^2";
  }
}

}  // namespace

TEST_CASE("property: partials of random expressions match finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<std::string> xy{"x", "y"};
  for (int trial = 0; trial < 60; ++trial) {
    const auto src = random_expression(rng, 3);
    CAPTURE(src);
    const auto e = parse(src).bind(xy);
    const std::vector<double> p{u(rng), u(rng)};
    const auto j = eval_jet(e, p, 2);
    auto f = [&](const std::vector<double>& q) { return e.eval(q); };
    const double scale = 1.0 + std::abs(p[0]) + std::abs(p[1]);
    const double h = 1e-4 * scale;
    for (int i = 0; i < 2; ++i) {
      const double fd = oracle::partial(f, p, static_cast<std::size_t>(i), h);
      CHECK(j.partial({i}) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
      for (int k = 0; k < 2; ++k) {
        const double fd2 = oracle::second_partial(f, p, static_cast<std::size_t>(i), static_cast<std::size_t>(k), h);
        CHECK(j.partial({i, k}) == doctest::Approx(fd2).epsilon(1e-5).scale(1.0));
      }
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  const auto e = parse("exp(x)*sin(y) + x^3/(1 + y^2)").bind(std::vector<std::string>{"x", "y"});
  const std::vector<double> p{0.123, -0.456};
  const auto a = eval_jet(e, p, 3);
  const auto b = eval_jet(e, p, 3);
  REQUIRE(a.coefficients().size() == b.coefficients().size());
  for (std::size_t m = 0; m < a.coefficients().size(); ++m) CHECK(a.coefficients()[m] == b.coefficients()[m]);
}

TEST_CASE("third partials from composition") {
  const auto e = parse("exp(x*y)").bind(std::vector<std::string>{"x", "y"});
  const auto j = eval_jet(e, std::vector<double>{0.5, 0.25}, 3);
  // d^3/dx^3 exp(xy) = y^3 exp(xy); d^3/dx^2dy = (2y + x y^2) exp(xy)
  const double ex = std::exp(0.125);
  CHECK(j.partial({0, 0, 0}) == doctest::Approx(0.25 * 0.25 * 0.25 * ex));
  CHECK(j.partial({0, 0, 1}) == doctest::Approx((2 * 0.25 + 0.5 * 0.0625) * ex));
}
