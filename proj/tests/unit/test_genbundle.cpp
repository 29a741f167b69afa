#include <doctest.h>

#include <cmath>
#include <random>

#include "nordenlab/genbundle.hpp"
#include "oracles.hpp"

using namespace nordenlab;

namespace {

SectionValue sv(std::vector<double> v, std::vector<double> f) { return {std::move(v), std::move(f)}; }

std::vector<double> form_values(const SectionJet& s) {
  std::vector<double> out;
  for (const auto& x : s.form) out.push_back(x.value());
  return out;
}

double max_value(const SectionJet& s) {
  double m = 0;
  for (const auto& x : s.stacked()) m = std::max(m, std::abs(x.value()));
  return m;
}

std::string random_poly(std::mt19937_64& rng, const std::vector<std::string>& xs) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::string s = std::to_string(u(rng));
  for (const auto& a : xs) {
    s += " + " + std::to_string(u(rng)) + "*" + a;
    for (const auto& b : xs) s += " + " + std::to_string(u(rng)) + "*" + a + "*" + b;
  }
  return s;
}

SectionJet random_section(const NordenChart& c, std::mt19937_64& rng, std::span<const Jet> coords) {
  std::vector<std::string> v, f;
  for (std::size_t i = 0; i < c.dimension; ++i) {
    v.push_back(random_poly(rng, c.coordinates));
    f.push_back(random_poly(rng, c.coordinates));
  }
  return make_section(c, v, f).evaluate(coords);
}

SectionJet jacobi(const Christoffel& G, const SectionJet& a, const SectionJet& b, const SectionJet& c) {
  return bracket(G, bracket(G, a, b), c) + bracket(G, bracket(G, b, c), a) + bracket(G, bracket(G, c, a), b);
}

}  // namespace

TEST_CASE("symplectic pairing") {
  CHECK(pair_symplectic(sv({1, 0}, {0, 0}), sv({0, 0}, {1, 0})) == 0.5);
  const auto s = sv({0.3, -1.2}, {2.0, 0.7});
  CHECK(pair_symplectic(s, s) == 0.0);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 50; ++k) {
    const auto a = sv({u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)});
    const auto b = sv({u(rng), u(rng), u(rng)}, {u(rng), u(rng), u(rng)});
    CHECK(pair_symplectic(a, b) == -pair_symplectic(b, a));
    CHECK(pair_metric(a, b) == pair_metric(b, a));
  }
}

TEST_CASE("neutral pairing") {
  CHECK(pair_metric(sv({1, 0}, {1, 0}), sv({1, 0}, {1, 0})) == -1.0);
  CHECK(pair_metric(sv({1, 0}, {0, 0}), sv({0, 1}, {0, 0})) == 0.0);
  for (std::size_t n : {1u, 2u, 4u}) {
    const auto sig = signature(pair_metric_gram(n));
    CHECK(sig.positive == static_cast<int>(n));
    CHECK(sig.negative == static_cast<int>(n));
    CHECK(sig.zero == 0);
  }
}

TEST_CASE("bracket on the flat chart") {
  const auto c = oracle::chart("flat");
  const std::vector<double> p{0.4, -0.3};
  const auto local = local_geometry(Connection::levi_civita(c), p, 3);
  const auto s = make_section(*c, {"1", "0"}, {"0", "0"}).evaluate(local.coords);
  const auto t = make_section(*c, {"0", "0"}, {"0", "x"}).evaluate(local.coords);
  const auto b = bracket(local.gamma, s, t);
  CHECK(b.value().vector == std::vector<double>{0, 0});
  CHECK(b.value().form == std::vector<double>{0, 1});
  CHECK(max_value(bracket(local.gamma, s, s)) == 0.0);
}

TEST_CASE("bracket is antisymmetric and Leibniz on curved charts") {
  const auto c = oracle::chart("holo_hyperbolic");
  std::mt19937_64 rng(2);
  for (const auto& pt : sample_points(*c, 2, 4)) {
    const auto local = local_geometry(Connection::levi_civita(c), pt.point, 3);
    const auto s = random_section(*c, rng, local.coords);
    const auto t = random_section(*c, rng, local.coords);
    CHECK(max_value(bracket(local.gamma, s, t) + bracket(local.gamma, t, s)) <= 1e-12);

    // [s, f t] = f [s, t] + X(f) t
    const auto f = eval_jet(parse("1 + x1*x3 - x2^2").bind(c->coordinates), pt.point, 3);
    const auto lhs = bracket(local.gamma, s, scale(f, t));
    Jet Xf = s.vector[0] * f.derivative(0);
    for (std::size_t i = 1; i < 4; ++i) Xf += s.vector[i] * f.derivative(i);
    const auto rhs = scale(f, bracket(local.gamma, s, t)) + scale(Xf, t);
    CHECK(max_value(lhs - rhs) <= 1e-11);
  }
}

TEST_CASE("Jacobi defect vanishes exactly when the curvature does") {
  SUBCASE("flat") {
    for (const char* name : {"flat", "holo_z"}) {
      const auto c = oracle::chart(name);
      for (const auto& pt : sample_points(*c, 5, 3)) {
        const auto local = local_geometry(Connection::levi_civita(c), pt.point, 3);
        const auto basis = basis_sections(2, local.coords[0]);
        for (const auto& a : basis)
          for (const auto& b : basis)
            for (const auto& d : basis) CHECK(max_value(jacobi(local.gamma, a, b, d)) <= 1e-10);
      }
    }
  }
  SUBCASE("curved: the defect on (d_i, d_j, dx^l) is R^l_{ijq} dx^q") {
    const auto c = oracle::chart("holo_hyperbolic");
    const auto lc = Connection::levi_civita(c);
    const std::vector<double> p{0.3, 0.2, 0.6, 0.1};
    const auto local = local_geometry(lc, p, 3);
    const auto Rfd = oracle::curvature([&](const std::vector<double>& q) { return oracle::christoffel(*c, q); }, p);
    CHECK(oracle::max_abs(Rfd) >= 1e-4);
    const auto& x = local.coords[0];
    double largest = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        for (std::size_t l = 0; l < 4; ++l) {
          const auto d = jacobi(local.gamma, coordinate_vector(4, i, x), coordinate_vector(4, j, x), coordinate_form(4, l, x));
          const auto form = form_values(d);
          for (std::size_t q = 0; q < 4; ++q) CHECK(std::abs(form[q] - Rfd(l, i, j, q)) <= 1e-5);
          largest = std::max(largest, max_value(d));
        }
    CHECK(largest >= 1e-6);
  }
}

TEST_CASE("J-hat on the flat chart") {
  const auto c = oracle::chart("flat");
  const std::vector<double> p{0.1, 0.9};
  const auto op = build_Jhat(*c, p);
  const auto J = structure_at(*c, p);
  const auto g = metric_at(*c, p);
  CHECK(op.A.rows() == 2);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(op.A(r, k) == J(r, k));
      CHECK(op.B(r, k) == 0.0);
      CHECK(op.C(r, k) == g(r, k));
      CHECK(op.D(r, k) == -J(k, r));
    }
  const auto M = op.full();
  const auto M2 = M * M;
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t k = 0; k < 4; ++k) CHECK(M2(r, k) == (r == k ? -1.0 : 0.0));
  CHECK(classify_calibration(g) == Calibration::pseudo_calibrated);
  Matrix<double> pos(2, 2, 0.0);
  pos(0, 0) = 2;
  pos(1, 1) = 1;
  CHECK(classify_calibration(pos) == Calibration::calibrated);
}

TEST_CASE("J-hat: square, symplectic invariance and the induced metric at random points") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const char* name : {"holo_z", "conformal", "holo_hyperbolic", "nonintegrable_J"}) {
    CAPTURE(name);
    const auto c = oracle::chart(name);
    const std::size_t n = c->dimension;
    for (const auto& pt : sample_points(*c, 6, 5)) {
      const auto op = build_Jhat(*c, pt.point);
      const auto M = op.full();
      const auto M2 = M * M;
      for (std::size_t r = 0; r < 2 * n; ++r)
        for (std::size_t k = 0; k < 2 * n; ++k) CHECK(std::abs(M2(r, k) + (r == k ? 1.0 : 0.0)) <= 1e-10);
      const auto g = metric_at(*c, pt.point);
      for (int trial = 0; trial < 5; ++trial) {
        SectionValue a{std::vector<double>(n), std::vector<double>(n)}, b = a;
        for (std::size_t i = 0; i < n; ++i) {
          a.vector[i] = u(rng);
          a.form[i] = u(rng);
          b.vector[i] = u(rng);
          b.form[i] = u(rng);
        }
        CHECK(std::abs(pair_symplectic(op.apply(a), op.apply(b)) - pair_symplectic(a, b)) <= 1e-10);
        SectionValue X{a.vector, std::vector<double>(n, 0.0)}, Y{b.vector, std::vector<double>(n, 0.0)};
        double gxy = 0;
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t k = 0; k < n; ++k) gxy += g(i, k) * X.vector[i] * Y.vector[k];
        CHECK(std::abs(2.0 * pair_symplectic(X, op.apply(Y)) - gxy) <= 1e-10);
      }
    }
  }
}

TEST_CASE("generalized Nijenhuis tensor") {
  SUBCASE("flat: zero") {
    const auto c = oracle::chart("flat");
    CHECK(max_basis_nijenhuis(local_geometry(Connection::levi_civita(c), std::vector<double>{0.2, 0.1}, 3)) == 0.0);
  }
  SUBCASE("holo_z with the canonical connection") {
    const auto c = oracle::chart("holo_z");
    const auto pts = sample_points(*c, 42, 20);
    const auto D = canonical_connection(c, pts, 1e-8);
    for (const auto& pt : pts) CHECK(max_basis_nijenhuis(local_geometry(D, pt.point, 3)) <= 1e-7);
  }
  SUBCASE("non-integrable J") {
    const auto c = oracle::chart("nonintegrable_J");
    const auto lc = Connection::levi_civita(c);
    for (const auto& pt : sample_points(*c, 1, 5)) CHECK(max_basis_nijenhuis(local_geometry(lc, pt.point, 3)) > 1e-3);
  }
  SUBCASE("antisymmetric and tensorial") {
    const auto c = oracle::chart("conformal");
    const auto lc = Connection::levi_civita(c);
    std::mt19937_64 rng(4);
    for (const auto& pt : sample_points(*c, 1, 3)) {
      const auto local = local_geometry(lc, pt.point, 3);
      const auto s = random_section(*c, rng, local.coords);
      const auto t = random_section(*c, rng, local.coords);
      CHECK(max_value(nijenhuis_generalized(local, s, t) + nijenhuis_generalized(local, t, s)) <= 1e-11);
      const auto f = eval_jet(parse("2 + x*y").bind(c->coordinates), pt.point, 3);
      const auto lhs = nijenhuis_generalized(local, s, scale(f, t));
      const auto rhs = scale(f.truncated(lhs.order()), nijenhuis_generalized(local, s, t));
      CHECK(max_value(lhs - rhs) <= 1e-10 * (1.0 + max_value(lhs)));
    }
  }
}

TEST_CASE("integrability equivalence") {
  SUBCASE("holo_z with the canonical connection") {
    const auto c = oracle::chart("holo_z");
    const auto pts = sample_points(*c, 42, 20);
    const auto rep = integrability_conditions(canonical_connection(c, pts, 1e-8), pts, 1e-7);
    CHECK(rep.conditions_hold());
    CHECK(rep.integrable());
    CHECK(rep.max().nijenhuis_jhat <= 1e-7);
  }
  SUBCASE("flat Levi-Civita gives exact zeros") {
    const auto c = oracle::chart("flat");
    const auto pts = sample_points(*c, 42, 5);
    const auto m = integrability_conditions(Connection::levi_civita(c), pts, 1e-12).max();
    CHECK(m.nijenhuis_J == 0.0);
    CHECK(m.nabla_J == 0.0);
    CHECK(m.d_nabla_g_condition == 0.0);
    CHECK(m.nijenhuis_jhat == 0.0);
  }
  SUBCASE("torsionful flat connection breaks a condition and integrability together") {
    const auto c = oracle::chart("torsionful");
    const auto pts = sample_points(*c, 42, 5);
    const auto rep = integrability_conditions(Connection::declared(c), pts, 1e-8);
    // (d g)(JX,Y) + (d g)(X,JY) is antisymmetric and J-invariant, hence zero in two dimensions.
    CHECK(rep.max().d_nabla_g_condition <= 1e-12);
    CHECK(rep.max().nabla_J > 1e-3);
    CHECK_FALSE(rep.conditions_hold());
    CHECK_FALSE(rep.integrable());
    CHECK(rep.equivalence_observed());
  }
  SUBCASE("torsion in four dimensions breaks the d g condition") {
    const auto c = oracle::chart("holo_hyperbolic");
    const auto lc = Connection::levi_civita(c);
    const auto perturbed = Connection::custom(c, "perturbed", lc.order_loss(), [lc](const NordenChart&, std::span<const Jet> x) {
      auto G = lc.christoffel(x);
      G(0, 2, 0) += 0.3;
      return G;
    });
    const auto rep = integrability_conditions(perturbed, sample_points(*c, 42, 3), 1e-8);
    CHECK(rep.max().d_nabla_g_condition > 1e-3);
    CHECK(rep.max().nijenhuis_jhat > 1e-3);
    CHECK(rep.equivalence_observed());
  }
  SUBCASE("non-integrable J") {
    const auto c = oracle::chart("nonintegrable_J");
    const auto pts = sample_points(*c, 42, 5);
    const auto rep = integrability_conditions(Connection::levi_civita(c), pts, 1e-8);
    CHECK(rep.max().nijenhuis_J > 1e-3);
    CHECK(rep.max().nijenhuis_jhat >= 1e-3);
    CHECK(rep.equivalence_observed());
  }
}

TEST_CASE("projection identity holds for any connection") {
  std::mt19937_64 rng(9);
  for (const char* name : {"flat", "holo_z", "conformal", "nonintegrable_J"}) {
    CAPTURE(name);
    const auto c = oracle::chart(name);
    const auto lc = Connection::levi_civita(c);
    for (const auto& pt : sample_points(*c, 42, name == std::string("nonintegrable_J") ? 5 : 20)) {
      const auto local = local_geometry(lc, pt.point, 3);
      const ComplexSectionJet s{random_section(*c, rng, local.coords), random_section(*c, rng, local.coords)};
      const ComplexSectionJet t{random_section(*c, rng, local.coords), random_section(*c, rng, local.coords)};
      const auto r = projection_identity(local, s, t);
      CHECK(r.plus <= 1e-7);
      CHECK(r.minus <= 1e-7);
    }
  }
}

TEST_CASE("projector algebra") {
  const auto c = oracle::chart("holo_hyperbolic");
  std::mt19937_64 rng(10);
  for (const auto& pt : sample_points(*c, 42, 5)) {
    const auto local = local_geometry(Connection::levi_civita(c), pt.point, 3);
    const auto jh = jhat_matrix(local.structure);
    const ComplexSectionJet s{random_section(*c, rng, local.coords), random_section(*c, rng, local.coords)};
    const auto p = project(jh, s, true);
    const auto m = project(jh, s, false);
    CHECK(max_value(p.re + m.re - s.re) <= 1e-12);
    CHECK(max_value(p.im + m.im - s.im) <= 1e-12);
    const auto pp = project(jh, p, true);
    const auto mm = project(jh, m, false);
    CHECK(max_value(pp.re - p.re) <= 1e-12);
    CHECK(max_value(pp.im - p.im) <= 1e-12);
    CHECK(max_value(mm.re - m.re) <= 1e-12);
    CHECK(max_value(project(jh, p, false).re) <= 1e-12);
  }
}

TEST_CASE("g-hat") {
  const auto flat = oracle::chart("flat");
  const std::vector<double> p{0.5, 0.5};
  CHECK(ghat(*flat, sv({1, 0}, {0, 0}), sv({1, 0}, {0, 0}), p) == 1.0);
  CHECK(ghat(*flat, sv({0, 1}, {0, 0}), sv({0, 1}, {0, 0}), p) == -1.0);
  // #dx^2 = -d_2 and J d_1 = d_2, so the cross term is 1/2 g(-d_2, d_2) = +1/2.
  CHECK(ghat(*flat, sv({1, 0}, {0, 1}), sv({1, 0}, {0, 0}), p) == 1.5);

  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const char* name : {"holo_z", "conformal", "holo_hyperbolic"}) {
    CAPTURE(name);
    const auto c = oracle::chart(name);
    const std::size_t n = c->dimension;
    for (const auto& pt : sample_points(*c, 13, 5)) {
      const auto local = local_geometry(Connection::levi_civita(c), pt.point, 1);
      const auto G = values(ghat_matrix(local.structure));
      const auto Jh = build_Jhat(*c, pt.point);
      for (int k = 0; k < 4; ++k) {
        SectionValue a{std::vector<double>(n), std::vector<double>(n)}, b = a;
        for (std::size_t i = 0; i < n; ++i) {
          a.vector[i] = u(rng);
          a.form[i] = u(rng);
          b.vector[i] = u(rng);
          b.form[i] = u(rng);
        }
        const double ab = ghat(*c, a, b, pt.point);
        CHECK(std::abs(ab - ghat(*c, b, a, pt.point)) <= 1e-12);
        CHECK(std::abs(ghat(*c, Jh.apply(a), b, pt.point) - ghat(*c, a, Jh.apply(b), pt.point)) <= 1e-10);
        std::vector<double> va(a.vector), vb(b.vector);
        va.insert(va.end(), a.form.begin(), a.form.end());
        vb.insert(vb.end(), b.form.begin(), b.form.end());
        double gram = 0;
        for (std::size_t r = 0; r < 2 * n; ++r)
          for (std::size_t s = 0; s < 2 * n; ++s) gram += va[r] * G(r, s) * vb[s];
        CHECK(std::abs(gram - ab) <= 1e-10);
      }
    }
  }
}

TEST_CASE("the lifted connection D-hat") {
  SUBCASE("flat chart: exact zeros") {
    const auto c = oracle::chart("flat");
    const auto m = Dhat_checks(Connection::levi_civita(c), sample_points(*c, 1, 5), 1e-8).max();
    CHECK(m.j_parallel == 0.0);
    CHECK(m.g_parallel == 0.0);
    CHECK(m.curvature_block == 0.0);
    CHECK(m.curvature_norm == 0.0);
  }
  SUBCASE("holo_z and holo_hyperbolic with the canonical connection") {
    for (const char* name : {"holo_z", "holo_hyperbolic"}) {
      CAPTURE(name);
      const auto c = oracle::chart(name);
      const auto pts = sample_points(*c, 42, 10);
      const auto m = Dhat_checks(canonical_connection(c, pts, 1e-8), pts, 1e-8).max();
      CHECK(m.j_parallel <= 1e-8);
      CHECK(m.g_parallel <= 1e-8);
      CHECK(m.curvature_block <= 1e-8);
    }
  }
  SUBCASE("conformal chart: D J = 0 but the Levi-Civita lift is not J-parallel") {
    const auto c = oracle::chart("conformal");
    const auto pts = sample_points(*c, 42, 5);
    CHECK(Dhat_checks(canonical_connection(c, pts, 1e-8), pts, 1e-8).max().j_parallel <= 1e-8);
    CHECK(Dhat_checks(Connection::levi_civita(c), pts, 1e-8).max().j_parallel > 1e-3);
  }
}
