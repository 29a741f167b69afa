#include "nordenlab/connections.hpp"

#include <algorithm>
#include <cmath>

namespace nordenlab {

namespace {

Jet zero_like(const Jet& like) { return Jet::constant_like(like, 0.0); }

const Jet& any_entry(const Christoffel& gamma) { return *gamma.begin(); }

}  // namespace

Connection::Connection(std::shared_ptr<const NordenChart> chart, ConnectionKind kind, std::string label, int order_loss,
                       Evaluator eval)
    : chart_(std::move(chart)), kind_(kind), label_(std::move(label)), order_loss_(order_loss), eval_(std::move(eval)) {}

Connection Connection::levi_civita(std::shared_ptr<const NordenChart> chart) {
  return Connection(std::move(chart), ConnectionKind::levi_civita, "levi-civita", 1,
                    [](const NordenChart& c, std::span<const Jet> coords) {
                      return levi_civita_christoffel(evaluate_structure(c, coords));
                    });
}

Connection Connection::canonical(std::shared_ptr<const NordenChart> chart) {
  return Connection(std::move(chart), ConnectionKind::canonical, "canonical", 1,
                    [](const NordenChart& c, std::span<const Jet> coords) {
                      const auto s = evaluate_structure(c, coords);
                      return canonical_christoffel(s, levi_civita_christoffel(s));
                    });
}

Connection Connection::explicit_gamma(std::shared_ptr<const NordenChart> chart, Array3<BoundExpression> gamma) {
  if (gamma.extent() != chart->dimension) throw std::invalid_argument("explicit gamma has wrong extent");
  return Connection(std::move(chart), ConnectionKind::explicit_gamma, "explicit", 0,
                    [gamma = std::move(gamma)](const NordenChart& c, std::span<const Jet> coords) {
                      const std::size_t n = c.dimension;
                      const auto base = coords.first(n);
                      Christoffel out(n, zero_like(coords.front()));
                      for (std::size_t k = 0; k < n; ++k)
                        for (std::size_t i = 0; i < n; ++i)
                          for (std::size_t j = 0; j < n; ++j) out(k, i, j) = gamma(k, i, j).eval(base);
                      return out;
                    });
}

Connection Connection::declared(std::shared_ptr<const NordenChart> chart) {
  switch (chart->connection.kind) {
    case ConnectionKind::canonical: return canonical(std::move(chart));
    case ConnectionKind::explicit_gamma: {
      auto gamma = chart->connection.gamma;
      return explicit_gamma(std::move(chart), std::move(gamma));
    }
    default: return levi_civita(std::move(chart));
  }
}

Connection Connection::custom(std::shared_ptr<const NordenChart> chart, std::string label, int order_loss, Evaluator eval) {
  return Connection(std::move(chart), ConnectionKind::explicit_gamma, std::move(label), order_loss, std::move(eval));
}

Christoffel Connection::christoffel(std::span<const Jet> coords) const {
  if (coords.empty() || coords.front().order() < order_loss_)
    throw std::invalid_argument("coordinate jets of insufficient order for connection '" + label_ + "'");
  return eval_(*chart_, coords);
}

LocalGeometry local_geometry(const Connection& conn, std::span<const Jet> coords) {
  LocalGeometry local;
  local.coords.assign(coords.begin(), coords.end());
  local.structure = evaluate_structure(conn.chart(), coords);
  local.gamma = conn.christoffel(coords);
  return local;
}

LocalGeometry local_geometry(const Connection& conn, std::span<const double> point, int order) {
  const auto coords = seed_variables(point, order);
  return local_geometry(conn, coords);
}

Christoffel levi_civita_christoffel(const StructureJets& s) {
  const std::size_t n = s.g.rows();
  // dg(l, i, j) = d_l g_ij
  Array3<Jet> dg(n);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dg(l, i, j) = s.g(i, j).derivative(l);
  Christoffel gamma(n, zero_like(dg(0, 0, 0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      // first kind: [ij, l] = 1/2 (d_i g_lj + d_j g_li - d_l g_ij)
      std::vector<Jet> first;
      first.reserve(n);
      for (std::size_t l = 0; l < n; ++l) first.push_back((dg(i, l, j) + dg(j, l, i) - dg(l, i, j)) * 0.5);
      for (std::size_t k = 0; k < n; ++k) {
        Jet acc = s.g_inv(k, 0) * first[0];
        for (std::size_t l = 1; l < n; ++l) acc += s.g_inv(k, l) * first[l];
        gamma(k, i, j) = std::move(acc);
      }
    }
  }
  return gamma;
}

Array3<Jet> covariant_derivative_J(const Christoffel& gamma, const Matrix<Jet>& J) {
  const std::size_t n = J.rows();
  Array3<Jet> out(n, zero_like(any_entry(gamma)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        Jet acc = J(k, j).derivative(i);
        for (std::size_t m = 0; m < n; ++m) acc += gamma(k, i, m) * J(m, j) - gamma(m, i, j) * J(k, m);
        out(i, k, j) = std::move(acc);
      }
    }
  }
  return out;
}

Array3<Jet> covariant_derivative_metric(const Christoffel& gamma, const Matrix<Jet>& g) {
  const std::size_t n = g.rows();
  Array3<Jet> out(n, zero_like(any_entry(gamma)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Jet acc = g(j, k).derivative(i);
        for (std::size_t m = 0; m < n; ++m) acc -= gamma(m, i, j) * g(m, k) + gamma(m, i, k) * g(j, m);
        out(i, j, k) = std::move(acc);
      }
    }
  }
  return out;
}

Christoffel canonical_christoffel(const StructureJets& s, const Christoffel& levi_civita) {
  const std::size_t n = s.J.rows();
  const auto nablaJ = covariant_derivative_J(levi_civita, s.J);
  Christoffel out(n, zero_like(any_entry(levi_civita)));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Jet acc = levi_civita(k, i, j);
        for (std::size_t m = 0; m < n; ++m) acc -= s.J(k, m) * nablaJ(i, m, j) * 0.5;
        out(k, i, j) = std::move(acc);
      }
    }
  }
  return out;
}

Array3<Jet> torsion(const Christoffel& gamma) {
  const std::size_t n = gamma.extent();
  Array3<Jet> out(n, zero_like(any_entry(gamma)));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(k, i, j) = gamma(k, i, j) - gamma(k, j, i);
  return out;
}

Array4<Jet> curvature(const Christoffel& gamma) {
  const std::size_t n = gamma.extent();
  if (any_entry(gamma).order() < 1) throw std::invalid_argument("curvature needs Christoffel jets of order >= 1");
  Array4<Jet> out(n, zero_like(any_entry(gamma).derivative(0)));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < n; ++l) {
          Jet acc = gamma(k, j, l).derivative(i) - gamma(k, i, l).derivative(j);
          for (std::size_t m = 0; m < n; ++m) acc += gamma(k, i, m) * gamma(m, j, l) - gamma(k, j, m) * gamma(m, i, l);
          out(k, i, j, l) = std::move(acc);
        }
      }
    }
  }
  return out;
}

Array3<Jet> d_nabla_g(const Christoffel& gamma, const Matrix<Jet>& g) {
  const std::size_t n = g.rows();
  const auto ng = covariant_derivative_metric(gamma, g);
  const auto T = torsion(gamma);
  Array3<Jet> out(n, zero_like(any_entry(gamma)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Jet acc = ng(i, j, k) - ng(j, i, k);
        for (std::size_t m = 0; m < n; ++m) acc += g(k, m) * T(m, i, j);
        out(i, j, k) = std::move(acc);
      }
    }
  }
  return out;
}

Array3<Jet> nijenhuis_J(const Matrix<Jet>& J) {
  const std::size_t n = J.rows();
  // dJ(m, k, j) = d_m J^k_j
  Array3<Jet> dJ(n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) dJ(m, k, j) = J(k, j).derivative(m);
  Array3<Jet> out(n, zero_like(dJ(0, 0, 0)));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Jet acc = zero_like(dJ(0, 0, 0));
        for (std::size_t m = 0; m < n; ++m) {
          acc += J(m, i) * dJ(m, k, j) - J(m, j) * dJ(m, k, i);
          acc -= J(k, m) * (dJ(i, m, j) - dJ(j, m, i));
        }
        out(k, i, j) = std::move(acc);
      }
    }
  }
  return out;
}

Array3<Jet> nijenhuis_J_covariant(const Matrix<Jet>& J, const Christoffel& gamma) {
  const std::size_t n = J.rows();
  const auto nJ = covariant_derivative_J(gamma, J);  // nJ(m, k, j) = (nabla_m J)^k_j
  Array3<Jet> out(n, zero_like(nJ(0, 0, 0)));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Jet acc = zero_like(nJ(0, 0, 0));
        for (std::size_t m = 0; m < n; ++m) {
          acc += J(m, i) * nJ(m, k, j) - J(m, j) * nJ(m, k, i);
          acc -= J(k, m) * (nJ(i, m, j) - nJ(j, m, i));
        }
        out(k, i, j) = std::move(acc);
      }
    }
  }
  return out;
}

namespace {

// Coordinate jets of the minimal order that yields Christoffel jets of order `gamma_order`.
LocalGeometry local_for(const Connection& conn, std::span<const double> point, int gamma_order) {
  return local_geometry(conn, point, std::min(kMaxJetOrder, gamma_order + conn.order_loss()));
}

}  // namespace

Array3<double> christoffel_at(const Connection& conn, std::span<const double> point) {
  return values(local_for(conn, point, 0).gamma);
}

Array3<double> torsion_at(const Connection& conn, std::span<const double> point) {
  return values(torsion(local_for(conn, point, 0).gamma));
}

Array4<double> curvature_at(const Connection& conn, std::span<const double> point) {
  return values(curvature(local_for(conn, point, 1).gamma));
}

Array3<double> d_nabla_g_at(const Connection& conn, std::span<const double> point) {
  const auto local = local_for(conn, point, 1);
  return values(d_nabla_g(local.gamma, local.structure.g));
}

Array3<double> covariant_derivative_J_at(const Connection& conn, std::span<const double> point) {
  const auto local = local_for(conn, point, 1);
  return values(covariant_derivative_J(local.gamma, local.structure.J));
}

Array3<double> nijenhuis_J_at(const NordenChart& chart, std::span<const double> point) {
  const auto coords = seed_variables(point, 1);
  return values(nijenhuis_J(evaluate_structure(chart, coords).J));
}

Connection canonical_connection(std::shared_ptr<const NordenChart> chart, std::span<const PointSample> points, double tol) {
  for (const auto& p : points) {
    const double defect = max_abs(nijenhuis_J_at(*chart, p.point));
    if (defect > tol) {
      throw PreconditionError("canonical connection requires an integrable J; |N(J)| = " + std::to_string(defect) +
                              " at a sampled point");
    }
  }
  return Connection::canonical(std::move(chart));
}

CanonicalAxioms canonical_axioms(const LocalGeometry& local) {
  const auto& g = local.structure.g;
  const auto& J = local.structure.J;
  const std::size_t n = g.rows();
  const auto Dg = values(covariant_derivative_metric(local.gamma, g));
  const auto DJ = values(covariant_derivative_J(local.gamma, J));
  const auto T = values(torsion(local.gamma));
  const auto gv = values(g);
  const auto Jv = values(J);

  CanonicalAxioms ax;
  ax.metric = max_abs(Dg);
  ax.dj = max_abs(DJ);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        // T(J d_i, d_j) + T(d_i, J d_j), component k
        double s = 0.0;
        for (std::size_t a = 0; a < n; ++a) s += Jv(a, i) * T(k, a, j) + Jv(a, j) * T(k, i, a);
        ax.torsion_j = std::max(ax.torsion_j, std::abs(s));
        // T_{ijk} = g_{km} T^m_{ij}; cyclic sum over (i, j, k)
        double c = 0.0;
        for (std::size_t m = 0; m < n; ++m) c += gv(k, m) * T(m, i, j) + gv(i, m) * T(m, j, k) + gv(j, m) * T(m, k, i);
        ax.torsion_cyclic = std::max(ax.torsion_cyclic, std::abs(c));
      }
    }
  }
  return ax;
}

CanonicalAxioms CanonicalReport::max() const {
  CanonicalAxioms m;
  for (const auto& p : points) {
    m.metric = std::max(m.metric, p.metric);
    m.torsion_j = std::max(m.torsion_j, p.torsion_j);
    m.torsion_cyclic = std::max(m.torsion_cyclic, p.torsion_cyclic);
    m.dj = std::max(m.dj, p.dj);
  }
  return m;
}

bool CanonicalReport::passed() const {
  const auto m = max();
  return m.metric <= tol && m.torsion_j <= tol && m.torsion_cyclic <= tol;
}

CanonicalReport verify_canonical(const Connection& D, std::span<const PointSample> points, double tol) {
  CanonicalReport report;
  report.tol = tol;
  for (const auto& p : points) report.points.push_back(canonical_axioms(local_for(D, p.point, 1)));
  return report;
}

}  // namespace nordenlab
