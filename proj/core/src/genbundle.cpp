#include "nordenlab/genbundle.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace nordenlab {

namespace {

Jet zero_like(const Jet& like) { return Jet::constant_like(like, 0.0); }

double max_abs_value(const SectionJet& s) {
  double m = 0.0;
  for (const auto& x : s.vector) m = std::max(m, std::abs(x.value()));
  for (const auto& x : s.form) m = std::max(m, std::abs(x.value()));
  return m;
}

}  // namespace

int SectionJet::order() const {
  int o = kMaxJetOrder;
  for (const auto& x : vector) o = std::min(o, x.order());
  for (const auto& x : form) o = std::min(o, x.order());
  return o;
}

SectionValue SectionJet::value() const {
  SectionValue v;
  for (const auto& x : vector) v.vector.push_back(x.value());
  for (const auto& x : form) v.form.push_back(x.value());
  return v;
}

std::vector<Jet> SectionJet::stacked() const {
  std::vector<Jet> out = vector;
  out.insert(out.end(), form.begin(), form.end());
  return out;
}

SectionJet SectionJet::unstack(std::vector<Jet> stacked) {
  const std::size_t n = stacked.size() / 2;
  SectionJet s;
  s.vector.assign(stacked.begin(), stacked.begin() + static_cast<std::ptrdiff_t>(n));
  s.form.assign(stacked.begin() + static_cast<std::ptrdiff_t>(n), stacked.end());
  return s;
}

SectionJet& SectionJet::operator+=(const SectionJet& rhs) {
  for (std::size_t i = 0; i < vector.size(); ++i) vector[i] += rhs.vector[i];
  for (std::size_t i = 0; i < form.size(); ++i) form[i] += rhs.form[i];
  return *this;
}

SectionJet& SectionJet::operator-=(const SectionJet& rhs) {
  for (std::size_t i = 0; i < vector.size(); ++i) vector[i] -= rhs.vector[i];
  for (std::size_t i = 0; i < form.size(); ++i) form[i] -= rhs.form[i];
  return *this;
}

SectionJet& SectionJet::operator*=(double s) {
  for (auto& x : vector) x *= s;
  for (auto& x : form) x *= s;
  return *this;
}

SectionJet scale(const Jet& f, const SectionJet& s) {
  SectionJet out;
  for (const auto& x : s.vector) out.vector.push_back(f * x);
  for (const auto& x : s.form) out.form.push_back(f * x);
  return out;
}

SectionJet GeneralizedSection::evaluate(std::span<const Jet> coords) const {
  const std::size_t n = vector.size();
  const auto base = coords.first(n);
  SectionJet s;
  for (const auto& e : vector) s.vector.push_back(e.eval(base));
  for (const auto& e : form) s.form.push_back(e.eval(base));
  return s;
}

GeneralizedSection make_section(const NordenChart& chart, const std::vector<std::string>& vector_part,
                                const std::vector<std::string>& form_part) {
  if (vector_part.size() != chart.dimension || form_part.size() != chart.dimension)
    throw std::invalid_argument("section component count must equal the chart dimension");
  GeneralizedSection s;
  for (const auto& src : vector_part) s.vector.push_back(parse(src).bind(chart.coordinates));
  for (const auto& src : form_part) s.form.push_back(parse(src).bind(chart.coordinates));
  return s;
}

SectionJet coordinate_vector(std::size_t n, std::size_t i, const Jet& like) {
  SectionJet s{std::vector<Jet>(n, zero_like(like)), std::vector<Jet>(n, zero_like(like))};
  s.vector[i] += 1.0;
  return s;
}

SectionJet coordinate_form(std::size_t n, std::size_t j, const Jet& like) {
  SectionJet s{std::vector<Jet>(n, zero_like(like)), std::vector<Jet>(n, zero_like(like))};
  s.form[j] += 1.0;
  return s;
}

std::vector<SectionJet> basis_sections(std::size_t n, const Jet& like) {
  std::vector<SectionJet> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(coordinate_vector(n, i, like));
  for (std::size_t j = 0; j < n; ++j) out.push_back(coordinate_form(n, j, like));
  return out;
}

namespace {

double contract(const std::vector<double>& form, const std::vector<double>& vec) {
  double s = 0.0;
  for (std::size_t i = 0; i < form.size(); ++i) s += form[i] * vec[i];
  return s;
}

}  // namespace

double pair_symplectic(const SectionValue& a, const SectionValue& b) {
  return -0.5 * (contract(a.form, b.vector) - contract(b.form, a.vector));
}

double pair_metric(const SectionValue& a, const SectionValue& b) {
  return -0.5 * (contract(a.form, b.vector) + contract(b.form, a.vector));
}

Matrix<double> pair_metric_gram(std::size_t n) {
  Matrix<double> gram(2 * n, 2 * n, 0.0);
  std::vector<SectionValue> basis;
  for (std::size_t i = 0; i < 2 * n; ++i) {
    SectionValue s{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
    if (i < n) {
      s.vector[i] = 1.0;
    } else {
      s.form[i - n] = 1.0;
    }
    basis.push_back(std::move(s));
  }
  for (std::size_t a = 0; a < 2 * n; ++a)
    for (std::size_t b = 0; b < 2 * n; ++b) gram(a, b) = pair_metric(basis[a], basis[b]);
  return gram;
}

Signature signature(const Matrix<double>& symmetric, double tol) {
  const auto n = static_cast<Eigen::Index>(symmetric.rows());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      m(r, c) = symmetric(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  Signature sig;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double ev = solver.eigenvalues()(i);
    if (ev > tol) {
      ++sig.positive;
    } else if (ev < -tol) {
      ++sig.negative;
    } else {
      ++sig.zero;
    }
  }
  return sig;
}

SectionJet bracket(const Christoffel& gamma, const SectionJet& a, const SectionJet& b) {
  const std::size_t n = a.dimension();
  const Jet zero = zero_like(a.vector[0].derivative(0));
  SectionJet out{std::vector<Jet>(n, zero), std::vector<Jet>(n, zero)};
  for (std::size_t i = 0; i < n; ++i) {
    const Jet& Xi = a.vector[i];
    const Jet& Yi = b.vector[i];
    for (std::size_t k = 0; k < n; ++k) {
      // [X, Y]^k = X^i d_i Y^k - Y^i d_i X^k
      out.vector[k] += Xi * b.vector[k].derivative(i) - Yi * a.vector[k].derivative(i);
      // (nabla_X eta)_k - (nabla_Y xi)_k with (nabla_i eta)_k = d_i eta_k - G^m_{ik} eta_m
      Jet t = Xi * b.form[k].derivative(i) - Yi * a.form[k].derivative(i);
      for (std::size_t m = 0; m < n; ++m) t -= gamma(m, i, k) * (Xi * b.form[m] - Yi * a.form[m]);
      out.form[k] += t;
    }
  }
  return out;
}

Matrix<double> GeneralizedOperator::full() const {
  const std::size_t n = A.rows();
  Matrix<double> m(2 * n, 2 * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      m(r, c) = A(r, c);
      m(r, n + c) = B(r, c);
      m(n + r, c) = C(r, c);
      m(n + r, n + c) = D(r, c);
    }
  }
  return m;
}

SectionValue GeneralizedOperator::apply(const SectionValue& s) const {
  std::vector<double> stacked = s.vector;
  stacked.insert(stacked.end(), s.form.begin(), s.form.end());
  const auto out = full() * stacked;
  const std::size_t n = A.rows();
  return {std::vector<double>(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n)),
          std::vector<double>(out.begin() + static_cast<std::ptrdiff_t>(n), out.end())};
}

GeneralizedOperator build_Jhat(const NordenChart& chart, std::span<const double> point) {
  const auto coords = seed_variables(point, 0);
  const auto m = values(jhat_matrix(evaluate_structure(chart, coords)));
  const std::size_t n = chart.dimension;
  GeneralizedOperator op{Matrix<double>(n, n), Matrix<double>(n, n), Matrix<double>(n, n), Matrix<double>(n, n)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      op.A(r, c) = m(r, c);
      op.B(r, c) = m(r, n + c);
      op.C(r, c) = m(n + r, c);
      op.D(r, c) = m(n + r, n + c);
    }
  }
  return op;
}

Matrix<Jet> jhat_matrix(const StructureJets& s) {
  const std::size_t n = s.J.rows();
  const Jet zero = zero_like(s.J(0, 0));
  auto corner = identity_like(n, zero) + s.J * s.J;  // I + J^2
  corner = corner * s.g_inv;
  Matrix<Jet> m(2 * n, 2 * n, zero);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      m(r, c) = s.J(r, c);
      m(r, n + c) = -corner(r, c);
      m(n + r, c) = s.g(r, c);
      m(n + r, n + c) = -s.J(c, r);  // (J* xi)_r = xi_k J^k_r
    }
  }
  return m;
}

Matrix<Jet> ghat_matrix(const StructureJets& s) {
  const std::size_t n = s.J.rows();
  Matrix<Jet> m(2 * n, 2 * n, zero_like(s.J(0, 0)));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      m(r, c) = s.g(r, c);
      m(r, n + c) = s.J(c, r) * 0.5;
      m(n + r, c) = s.J(r, c) * 0.5;
      m(n + r, n + c) = s.g_inv(r, c);
    }
  }
  return m;
}

SectionJet apply(const Matrix<Jet>& op, const SectionJet& s) { return SectionJet::unstack(op * s.stacked()); }

Calibration classify_calibration(const Matrix<double>& g) {
  const auto sig = signature(g);
  return sig.positive == static_cast<int>(g.rows()) ? Calibration::calibrated : Calibration::pseudo_calibrated;
}

SectionJet nijenhuis_generalized(const LocalGeometry& local, const SectionJet& a, const SectionJet& b) {
  const auto J = jhat_matrix(local.structure);
  const auto Ja = apply(J, a);
  const auto Jb = apply(J, b);
  return bracket(local.gamma, Ja, Jb) - apply(J, bracket(local.gamma, Ja, b)) - apply(J, bracket(local.gamma, a, Jb)) -
         bracket(local.gamma, a, b);
}

double max_basis_nijenhuis(const LocalGeometry& local) {
  const std::size_t n = local.structure.g.rows();
  const auto basis = basis_sections(n, local.coords.front());
  double m = 0.0;
  for (std::size_t a = 0; a < basis.size(); ++a)
    for (std::size_t b = a + 1; b < basis.size(); ++b)
      m = std::max(m, max_abs_value(nijenhuis_generalized(local, basis[a], basis[b])));
  return m;
}

ComplexSectionJet bracket(const Christoffel& gamma, const ComplexSectionJet& a, const ComplexSectionJet& b) {
  return {bracket(gamma, a.re, b.re) - bracket(gamma, a.im, b.im), bracket(gamma, a.re, b.im) + bracket(gamma, a.im, b.re)};
}

ComplexSectionJet apply(const Matrix<Jet>& op, const ComplexSectionJet& s) { return {apply(op, s.re), apply(op, s.im)}; }

ComplexSectionJet project(const Matrix<Jet>& jhat, const ComplexSectionJet& s, bool plus) {
  // P+ (a + ib) = 1/2 (a + J b) + i/2 (b - J a); P- flips the sign of J.
  const double sign = plus ? 1.0 : -1.0;
  const auto Ja = apply(jhat, s.re);
  const auto Jb = apply(jhat, s.im);
  return {0.5 * (s.re + sign * Jb), 0.5 * (s.im - sign * Ja)};
}

ComplexSectionJet nijenhuis_generalized(const LocalGeometry& local, const ComplexSectionJet& a, const ComplexSectionJet& b) {
  return {nijenhuis_generalized(local, a.re, b.re) - nijenhuis_generalized(local, a.im, b.im),
          nijenhuis_generalized(local, a.re, b.im) + nijenhuis_generalized(local, a.im, b.re)};
}

ProjectionResidual projection_identity(const LocalGeometry& local, const ComplexSectionJet& a, const ComplexSectionJet& b) {
  const auto J = jhat_matrix(local.structure);
  const auto N = nijenhuis_generalized(local, a, b);
  auto residual = [&](bool plus) {
    const auto lhs = project(J, bracket(local.gamma, project(J, a, plus), project(J, b, plus)), !plus);
    const auto rhs = project(J, N, !plus);
    return std::max(max_abs_value(lhs.re + 0.25 * rhs.re), max_abs_value(lhs.im + 0.25 * rhs.im));
  };
  return {residual(true), residual(false)};
}

double ghat(const NordenChart& chart, const SectionValue& a, const SectionValue& b, std::span<const double> point) {
  const auto g = metric_at(chart, point);
  const auto J = structure_at(chart, point);
  const auto sharp_a = musical_sharp(chart, a.form, point);
  const auto sharp_b = musical_sharp(chart, b.form, point);
  const auto gform = [&](const std::vector<double>& x, const std::vector<double>& y) {
    return contract(g * x, y);
  };
  const auto JX = J * a.vector;
  const auto JY = J * b.vector;
  return gform(a.vector, b.vector) + 0.5 * gform(JX, sharp_b) + 0.5 * gform(sharp_a, JY) + gform(sharp_a, sharp_b);
}

IntegrabilityPoint integrability_at(const LocalGeometry& local) {
  const auto& s = local.structure;
  const std::size_t n = s.g.rows();
  IntegrabilityPoint p;
  p.nijenhuis_J = max_abs(values(nijenhuis_J(s.J)));
  p.nabla_J = max_abs(values(covariant_derivative_J(local.gamma, s.J)));
  const auto dg = values(d_nabla_g(local.gamma, s.g));
  const auto J = values(s.J);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double v = 0.0;
        for (std::size_t a = 0; a < n; ++a) v += J(a, i) * dg(a, j, k) + J(a, j) * dg(i, a, k);
        p.d_nabla_g_condition = std::max(p.d_nabla_g_condition, std::abs(v));
      }
    }
  }
  p.nijenhuis_jhat = max_basis_nijenhuis(local);
  return p;
}

IntegrabilityPoint IntegrabilityReport::max() const {
  IntegrabilityPoint m;
  for (const auto& p : points) {
    m.nijenhuis_J = std::max(m.nijenhuis_J, p.nijenhuis_J);
    m.nabla_J = std::max(m.nabla_J, p.nabla_J);
    m.d_nabla_g_condition = std::max(m.d_nabla_g_condition, p.d_nabla_g_condition);
    m.nijenhuis_jhat = std::max(m.nijenhuis_jhat, p.nijenhuis_jhat);
  }
  return m;
}

bool IntegrabilityReport::conditions_hold() const {
  const auto m = max();
  return m.nijenhuis_J <= tol && m.nabla_J <= tol && m.d_nabla_g_condition <= tol;
}

bool IntegrabilityReport::integrable() const { return max().nijenhuis_jhat <= tol; }

IntegrabilityReport integrability_conditions(const Connection& conn, std::span<const PointSample> points, double tol) {
  IntegrabilityReport report;
  report.tol = tol;
  const int order = std::min(kMaxJetOrder, 1 + conn.order_loss());
  for (const auto& p : points) report.points.push_back(integrability_at(local_geometry(conn, p.point, order)));
  return report;
}

DhatPoint dhat_at(const LocalGeometry& local) {
  const auto& s = local.structure;
  const std::size_t n = s.g.rows();
  const Jet zero = zero_like(*local.gamma.begin());
  // connection matrices on E: A_i = diag(G_i, -G_i^T), (G_i)(k, j) = Gamma^k_{ij}
  std::vector<Matrix<Jet>> A;
  for (std::size_t i = 0; i < n; ++i) {
    Matrix<Jet> a(2 * n, 2 * n, zero);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        a(k, j) = local.gamma(k, i, j);
        a(n + j, n + k) = -local.gamma(k, i, j);
      }
    }
    A.push_back(std::move(a));
  }
  const auto Jh = jhat_matrix(s);
  const auto Gh = ghat_matrix(s);
  const auto derivative = [](const Matrix<Jet>& m, std::size_t i) {
    Matrix<Jet> out(m.rows(), m.cols(), m(0, 0).derivative(i));
    for (std::size_t r = 0; r < m.rows(); ++r)
      for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).derivative(i);
    return out;
  };

  DhatPoint p;
  for (std::size_t i = 0; i < n; ++i) {
    const auto dJ = derivative(Jh, i) + A[i] * Jh - Jh * A[i];
    const auto dG = derivative(Gh, i) - transpose(A[i]) * Gh - Gh * A[i];
    p.j_parallel = std::max(p.j_parallel, max_abs(values(dJ)));
    p.g_parallel = std::max(p.g_parallel, max_abs(values(dG)));
  }

  const auto R = values(curvature(local.gamma));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto F = values(derivative(A[j], i) - derivative(A[i], j) + A[i] * A[j] - A[j] * A[i]);
      Matrix<double> expected(2 * n, 2 * n, 0.0);
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t l = 0; l < n; ++l) {
          expected(k, l) = R(k, i, j, l);
          expected(n + l, n + k) = -R(k, i, j, l);
        }
      }
      p.curvature_block = std::max(p.curvature_block, max_abs_diff(F, expected));
      p.curvature_norm = std::max(p.curvature_norm, max_abs(F));
    }
  }
  return p;
}

DhatPoint DhatReport::max() const {
  DhatPoint m;
  for (const auto& p : points) {
    m.j_parallel = std::max(m.j_parallel, p.j_parallel);
    m.g_parallel = std::max(m.g_parallel, p.g_parallel);
    m.curvature_block = std::max(m.curvature_block, p.curvature_block);
    m.curvature_norm = std::max(m.curvature_norm, p.curvature_norm);
  }
  return m;
}

DhatReport Dhat_checks(const Connection& D, std::span<const PointSample> points, double tol) {
  DhatReport report;
  report.tol = tol;
  const int order = std::min(kMaxJetOrder, 1 + D.order_loss());
  for (const auto& p : points) report.points.push_back(dhat_at(local_geometry(D, p.point, order)));
  return report;
}

}  // namespace nordenlab
