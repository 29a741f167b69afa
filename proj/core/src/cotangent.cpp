#include "nordenlab/cotangent.hpp"

#include <algorithm>
#include <cmath>

namespace nordenlab {

namespace {

Jet zero_like(const Jet& like) { return Jet::constant_like(like, 0.0); }

Matrix<double> derivative_values(const Matrix<Jet>& m, std::size_t var) {
  Matrix<double> out(m.rows(), m.cols(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c).derivative(var).value();
  return out;
}

double max_abs_asymmetry(const Matrix<double>& m) {
  double out = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out = std::max(out, std::abs(m(r, c) - m(c, r)));
  return out;
}

}  // namespace

std::vector<CotangentPoint> sample_cotangent_points(const NordenChart& chart, std::uint64_t seed, std::size_t count,
                                                    Interval fiber_box) {
  const std::size_t n = chart.dimension;
  std::vector<CotangentPoint> out;
  for (auto& base : sample_points(chart, seed, count)) {
    CotangentPoint p{std::move(base.point), std::vector<double>(n, 0.0), base.index};
    const std::size_t k = out.size();
    for (std::size_t i = 0; i < n; ++i)
      p.fiber[i] = fiber_box.lo + (fiber_box.hi - fiber_box.lo) * uniform01(seed, p.index, 1000 + i);
    if (k == 0) {
      std::fill(p.fiber.begin(), p.fiber.end(), 0.0);
    } else if (k == 1) {
      double norm = 0.0;
      for (double y : p.fiber) norm += y * y;
      norm = std::sqrt(norm);
      if (norm == 0.0) {
        p.fiber[0] = 1.0;
      } else {
        for (double& y : p.fiber) y /= norm;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

LocalGeometry CotangentContext::local() const { return LocalGeometry{coords, base, gamma}; }

CotangentContext cotangent_context(const Connection& conn, const CotangentPoint& p, int order) {
  const std::size_t n = p.base.size();
  std::vector<double> point = p.base;
  point.insert(point.end(), p.fiber.begin(), p.fiber.end());

  CotangentContext ctx;
  ctx.n = n;
  ctx.coords = seed_variables(point, order);
  ctx.base = evaluate_structure(conn.chart(), ctx.coords);
  ctx.gamma = conn.christoffel(ctx.coords);

  const Jet zero = zero_like(ctx.gamma(0, 0, 0));
  ctx.frame = identity_like(2 * n, zero);
  ctx.frame_inv = identity_like(2 * n, zero);
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      Jet b = zero;
      for (std::size_t k = 0; k < n; ++k) b += ctx.coords[n + k] * ctx.gamma(k, i, l);
      ctx.frame(n + l, i) = b;
      ctx.frame_inv(n + l, i) = -b;
    }
  }

  ctx.jhat = jhat_matrix(ctx.base);
  ctx.ghat = ghat_matrix(ctx.base);
  ctx.j_coord = ctx.frame * ctx.jhat * ctx.frame_inv;
  ctx.g_coord = transpose(ctx.frame_inv) * ctx.ghat * ctx.frame_inv;
  return ctx;
}

Matrix<double> frame(const Connection& conn, const CotangentPoint& p) {
  return values(cotangent_context(conn, p, 1).frame);
}

std::vector<Jet> lie_bracket(std::span<const Jet> u, std::span<const Jet> v) {
  const std::size_t m = u.size();
  std::vector<Jet> out(m, zero_like(u[0].derivative(0)));
  for (std::size_t nu = 0; nu < m; ++nu)
    for (std::size_t mu = 0; mu < m; ++mu) out[nu] += u[mu] * v[nu].derivative(mu) - v[mu] * u[nu].derivative(mu);
  return out;
}

double LiftBracketResidual::max() const { return std::max({horizontal, mixed, vertical}); }

LiftBracketResidual lift_brackets_check(const CotangentContext& ctx) {
  const std::size_t n = ctx.n;
  const auto R = values(curvature(ctx.gamma));
  const auto G = values(ctx.gamma);
  auto column = [&](std::size_t a) {
    std::vector<Jet> c;
    for (std::size_t mu = 0; mu < 2 * n; ++mu) c.push_back(ctx.frame(mu, a));
    return c;
  };
  LiftBracketResidual res;
  for (std::size_t a = 0; a < 2 * n; ++a) {
    for (std::size_t b = 0; b < 2 * n; ++b) {
      const auto lb = lie_bracket(column(a), column(b));
      std::vector<double> expected(2 * n, 0.0);
      if (a < n && b < n) {
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t k = 0; k < n; ++k) expected[n + l] += ctx.coords[n + k].value() * R(k, a, b, l);
      } else if (a < n) {
        for (std::size_t l = 0; l < n; ++l) expected[n + l] = -G(b - n, a, l);
      } else if (b < n) {
        for (std::size_t l = 0; l < n; ++l) expected[n + l] = G(a - n, b, l);
      }
      double d = 0.0;
      for (std::size_t mu = 0; mu < 2 * n; ++mu) d = std::max(d, std::abs(lb[mu].value() - expected[mu]));
      double& slot = (a < n && b < n) ? res.horizontal : (a >= n && b >= n) ? res.vertical : res.mixed;
      slot = std::max(slot, d);
    }
  }
  return res;
}

std::vector<Jet> phi_nabla(const CotangentContext& ctx, const SectionJet& s) { return ctx.frame * s.stacked(); }

double omega(std::span<const double> u, std::span<const double> v) {
  const std::size_t n = u.size() / 2;
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) s += u[n + k] * v[k] - u[k] * v[n + k];
  return s;
}

SymplecticPullback symplectic_pullback(const CotangentContext& ctx) {
  const std::size_t n = ctx.n;
  const auto basis = basis_sections(n, ctx.coords.front());
  const auto F = values(ctx.frame);
  const auto T = values(torsion(ctx.gamma));
  auto stacked_value = [](const SectionJet& s) {
    std::vector<double> v;
    for (const auto& x : s.stacked()) v.push_back(x.value());
    return v;
  };
  SymplecticPullback out;
  for (std::size_t a = 0; a < 2 * n; ++a) {
    const auto ua = F * stacked_value(basis[a]);
    for (std::size_t b = 0; b < 2 * n; ++b) {
      const auto ub = F * stacked_value(basis[b]);
      const double d = omega(ua, ub) + 2.0 * pair_symplectic(basis[a].value(), basis[b].value());
      double term = 0.0;
      if (a < n && b < n)
        for (std::size_t k = 0; k < n; ++k) term += ctx.coords[n + k].value() * T(k, a, b);
      out.defect = std::max(out.defect, std::abs(d));
      out.torsion_term = std::max(out.torsion_term, std::abs(term));
      out.mismatch = std::max(out.mismatch, std::abs(d - term));
    }
  }
  return out;
}

PhiBracketResidual phi_bracket_check(const CotangentContext& ctx, const SectionJet& s, const SectionJet& t) {
  const std::size_t n = ctx.n;
  const auto lhs = lie_bracket(phi_nabla(ctx, s), phi_nabla(ctx, t));
  const auto rhs = phi_nabla(ctx, bracket(ctx.gamma, s, t));
  const auto R = values(curvature(ctx.gamma));
  std::vector<double> term(2 * n, 0.0);
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          term[n + l] += s.vector[i].value() * t.vector[j].value() * ctx.coords[n + k].value() * R(k, i, j, l);
  PhiBracketResidual res;
  for (std::size_t mu = 0; mu < 2 * n; ++mu) {
    const double d = lhs[mu].value() - rhs[mu].value();
    res.residual = std::max(res.residual, std::abs(d));
    res.curvature_term = std::max(res.curvature_term, std::abs(term[mu]));
    res.mismatch = std::max(res.mismatch, std::abs(d - term[mu]));
  }
  return res;
}

TildeStructures tilde_structures(const CotangentContext& ctx) {
  const std::size_t n = ctx.n;
  TildeStructures out;
  out.j_frame = values(ctx.jhat);
  out.g_frame = values(ctx.ghat);
  out.j_coord = values(ctx.j_coord);
  out.g_coord = values(ctx.g_coord);

  const auto I = identity_like(2 * n, 1.0);
  out.j_square = std::max(max_abs(out.j_frame * out.j_frame + I), max_abs(out.j_coord * out.j_coord + I));
  out.g_asymmetry = std::max(max_abs_asymmetry(out.g_frame), max_abs_asymmetry(out.g_coord));
  out.j_g_symmetry = std::max(max_abs_diff(transpose(out.j_frame) * out.g_frame, out.g_frame * out.j_frame),
                              max_abs_diff(transpose(out.j_coord) * out.g_coord, out.g_coord * out.j_coord));
  out.abs_det = std::abs(determinant(out.g_coord));

  // Lift formulas applied to coordinate fields, with d/dx~^i = X_i^H - B_{li} d/dy_l
  // and X_k^H = d/dx~^k + B_{mk} d/dy_m.
  const auto g = values(ctx.base.g);
  const auto gi = values(ctx.base.g_inv);
  const auto J = values(ctx.base.J);
  const auto F = values(ctx.frame);
  auto B = [&](std::size_t l, std::size_t i) { return F(n + l, i); };
  Matrix<double> j_lift(2 * n, 2 * n, 0.0);
  Matrix<double> g_lift(2 * n, 2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      j_lift(k, i) = J(k, i);
      double y = g(i, k);
      for (std::size_t m = 0; m < n; ++m) y += J(m, i) * B(k, m) + B(m, i) * J(m, k);
      j_lift(n + k, i) = y;
      j_lift(n + k, n + i) = -J(i, k);
    }
    for (std::size_t j = 0; j < n; ++j) {
      double hh = g(i, j);
      double hv = 0.5 * J(j, i);
      for (std::size_t l = 0; l < n; ++l) {
        hh -= 0.5 * (B(l, j) * J(l, i) + B(l, i) * J(l, j));
        hv -= B(l, i) * gi(l, j);
        for (std::size_t m = 0; m < n; ++m) hh += B(l, i) * B(m, j) * gi(l, m);
      }
      g_lift(i, j) = hh;
      g_lift(i, n + j) = hv;
      g_lift(n + j, i) = hv;
      g_lift(n + i, n + j) = gi(i, j);
    }
  }
  out.two_path = std::max(max_abs_diff(j_lift, out.j_coord), max_abs_diff(g_lift, out.g_coord));
  return out;
}

Array3<double> to_frame(const Array3<double>& t, const Matrix<double>& F, const Matrix<double>& F_inv) {
  const std::size_t m = t.extent();
  // contract lower slots first, then the upper one
  Array3<double> a(m, 0.0);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t j = 0; j < m; ++j) a(k, i, b) += t(k, i, j) * F(j, b);
  Array3<double> c(m, 0.0);
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t x = 0; x < m; ++x)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t i = 0; i < m; ++i) c(k, x, b) += a(k, i, b) * F(i, x);
  Array3<double> out(m, 0.0);
  for (std::size_t d = 0; d < m; ++d)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t x = 0; x < m; ++x)
        for (std::size_t b = 0; b < m; ++b) out(d, x, b) += F_inv(d, k) * c(k, x, b);
  return out;
}

Array4<double> to_frame(const Array4<double>& t, const Matrix<double>& F, const Matrix<double>& F_inv) {
  const std::size_t m = t.extent();
  Array4<double> cur = t;
  for (std::size_t slot = 1; slot < 4; ++slot) {
    Array4<double> next(m, 0.0);
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c)
          for (std::size_t d = 0; d < m; ++d) {
            std::size_t idx[4] = {a, b, c, d};
            const std::size_t free = idx[slot];
            double s = 0.0;
            for (std::size_t mu = 0; mu < m; ++mu) {
              idx[slot] = mu;
              s += cur(idx[0], idx[1], idx[2], idx[3]) * F(mu, free);
            }
            next(a, b, c, d) = s;
          }
    cur = std::move(next);
  }
  Array4<double> out(m, 0.0);
  for (std::size_t d = 0; d < m; ++d)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          for (std::size_t c = 0; c < m; ++c) out(d, a, b, c) += F_inv(d, k) * cur(k, a, b, c);
  return out;
}

TildeNijenhuis tilde_nijenhuis(const CotangentContext& ctx) {
  const std::size_t n = ctx.n;
  const std::size_t m = 2 * n;
  TildeNijenhuis out;
  out.direct = to_frame(values(nijenhuis_J(ctx.j_coord)), values(ctx.frame), values(ctx.frame_inv));
  out.expected = Array3<double>(m, 0.0);

  const auto local = ctx.local();
  const auto basis = basis_sections(n, ctx.coords.front());
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const auto v = nijenhuis_generalized(local, basis[a], basis[b]).value();
      for (std::size_t c = 0; c < n; ++c) {
        out.expected(c, a, b) = v.vector[c];
        out.expected(n + c, a, b) = v.form[c];
      }
    }
  }

  const auto R = values(curvature(ctx.gamma));
  const auto J = values(ctx.base.J);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t h = 0; h < n; ++h) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          double t = -R(k, i, j, h);
          for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) t += J(a, i) * J(b, j) * R(k, a, b, h);
            for (std::size_t l = 0; l < n; ++l) t += J(l, h) * (J(a, i) * R(k, a, j, l) + J(a, j) * R(k, i, a, l));
          }
          s += ctx.coords[n + k].value() * t;
        }
        out.expected(n + h, i, j) += s;
      }
    }
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < a; ++b)
      for (std::size_t c = 0; c < m; ++c) out.expected(c, a, b) = -out.expected(c, b, a);

  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      double d = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        d = std::max(d, std::abs(out.direct(c, a, b) - out.expected(c, a, b)));
        out.norm = std::max(out.norm, std::abs(out.direct(c, a, b)));
      }
      double& slot = (a < n && b < n) ? out.horizontal : (a >= n && b >= n) ? out.vertical : out.mixed;
      slot = std::max(slot, d);
    }
  }
  return out;
}

FrameConnection closed_form_connection(const CotangentContext& ctx) {
  const std::size_t n = ctx.n;
  const auto G = values(ctx.gamma);
  const auto R = values(curvature(ctx.gamma));
  const auto DJ = values(covariant_derivative_J(ctx.gamma, ctx.base.J));  // DJ(i, k, j) = (nabla_i J)^k_j
  const auto g = values(ctx.base.g);
  const auto gi = values(ctx.base.g_inv);
  const auto J = values(ctx.base.J);
  std::vector<double> y;
  for (std::size_t k = 0; k < n; ++k) y.push_back(ctx.coords[n + k].value());
  auto S = [&](std::size_t i, std::size_t j, std::size_t p) { return DJ(i, p, j) + DJ(j, p, i); };
  auto yR = [&](std::size_t i, std::size_t j, std::size_t l) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += y[k] * R(k, i, j, l);
    return s;
  };

  FrameConnection w(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0; r < n; ++r) {
        double h = G(r, i, j);
        for (std::size_t p = 0; p < n; ++p) h -= 0.1 * S(i, j, p) * J(r, p);
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t s = 0; s < n; ++s)
            h += 0.2 * gi(r, l) * (yR(i, j, s) * J(s, l) - 2.0 * yR(i, l, s) * J(s, j) - 2.0 * yR(j, l, s) * J(s, i));
        w(r, i, j) = h;
      }
      for (std::size_t s = 0; s < n; ++s) {
        double v = 3.0 * yR(i, j, s);
        for (std::size_t r = 0; r < n; ++r) {
          v += g(r, s) * S(i, j, r);
          for (std::size_t l = 0; l < n; ++l)
            v += J(l, s) * J(r, j) * yR(i, l, r) + J(l, s) * yR(j, l, r) * J(r, i);
        }
        w(n + s, i, j) = 0.2 * v;
      }
    }
  }
  // nabla~_{d/dy_j} X_i^H, then nabla~_{X_i^H} d/dy_j from it
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        double h = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          h += gi(r, k) * (DJ(i, j, r) - DJ(r, j, i));
          for (std::size_t l = 0; l < n; ++l) h -= 2.0 * gi(r, k) * gi(j, l) * yR(i, r, l);
        }
        w(k, n + j, i) = 0.2 * h;
      }
      for (std::size_t s = 0; s < n; ++s) {
        double v = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          v -= J(r, s) * (DJ(i, j, r) - DJ(r, j, i));
          for (std::size_t l = 0; l < n; ++l) v += 2.0 * J(r, s) * gi(j, l) * yR(i, r, l);
        }
        w(n + s, n + j, i) = 0.1 * v;
      }
      for (std::size_t c = 0; c < 2 * n; ++c) w(c, i, n + j) = w(c, n + j, i);
      for (std::size_t s = 0; s < n; ++s) w(n + s, i, n + j) -= G(j, i, s);
    }
  }
  return w;
}

FrameConnection flat_reduction(const CotangentContext& ctx) {
  const std::size_t n = ctx.n;
  const auto G = values(ctx.gamma);
  FrameConnection w(2 * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0; r < n; ++r) w(r, i, j) = G(r, i, j);
      for (std::size_t s = 0; s < n; ++s) w(n + s, i, n + j) = -G(j, i, s);
    }
  }
  return w;
}

OracleConnection levi_civita_oracle(const CotangentContext& ctx) {
  const std::size_t m = 2 * ctx.n;
  OracleConnection out;
  const StructureJets tilde{ctx.g_coord, ctx.j_coord, inverse(ctx.g_coord)};
  out.coordinate = levi_civita_christoffel(tilde);

  const auto F = values(ctx.frame);
  const auto Finv = values(ctx.frame_inv);
  const auto Gt = values(out.coordinate);
  std::vector<Matrix<double>> dF;
  for (std::size_t mu = 0; mu < m; ++mu) dF.push_back(derivative_values(ctx.frame, mu));

  // coordinate components of nabla~_{e_a} e_b and of [e_a, e_b]
  Array3<double> cov(m, 0.0);
  Array3<double> lie(m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t nu = 0; nu < m; ++nu) {
        double c = 0.0;
        double l = 0.0;
        for (std::size_t mu = 0; mu < m; ++mu) {
          double t = dF[mu](nu, b);
          for (std::size_t la = 0; la < m; ++la) t += Gt(nu, mu, la) * F(la, b);
          c += F(mu, a) * t;
          l += F(mu, a) * dF[mu](nu, b) - F(mu, b) * dF[mu](nu, a);
        }
        cov(nu, a, b) = c;
        lie(nu, a, b) = l;
      }
  out.frame = FrameConnection(m, 0.0);
  Array3<double> structure(m, 0.0);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        for (std::size_t nu = 0; nu < m; ++nu) {
          out.frame(c, a, b) += Finv(c, nu) * cov(nu, a, b);
          structure(c, a, b) += Finv(c, nu) * lie(nu, a, b);
        }

  out.metric_defect = max_abs(values(covariant_derivative_metric(out.coordinate, ctx.g_coord)));
  const auto Gh = values(ctx.ghat);
  std::vector<Matrix<double>> dG;
  for (std::size_t mu = 0; mu < m; ++mu) dG.push_back(derivative_values(ctx.ghat, mu));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) {
        double v = 0.0;
        for (std::size_t mu = 0; mu < m; ++mu) v += F(mu, a) * dG[mu](b, c);
        for (std::size_t d = 0; d < m; ++d) v -= out.frame(d, a, b) * Gh(d, c) + out.frame(d, a, c) * Gh(b, d);
        out.metric_defect = std::max(out.metric_defect, std::abs(v));
        out.torsion_defect =
            std::max(out.torsion_defect, std::abs(out.frame(c, a, b) - out.frame(c, b, a) - structure(c, a, b)));
      }
  return out;
}

double SlotDiscrepancy::max() const { return std::max({horizontal, vertical_horizontal, horizontal_vertical, vertical}); }

SlotDiscrepancy slot_discrepancy(const FrameConnection& x, const FrameConnection& y, std::size_t n) {
  SlotDiscrepancy out;
  for (std::size_t a = 0; a < 2 * n; ++a)
    for (std::size_t b = 0; b < 2 * n; ++b) {
      double d = 0.0;
      for (std::size_t c = 0; c < 2 * n; ++c) d = std::max(d, std::abs(x(c, a, b) - y(c, a, b)));
      double& slot = (a < n && b < n)   ? out.horizontal
                     : (a >= n && b < n) ? out.vertical_horizontal
                     : (a < n)           ? out.horizontal_vertical
                                         : out.vertical;
      slot = std::max(slot, d);
    }
  return out;
}

KahlerFlatPoint kahler_flat_at(const CotangentContext& ctx, const OracleConnection& oracle) {
  const std::size_t m = 2 * ctx.n;
  const auto F = values(ctx.frame);
  const auto Finv = values(ctx.frame_inv);
  const auto dj = values(covariant_derivative_J(oracle.coordinate, ctx.j_coord));
  Array3<double> reordered(m, 0.0);  // (k, i, j) = (nabla~_i J~)^k_j
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < m; ++k)
      for (std::size_t j = 0; j < m; ++j) reordered(k, i, j) = dj(i, k, j);
  KahlerFlatPoint out;
  out.nabla_j = max_abs(to_frame(reordered, F, Finv));
  out.curvature = max_abs(to_frame(values(curvature(oracle.coordinate)), F, Finv));
  return out;
}

KahlerFlatPoint KahlerFlatReport::max() const {
  KahlerFlatPoint m;
  for (const auto& p : points) {
    m.nabla_j = std::max(m.nabla_j, p.nabla_j);
    m.curvature = std::max(m.curvature, p.curvature);
  }
  return m;
}

bool KahlerFlatReport::passed() const {
  const auto m = max();
  return hypothesis && m.nabla_j <= tol && m.curvature <= tol;
}

KahlerFlatReport kahler_flat_suite(std::shared_ptr<const NordenChart> chart, std::span<const CotangentPoint> points,
                                   double tol) {
  KahlerFlatReport report;
  report.tol = tol;
  const auto lc = Connection::levi_civita(std::move(chart));
  for (const auto& p : points) {
    report.base_curvature = std::max(report.base_curvature, max_abs(curvature_at(lc, p.base)));
    report.base_nabla_j = std::max(report.base_nabla_j, max_abs(covariant_derivative_J_at(lc, p.base)));
  }
  report.hypothesis = report.base_curvature <= tol && report.base_nabla_j <= tol;
  if (!report.hypothesis) return report;
  for (const auto& p : points) {
    const auto ctx = cotangent_context(lc, p);
    report.points.push_back(kahler_flat_at(ctx, levi_civita_oracle(ctx)));
  }
  return report;
}

}  // namespace nordenlab
