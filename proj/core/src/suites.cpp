#include "nordenlab/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#ifndef NORDENLAB_VERSION
#define NORDENLAB_VERSION "0.0.0"
#endif

namespace nordenlab {

namespace {

constexpr std::uint64_t kSectionSalt = 0x5EC710115EC71011ULL;

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

/// Running maximum over points; NaN is sticky.
struct Max {
  double value = 0.0;
  std::size_t points = 0;
  void add(double v) {
    if (std::isnan(v) || std::isnan(value)) {
      value = std::nan("");
    } else {
      value = std::max(value, v);
    }
  }
};

class Recorder {
 public:
  explicit Recorder(SuiteReport& r) : report_(r) {}

  void assertion(std::string id, std::string anchor, std::size_t points, double value, double tol,
                 std::string note = {}) {
    const bool ok = !std::isnan(value) && value <= tol;
    push(std::move(id), std::move(anchor), points, value, tol, ok ? CheckStatus::pass : CheckStatus::fail,
         std::move(note));
  }
  void comparison(std::string id, std::string anchor, std::size_t points, double value, double tol,
                  std::string note = {}) {
    push(std::move(id), std::move(anchor), points, value, tol, CheckStatus::comparison_only, std::move(note));
  }
  void not_met(std::string id, std::string anchor, double tol, std::string note) {
    push(std::move(id), std::move(anchor), 0, 0.0, tol, CheckStatus::hypothesis_not_met, std::move(note));
  }

 private:
  void push(std::string id, std::string anchor, std::size_t points, double value, double tol, CheckStatus status,
            std::string note) {
    report_.checks.push_back({std::move(id), std::move(anchor), points, value, tol, status, std::move(note)});
  }
  SuiteReport& report_;
};

double max_abs_value(const SectionJet& s) {
  double m = 0.0;
  for (const auto& x : s.vector) m = std::max(m, std::abs(x.value()));
  for (const auto& x : s.form) m = std::max(m, std::abs(x.value()));
  return m;
}

std::vector<double> stacked_value(const SectionJet& s) {
  std::vector<double> v;
  for (const auto& x : s.stacked()) v.push_back(x.value());
  return v;
}

double max_curvature(const Christoffel& gamma) { return max_abs(values(curvature(gamma))); }

// ---------------------------------------------------------------------------

bool norden_checks(const NordenChart& chart, std::span<const PointSample> pts, const SuiteOptions& o, Recorder& rec) {
  const auto r = validate_norden(chart, pts, o.tol);
  const std::size_t np = pts.size();
  rec.assertion("norden.metric-symmetric", "g_ij = g_ji", np, r.max_metric_asymmetry(), o.tol);
  const double det = r.min_abs_det();
  rec.assertion("norden.metric-nondegenerate", "det g != 0", np, std::max(0.0, o.tol - det), 0.0,
                "min |det g| = " + sci(det));
  rec.assertion("norden.j-square", "J^2 = -I", np, r.max_j_square(), o.tol);
  rec.assertion("norden.j-g-symmetric", "g(JX,Y) = g(X,JY)", np, r.max_g_asymmetry_of_j(), o.tol);
  return r.passed();
}

struct Hypotheses {
  bool integrable = false;  // N(J) = 0
  double nijenhuis = 0.0;
};

Hypotheses integrability(const NordenChart& chart, std::span<const PointSample> pts, double tol) {
  Hypotheses h;
  for (const auto& p : pts) h.nijenhuis = std::max(h.nijenhuis, max_abs(nijenhuis_J_at(chart, p.point)));
  h.integrable = h.nijenhuis <= tol;
  return h;
}

void base_suite(const std::shared_ptr<const NordenChart>& chart, std::span<const PointSample> pts,
                const SuiteOptions& o, Recorder& rec) {
  const auto lc = Connection::levi_civita(chart);
  const auto declared = Connection::declared(chart);
  Max metric, tors, ncov, dtors, dcurv;
  for (const auto& p : pts) {
    const auto local = local_geometry(lc, p.point, o.order);
    metric.add(max_abs(values(covariant_derivative_metric(local.gamma, local.structure.g))));
    tors.add(max_abs(values(torsion(local.gamma))));
    const auto N = values(nijenhuis_J(local.structure.J));
    const auto Nc = values(nijenhuis_J_covariant(local.structure.J, local.gamma));
    double d = 0.0;
    for (auto a = N.begin(), b = Nc.begin(); a != N.end(); ++a, ++b) d = std::max(d, std::abs(*a - *b));
    ncov.add(d);
    const auto dl = local_geometry(declared, p.point, o.order);
    dtors.add(max_abs(values(torsion(dl.gamma))));
    dcurv.add(max_curvature(dl.gamma));
  }
  const std::size_t np = pts.size();
  rec.assertion("base.levi-civita-metric", "nabla g = 0", np, metric.value, o.tol);
  rec.assertion("base.levi-civita-torsion", "T(nabla) = 0", np, tors.value, o.tol);
  rec.assertion("base.nijenhuis-covariant", "N(J) from partial and covariant derivatives agree", np, ncov.value, o.tol);

  const auto h = integrability(*chart, pts, o.tol);
  const std::string why = "N(J) != 0 (max |N(J)| = " + sci(h.nijenhuis) + ")";
  if (h.integrable) {
    const auto D = Connection::canonical(chart);
    const auto report = verify_canonical(D, pts, o.tol);
    const auto m = report.max();
    rec.assertion("base.canonical-metric", "D g = 0", np, m.metric, o.tol);
    rec.assertion("base.canonical-torsion-j", "T(JX,Y) + T(X,JY) = 0", np, m.torsion_j, o.tol);
    rec.assertion("base.canonical-torsion-cyclic", "g(T(X,Y),Z) + cyclic = 0", np, m.torsion_cyclic, o.tol);
    rec.assertion("base.canonical-dj", "D J = 0", np, m.dj, o.tol);
  } else {
    rec.not_met("base.canonical-metric", "D g = 0", o.tol, why);
    rec.not_met("base.canonical-torsion-j", "T(JX,Y) + T(X,JY) = 0", o.tol, why);
    rec.not_met("base.canonical-torsion-cyclic", "g(T(X,Y),Z) + cyclic = 0", o.tol, why);
    rec.not_met("base.canonical-dj", "D J = 0", o.tol, why);
  }
  rec.comparison("base.declared-torsion", "max |T| of the declared connection", np, dtors.value, o.tol);
  rec.comparison("base.declared-curvature", "max |R| of the declared connection", np, dcurv.value, o.tol);
}

void generalized_suite(const std::shared_ptr<const NordenChart>& chart, std::span<const PointSample> pts,
                       const SuiteOptions& o, Recorder& rec) {
  const std::size_t n = chart->dimension;
  const auto declared = Connection::declared(chart);
  Max sym_anti, met_sym, jsq, jinv, calib, br_anti, leibniz, jac_defect, jac_mismatch, curv;
  Max n_anti, n_tensor, proj, proj_alg, gsym, gj, gmat;
  std::size_t mismatches = 0;
  const auto sig = signature(pair_metric_gram(n));
  bool calibrated = true;

  for (const auto& p : pts) {
    const auto local = local_geometry(declared, p.point, o.order);
    const auto& coords = local.coords;
    const std::uint64_t d0 = 16 * p.index;
    const auto s = polynomial_section(coords, n, o.seed, d0);
    const auto t = polynomial_section(coords, n, o.seed, d0 + 1);
    const auto sv = s.value();
    const auto tv = t.value();

    sym_anti.add(std::abs(pair_symplectic(sv, tv) + pair_symplectic(tv, sv)));
    met_sym.add(std::abs(pair_metric(sv, tv) - pair_metric(tv, sv)));

    const auto op = build_Jhat(*chart, p.point);
    const auto Jh = op.full();
    jsq.add(max_abs(Jh * Jh + identity_like(2 * n, 1.0)));
    const auto basis = basis_sections(n, coords.front());
    double inv = 0.0;
    for (const auto& a : basis)
      for (const auto& b : basis)
        inv = std::max(inv, std::abs(pair_symplectic(op.apply(a.value()), op.apply(b.value())) -
                                     pair_symplectic(a.value(), b.value())));
    jinv.add(inv);
    const auto g = metric_at(*chart, p.point);
    double cal = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        cal = std::max(cal, std::abs(2.0 * pair_symplectic(basis[i].value(), op.apply(basis[j].value())) - g(i, j)));
    calib.add(cal);
    calibrated = calibrated && classify_calibration(g) == Calibration::calibrated;

    br_anti.add(max_abs_value(bracket(local.gamma, s, t) + bracket(local.gamma, t, s)));
    const auto f = polynomial_function(coords, n, o.seed, d0 + 2);
    Jet tf = Jet::constant_like(f.derivative(0), 0.0);
    for (std::size_t i = 0; i < n; ++i) tf += t.vector[i] * f.derivative(i);
    leibniz.add(max_abs_value(bracket(local.gamma, scale(f, s), t) - scale(f, bracket(local.gamma, s, t)) + scale(tf, s)));

    const auto R = values(curvature(local.gamma));
    curv.add(max_abs(R));
    double jd = 0.0;
    double jm = 0.0;
    const std::size_t m = 2 * n;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b)
        for (std::size_t c = b + 1; c < m; ++c) {
          const auto& A = basis[a];
          const auto& B = basis[b];
          const auto& C = basis[c];
          const auto J = bracket(local.gamma, bracket(local.gamma, A, B), C) +
                         bracket(local.gamma, bracket(local.gamma, B, C), A) +
                         bracket(local.gamma, bracket(local.gamma, C, A), B);
          // constant sections: the defect is the form sum_cyc X^i Y^j zeta_l R^l_{ij.}
          const SectionValue trip[3] = {A.value(), B.value(), C.value()};
          std::vector<double> expected(n, 0.0);
          for (int r = 0; r < 3; ++r) {
            const auto& X = trip[r];
            const auto& Y = trip[(r + 1) % 3];
            const auto& Z = trip[(r + 2) % 3];
            for (std::size_t q = 0; q < n; ++q)
              for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                  for (std::size_t l = 0; l < n; ++l) expected[q] += X.vector[i] * Y.vector[j] * Z.form[l] * R(l, i, j, q);
          }
          const auto v = J.value();
          jd = std::max(jd, max_abs_value(J));
          for (std::size_t q = 0; q < n; ++q)
            jm = std::max({jm, std::abs(v.vector[q]), std::abs(v.form[q] - expected[q])});
        }
    jac_defect.add(jd);
    jac_mismatch.add(jm);

    n_anti.add(max_abs_value(nijenhuis_generalized(local, s, t) + nijenhuis_generalized(local, t, s)));
    {
      const double fv = f.value();
      const auto lhs = nijenhuis_generalized(local, scale(f, s), t).value();
      const auto rhs = nijenhuis_generalized(local, s, t).value();
      double d = 0.0;
      double scale_ref = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        d = std::max({d, std::abs(lhs.vector[i] - fv * rhs.vector[i]), std::abs(lhs.form[i] - fv * rhs.form[i])});
        scale_ref = std::max({scale_ref, std::abs(fv * rhs.vector[i]), std::abs(fv * rhs.form[i])});
      }
      n_tensor.add(d / scale_ref);
    }

    const auto ip = integrability_at(local);
    const bool holds = ip.nijenhuis_J <= o.tol && ip.nabla_J <= o.tol && ip.d_nabla_g_condition <= o.tol;
    if (holds != (ip.nijenhuis_jhat <= o.tol)) ++mismatches;

    const ComplexSectionJet cs{s, polynomial_section(coords, n, o.seed, d0 + 3)};
    const ComplexSectionJet ct{t, polynomial_section(coords, n, o.seed, d0 + 4)};
    const auto pr = projection_identity(local, cs, ct);
    proj.add(std::max(pr.plus, pr.minus));
    const auto Jm = jhat_matrix(local.structure);
    const auto pp = project(Jm, cs, true);
    const auto pm = project(Jm, cs, false);
    const auto ppp = project(Jm, pp, true);
    const auto pmm = project(Jm, pm, false);
    proj_alg.add(std::max({max_abs_value(pp.re + pm.re - cs.re), max_abs_value(pp.im + pm.im - cs.im),
                           max_abs_value(ppp.re - pp.re), max_abs_value(ppp.im - pp.im),
                           max_abs_value(pmm.re - pm.re), max_abs_value(pmm.im - pm.im)}));

    gsym.add(std::abs(ghat(*chart, sv, tv, p.point) - ghat(*chart, tv, sv, p.point)));
    gj.add(std::abs(ghat(*chart, op.apply(sv), tv, p.point) - ghat(*chart, sv, op.apply(tv), p.point)));
    const auto G = values(ghat_matrix(local.structure));
    const auto Gt = G * stacked_value(t);
    double quad = 0.0;
    const auto ss = stacked_value(s);
    for (std::size_t i = 0; i < ss.size(); ++i) quad += ss[i] * Gt[i];
    gmat.add(std::abs(quad - ghat(*chart, sv, tv, p.point)));
  }

  const std::size_t np = pts.size();
  const double nn = static_cast<double>(n);
  rec.assertion("gen.pair-symplectic-antisymmetry", "(s,t) = -(t,s)", np, sym_anti.value, o.tol);
  rec.assertion("gen.pair-metric-symmetry", "<s,t> = <t,s>", np, met_sym.value, o.tol);
  rec.assertion("gen.pair-metric-signature", "<,> has signature (n,n)", np,
                std::abs(sig.positive - nn) + std::abs(sig.negative - nn), 0.0,
                "signature (" + std::to_string(sig.positive) + "," + std::to_string(sig.negative) + ")");
  rec.assertion("gen.jhat-square", "J-hat^2 = -I", np, jsq.value, o.tol);
  rec.assertion("gen.jhat-symplectic-invariance", "(J-hat s, J-hat t) = (s,t)", np, jinv.value, o.tol);
  rec.assertion("gen.jhat-calibration", "g(X,Y) = 2(X, J-hat Y)", np, calib.value, o.tol,
                calibrated ? "calibrated" : "pseudo-calibrated, not calibrated");
  rec.assertion("gen.bracket-antisymmetry", "[s,t] = -[t,s]", np, br_anti.value, o.tol);
  rec.assertion("gen.bracket-leibniz", "[f s, t] = f[s,t] - t(f) s", np, leibniz.value, o.tol);
  if (curv.value <= o.tol) {
    rec.assertion("gen.jacobi-flat", "Jacobi identity holds for a flat connection", np, jac_defect.value, o.tol);
  } else {
    rec.not_met("gen.jacobi-flat", "Jacobi identity holds for a flat connection", o.tol,
                "R != 0 (max |R| = " + sci(curv.value) + ", max Jacobi defect = " + sci(jac_defect.value) + ")");
  }
  rec.assertion("gen.jacobi-curvature", "Jacobi defect on basis triples equals the curvature form", np,
                jac_mismatch.value, o.tol);
  rec.assertion("gen.nijenhuis-antisymmetry", "N(s,t) = -N(t,s)", np, n_anti.value, o.tol);
  rec.assertion("gen.nijenhuis-tensoriality", "N(f s, t) = f N(s,t)", np, n_tensor.value, o.tol);
  rec.assertion("gen.integrability-equivalence",
                "N(J) = 0, nabla J = 0, d g condition <=> N(J-hat) = 0 (mismatching points)", np,
                static_cast<double>(mismatches), 0.0);
  rec.assertion("gen.projection-identity", "P-+[P+- s, P+- t] = -1/4 P-+ N(s,t)", np, proj.value, o.tol);
  rec.assertion("gen.projector-algebra", "P+ + P- = I, P+-^2 = P+-", np, proj_alg.value, o.tol);
  rec.assertion("gen.ghat-symmetry", "g-hat(s,t) = g-hat(t,s)", np, gsym.value, o.tol);
  rec.assertion("gen.ghat-jhat-symmetric", "g-hat(J-hat s, t) = g-hat(s, J-hat t)", np, gj.value, o.tol);
  rec.assertion("gen.ghat-matrix", "g-hat Gram matrix agrees with the defining formula", np, gmat.value, o.tol);

  const auto h = integrability(*chart, pts, o.tol);
  const char* ids[] = {"gen.integrability-canonical", "gen.dhat-parallel-j", "gen.dhat-parallel-g",
                       "gen.dhat-curvature-block", "gen.dhat-flat"};
  const char* anchors[] = {"the three conditions and N^D(J-hat) vanish for D canonical", "D-hat J-hat = 0",
                           "D-hat g-hat = 0", "R^D-hat = (R^D, -R^D*)", "D flat implies D-hat flat"};
  if (!h.integrable) {
    for (int i = 0; i < 5; ++i) rec.not_met(ids[i], anchors[i], o.tol, "N(J) != 0 (max |N(J)| = " + sci(h.nijenhuis) + ")");
    return;
  }
  const auto D = Connection::canonical(chart);
  Max cond, jp, gp, block, dcurv, dhat_curv;
  for (const auto& p : pts) {
    const auto local = local_geometry(D, p.point, o.order);
    const auto ip = integrability_at(local);
    cond.add(std::max({ip.nijenhuis_J, ip.nabla_J, ip.d_nabla_g_condition, ip.nijenhuis_jhat}));
    const auto dp = dhat_at(local);
    jp.add(dp.j_parallel);
    gp.add(dp.g_parallel);
    block.add(dp.curvature_block);
    dhat_curv.add(dp.curvature_norm);
    dcurv.add(max_curvature(local.gamma));
  }
  rec.assertion(ids[0], anchors[0], np, cond.value, o.tol);
  rec.assertion(ids[1], anchors[1], np, jp.value, o.tol);
  rec.assertion(ids[2], anchors[2], np, gp.value, o.tol);
  rec.assertion(ids[3], anchors[3], np, block.value, o.tol);
  if (dcurv.value <= o.tol) {
    rec.assertion(ids[4], anchors[4], np, dhat_curv.value, o.tol);
  } else {
    rec.not_met(ids[4], anchors[4], o.tol, "R^D != 0 (max |R^D| = " + sci(dcurv.value) + ")");
  }
}

void cotangent_suite(const std::shared_ptr<const NordenChart>& chart, std::span<const CotangentPoint> pts,
                     const SuiteOptions& o, Recorder& rec) {
  const std::size_t n = chart->dimension;
  const std::size_t m = 2 * n;
  const auto declared = Connection::declared(chart);
  const auto lc = Connection::levi_civita(chart);
  const bool declared_is_lc = chart->connection.kind == ConnectionKind::levi_civita;

  Max round_trip, det, lift, torsion_max, curv_max, omega_defect, omega_mismatch, br_res, br_mismatch;
  Max jsq, gasym, jg, gdet, two_path, n_vert, n_mixed, n_horiz, n_norm, conds;
  Max o_metric, o_torsion, flat_red, lc_curv, lc_dj;
  SlotDiscrepancy closed_vs_oracle;
  double min_gdet = INFINITY;

  for (const auto& p : pts) {
    const auto ctx = cotangent_context(declared, p, o.order);
    const auto F = values(ctx.frame);
    const auto Finv = values(ctx.frame_inv);

    TensorValue t(m, {Variance::up, Variance::down, Variance::down});
    for (std::size_t i = 0; i < t.components().size(); ++i)
      t.components()[i] = 2.0 * uniform01(o.seed ^ kSectionSalt, p.index, 5000 + i) - 1.0;
    const auto back = t.to_basis(F, Finv).from_basis(F, Finv);
    double rt = 0.0;
    for (std::size_t i = 0; i < t.components().size(); ++i)
      rt = std::max(rt, std::abs(back.components()[i] - t.components()[i]));
    round_trip.add(rt);
    det.add(std::abs(determinant(F) - 1.0));
    lift.add(lift_brackets_check(ctx).max());

    torsion_max.add(max_abs(values(torsion(ctx.gamma))));
    curv_max.add(max_curvature(ctx.gamma));
    const auto sp = symplectic_pullback(ctx);
    omega_defect.add(sp.defect);
    omega_mismatch.add(sp.mismatch);

    const auto basis = basis_sections(n, ctx.coords.front());
    double res = 0.0;
    double mis = 0.0;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = a + 1; b < m; ++b) {
        const auto r = phi_bracket_check(ctx, basis[a], basis[b]);
        res = std::max(res, r.residual);
        mis = std::max(mis, r.mismatch);
      }
    const auto r = phi_bracket_check(ctx, polynomial_section(ctx.coords, n, o.seed, 16 * p.index + 5),
                                     polynomial_section(ctx.coords, n, o.seed, 16 * p.index + 6));
    br_res.add(std::max(res, r.residual));
    br_mismatch.add(std::max(mis, r.mismatch));

    const auto ts = tilde_structures(ctx);
    jsq.add(ts.j_square);
    gasym.add(ts.g_asymmetry);
    jg.add(ts.j_g_symmetry);
    min_gdet = std::min(min_gdet, ts.abs_det);
    two_path.add(ts.two_path);

    const auto tn = tilde_nijenhuis(ctx);
    n_vert.add(tn.vertical);
    n_mixed.add(tn.mixed);
    n_horiz.add(tn.horizontal);
    n_norm.add(tn.norm);
    const auto ip = integrability_at(ctx.local());
    conds.add(std::max({ip.nijenhuis_J, ip.nabla_J, ip.d_nabla_g_condition}));

    const auto lctx = declared_is_lc ? ctx : cotangent_context(lc, p, o.order);
    const auto oracle = levi_civita_oracle(lctx);
    o_metric.add(oracle.metric_defect);
    o_torsion.add(oracle.torsion_defect);
    const auto closed = closed_form_connection(lctx);
    const auto d = slot_discrepancy(closed, oracle.frame, n);
    closed_vs_oracle.horizontal = std::max(closed_vs_oracle.horizontal, d.horizontal);
    closed_vs_oracle.vertical_horizontal = std::max(closed_vs_oracle.vertical_horizontal, d.vertical_horizontal);
    closed_vs_oracle.horizontal_vertical = std::max(closed_vs_oracle.horizontal_vertical, d.horizontal_vertical);
    closed_vs_oracle.vertical = std::max(closed_vs_oracle.vertical, d.vertical);
    const auto flat = flat_reduction(lctx);
    flat_red.add(std::max(slot_discrepancy(closed, flat, n).max(), slot_discrepancy(oracle.frame, flat, n).max()));
    lc_curv.add(max_curvature(lctx.gamma));
    lc_dj.add(max_abs(values(covariant_derivative_J(lctx.gamma, lctx.base.J))));
  }

  const std::size_t np = pts.size();
  rec.assertion("cot.frame-round-trip", "frame -> coordinates -> frame is the identity", np, round_trip.value, o.tol);
  rec.assertion("cot.frame-determinant", "det of the frame change = 1", np, det.value, o.tol);
  rec.assertion("cot.lift-brackets", "[X_i^H,X_j^H] = y_k R^k_{ijl} d/dy_l, [X_i^H,d/dy_j] = -Gamma^j_{il} d/dy_l", np,
                lift.value, o.tol);
  const char* omega_anchor = "Phi* Omega = -2( , ) for torsion-free connections";
  if (torsion_max.value <= o.tol) {
    rec.assertion("cot.phi-omega-pullback", omega_anchor, np, omega_defect.value, o.tol);
  } else {
    rec.not_met("cot.phi-omega-pullback", omega_anchor, o.tol,
                "T != 0 (max |T| = " + sci(torsion_max.value) + ", max defect = " + sci(omega_defect.value) + ")");
  }
  rec.assertion("cot.phi-omega-torsion", "Omega(Phi s, Phi t) + 2(s,t) = y_k T^k_{ij} on horizontal pairs", np,
                omega_mismatch.value, o.tol);
  const char* bracket_anchor = "Phi [s,t] = [Phi s, Phi t] for flat connections";
  if (curv_max.value <= o.tol) {
    rec.assertion("cot.phi-bracket-flat", bracket_anchor, np, br_res.value, o.tol);
  } else {
    rec.not_met("cot.phi-bracket-flat", bracket_anchor, o.tol,
                "R != 0 (max |R| = " + sci(curv_max.value) + ", max residual = " + sci(br_res.value) + ")");
  }
  rec.assertion("cot.phi-bracket-curvature", "[Phi s, Phi t] - Phi [s,t] = X^i Y^j y_k R^k_{ijl} d/dy_l", np,
                br_mismatch.value, o.tol);
  rec.assertion("cot.tilde-j-square", "J~^2 = -I", np, jsq.value, o.tol);
  rec.assertion("cot.tilde-g-symmetric", "g~ is symmetric", np, gasym.value, o.tol);
  rec.assertion("cot.tilde-j-g-symmetric", "g~(J~u,v) = g~(u,J~v)", np, jg.value, o.tol);
  rec.assertion("cot.tilde-nondegenerate", "det g~ != 0", np, std::max(0.0, o.tol - min_gdet), 0.0,
                "min |det g~| = " + sci(min_gdet));
  rec.assertion("cot.tilde-two-path", "lift formulas agree with Phi J-hat Phi^-1 and Phi_* g-hat", np, two_path.value,
                o.tol);
  rec.assertion("cot.tilde-nijenhuis-vertical", "N~(d/dy_i,d/dy_j) = Phi N(J-hat)(dx^i,dx^j)", np, n_vert.value, o.tol);
  rec.assertion("cot.tilde-nijenhuis-mixed", "N~(X_i^H,d/dy_j) = Phi N(J-hat)(X_i,dx^j)", np, n_mixed.value, o.tol);
  rec.comparison("cot.tilde-nijenhuis-horizontal",
                 "N~(X_i^H,X_j^H) = Phi N(J-hat)(X_i,X_j) + y-linear curvature terms", np, n_horiz.value, o.tol);
  const char* vanish_anchor = "N~ = 0 when N(J-hat) = 0 and the connection is flat";
  if (conds.value <= o.tol && curv_max.value <= o.tol) {
    rec.assertion("cot.tilde-nijenhuis-vanishes", vanish_anchor, np, n_norm.value, o.tol);
  } else {
    rec.not_met("cot.tilde-nijenhuis-vanishes", vanish_anchor, o.tol,
                "conditions max " + sci(conds.value) + ", max |R| = " + sci(curv_max.value));
  }
  rec.assertion("cot.oracle-metric", "Levi-Civita oracle: nabla~ g~ = 0", np, o_metric.value, o.tol);
  rec.assertion("cot.oracle-torsion", "Levi-Civita oracle: torsion = 0", np, o_torsion.value, o.tol);
  const char* flat_anchor = "flat Kahler reduction of nabla~ (closed form and oracle)";
  if (lc_curv.value <= o.tol && lc_dj.value <= o.tol) {
    rec.assertion("cot.flat-reduction", flat_anchor, np, flat_red.value, o.tol);
  } else {
    rec.not_met("cot.flat-reduction", flat_anchor, o.tol,
                "not flat Kahler (max |R| = " + sci(lc_curv.value) + ", max |nabla J| = " + sci(lc_dj.value) + ")");
  }
  rec.comparison("cot.closed-form-compare-hh", "closed form vs oracle: nabla~_{X^H} X^H", np, closed_vs_oracle.horizontal, o.tol);
  rec.comparison("cot.closed-form-compare-vh", "closed form vs oracle: nabla~_{d/dy} X^H", np, closed_vs_oracle.vertical_horizontal,
                 o.tol);
  rec.comparison("cot.closed-form-compare-hv", "closed form vs oracle: nabla~_{X^H} d/dy", np, closed_vs_oracle.horizontal_vertical,
                 o.tol);
  rec.comparison("cot.closed-form-compare-vv", "closed form vs oracle: nabla~_{d/dy} d/dy", np, closed_vs_oracle.vertical, o.tol);
}

void kahler_flat(const std::shared_ptr<const NordenChart>& chart, std::span<const CotangentPoint> pts,
                 const SuiteOptions& o, Recorder& rec) {
  const auto r = kahler_flat_suite(chart, pts, o.tol);
  const char* nj = "nabla~ J~ = 0 on a flat Kahler Norden base";
  const char* rc = "R~ = 0 on a flat Kahler Norden base";
  if (!r.hypothesis) {
    std::string why;
    if (r.base_curvature > o.tol) why = "R != 0 (max |R| = " + sci(r.base_curvature) + ")";
    if (r.base_nabla_j > o.tol) why += (why.empty() ? "" : "; ") + std::string("nabla J != 0 (max |nabla J| = ") +
                                       sci(r.base_nabla_j) + ")";
    rec.not_met("kf.tilde-nabla-j", nj, o.tol, why);
    rec.not_met("kf.tilde-curvature", rc, o.tol, why);
    return;
  }
  const auto mx = r.max();
  rec.assertion("kf.tilde-nabla-j", nj, r.points.size(), mx.nabla_j, o.tol);
  rec.assertion("kf.tilde-curvature", rc, r.points.size(), mx.curvature, o.tol);
}

void check_options(Suite suite, const SuiteOptions& o) {
  if (o.points == 0) throw std::invalid_argument("--points must be positive");
  if (!(o.tol > 0.0) || !std::isfinite(o.tol)) throw std::invalid_argument("--tol must be a positive number");
  if (o.order < minimum_order(suite) || o.order > kMaxJetOrder)
    throw std::invalid_argument("--order must be between " + std::to_string(minimum_order(suite)) + " and " +
                                std::to_string(kMaxJetOrder) + " for suite " + std::string(to_string(suite)));
  if (!(o.fiber_box.lo < o.fiber_box.hi)) throw std::invalid_argument("--fiber-box needs lo < hi");
}

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::hypothesis_not_met:
      return "hypothesis-not-met";
    case CheckStatus::comparison_only:
      return "comparison-only";
  }
  return "fail";
}

const CheckRecord* SuiteReport::find(std::string_view id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

bool SuiteReport::passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.status == CheckStatus::fail; });
}

std::string to_text(const SuiteReport& r) {
  std::ostringstream out;
  out << "suite " << r.suite << "  chart " << r.chart << "  seed " << r.options.seed << "  points " << r.options.points
      << "  order " << r.options.order << "  tol " << sci(r.options.tol) << "\n";
  std::size_t failed = 0;
  for (const auto& c : r.checks) {
    std::string status(to_string(c.status));
    std::transform(status.begin(), status.end(), status.begin(), [](unsigned char ch) { return std::toupper(ch); });
    out << status << "  " << c.id << "  max " << sci(c.max_violation) << "  tol " << sci(c.tol) << "  [" << c.anchor
        << "]";
    if (!c.note.empty()) out << "  " << c.note;
    out << "\n";
    if (c.status == CheckStatus::fail) ++failed;
  }
  out << (failed == 0 ? "OK" : "FAILED") << ": " << r.checks.size() << " checks, " << failed << " failed\n";
  return out.str();
}

std::string to_json(const SuiteReport& r) {
  nlohmann::ordered_json j;
  j["suite"] = r.suite;
  j["chart"] = r.chart;
  j["meta"] = {{"seed", r.options.seed},
               {"points", r.options.points},
               {"order", r.options.order},
               {"tol", r.options.tol},
               {"fiber_box", {r.options.fiber_box.lo, r.options.fiber_box.hi}},
               {"version", r.version}};
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json e;
    e["id"] = c.id;
    e["anchor"] = c.anchor;
    e["points"] = c.points;
    e["max_violation"] = c.max_violation;
    e["tol"] = c.tol;
    e["status"] = to_string(c.status);
    if (!c.note.empty()) e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

Suite parse_suite(std::string_view name) {
  if (name == "base") return Suite::base;
  if (name == "generalized") return Suite::generalized;
  if (name == "cotangent") return Suite::cotangent;
  if (name == "kahler-flat") return Suite::kahler_flat;
  if (name == "all") return Suite::all;
  throw std::invalid_argument("unknown suite '" + std::string(name) + "'");
}

std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::base:
      return "base";
    case Suite::generalized:
      return "generalized";
    case Suite::cotangent:
      return "cotangent";
    case Suite::kahler_flat:
      return "kahler-flat";
    case Suite::all:
      return "all";
  }
  return "all";
}

int minimum_order(Suite s) {
  switch (s) {
    case Suite::base:
    case Suite::generalized:
      return 2;
    default:
      return 3;
  }
}

std::string_view library_version() { return NORDENLAB_VERSION; }

SuiteReport run_validate(std::shared_ptr<const NordenChart> chart, const SuiteOptions& options) {
  if (options.points == 0) throw std::invalid_argument("--points must be positive");
  SuiteReport report{"validate", chart->name, options, std::string(library_version()), {}};
  Recorder rec(report);
  const auto pts = sample_points(*chart, options.seed, options.points);
  norden_checks(*chart, pts, options, rec);
  return report;
}

SuiteReport run_check(std::shared_ptr<const NordenChart> chart, Suite suite, const SuiteOptions& options) {
  check_options(suite, options);
  SuiteReport report{std::string(to_string(suite)), chart->name, options, std::string(library_version()), {}};
  Recorder rec(report);
  const auto pts = sample_points(*chart, options.seed, options.points);
  if (!norden_checks(*chart, pts, options, rec)) return report;

  if (suite == Suite::base || suite == Suite::all) base_suite(chart, pts, options, rec);
  if (suite == Suite::generalized || suite == Suite::all) generalized_suite(chart, pts, options, rec);
  if (suite == Suite::cotangent || suite == Suite::kahler_flat || suite == Suite::all) {
    const auto cpts = sample_cotangent_points(*chart, options.seed, options.points, options.fiber_box);
    if (suite != Suite::kahler_flat) cotangent_suite(chart, cpts, options, rec);
    if (suite != Suite::cotangent) kahler_flat(chart, cpts, options, rec);
  }
  return report;
}

SectionJet polynomial_section(std::span<const Jet> coords, std::size_t n, std::uint64_t seed, std::uint64_t draw) {
  std::vector<Jet> d;
  for (std::size_t i = 0; i < n; ++i) d.push_back(coords[i] - coords[i].value());
  std::uint64_t k = 0;
  auto coef = [&] { return 2.0 * uniform01(seed ^ kSectionSalt, draw, k++) - 1.0; };
  auto component = [&] {
    Jet c = Jet::constant_like(coords[0], coef());
    for (std::size_t i = 0; i < n; ++i) c += coef() * d[i];
    c += coef() * d[0] * d[(1 % n)];
    c += coef() * d[n - 1] * d[n - 1];
    return c;
  };
  SectionJet s;
  for (std::size_t i = 0; i < n; ++i) s.vector.push_back(component());
  for (std::size_t i = 0; i < n; ++i) s.form.push_back(component());
  return s;
}

Jet polynomial_function(std::span<const Jet> coords, std::size_t n, std::uint64_t seed, std::uint64_t draw) {
  std::uint64_t k = 0;
  auto coef = [&] { return 2.0 * uniform01(seed ^ kSectionSalt ^ 0xF00DULL, draw, k++) - 1.0; };
  Jet f = Jet::constant_like(coords[0], 2.0 + coef());
  for (std::size_t i = 0; i < n; ++i) {
    const Jet di = coords[i] - coords[i].value();
    f += coef() * di + coef() * di * di;
  }
  return f;
}

}  // namespace nordenlab
