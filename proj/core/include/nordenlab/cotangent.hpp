#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nordenlab/genbundle.hpp"

namespace nordenlab {

/// A point of T*(M) in coordinates (x~, y).
struct CotangentPoint {
  std::vector<double> base;
  std::vector<double> fiber;
  std::uint64_t index = 0;
};

/// Base points from sample_points; fibre coordinates uniform in `fiber_box`,
/// except that point 0 has y = 0 and point 1 has |y| = 1.
std::vector<CotangentPoint> sample_cotangent_points(const NordenChart& chart, std::uint64_t seed, std::size_t count,
                                                    Interval fiber_box = {-1.0, 1.0});

/// Everything about one cotangent point as jets in the 2n variables
/// (x~^1..x~^n, y_1..y_n).
///
/// The anholonomic frame is e_i = X_i^H = d/dx~^i + y_k Gamma^k_{il} d/dy_l and
/// e_{n+j} = d/dy_j. frame(mu, a) is the coordinate component mu of e_a.
struct CotangentContext {
  std::size_t n = 0;
  std::vector<Jet> coords;
  StructureJets base;
  Christoffel gamma;
  Matrix<Jet> frame;
  Matrix<Jet> frame_inv;
  Matrix<Jet> jhat;     // J~ in the frame (equal to J-hat under Phi)
  Matrix<Jet> ghat;     // g~ in the frame
  Matrix<Jet> j_coord;  // F J-hat F^{-1}
  Matrix<Jet> g_coord;  // F^{-T} g-hat F^{-1}

  /// The same data as a LocalGeometry over the base, for genbundle calls.
  LocalGeometry local() const;
};

CotangentContext cotangent_context(const Connection& conn, const CotangentPoint& p, int order = kMaxJetOrder);

/// The frame-change matrix (I, 0; y Gamma, I) at p.
Matrix<double> frame(const Connection& conn, const CotangentPoint& p);

/// Coordinate components of the Lie bracket of two vector fields on T*(M).
std::vector<Jet> lie_bracket(std::span<const Jet> u, std::span<const Jet> v);

struct LiftBracketResidual {
  double horizontal = 0.0;  // [X_i^H, X_j^H] vs y_k R^k_{ijl} d/dy_l
  double mixed = 0.0;       // [X_i^H, d/dy_j] vs -Gamma^j_{il} d/dy_l
  double vertical = 0.0;    // [d/dy_i, d/dy_j] vs 0
  double max() const;
};
LiftBracketResidual lift_brackets_check(const CotangentContext& ctx);

/// Coordinate components of Phi(s): X^i X_i^H + xi_j d/dy_j.
std::vector<Jet> phi_nabla(const CotangentContext& ctx, const SectionJet& s);

/// Omega = dy_k ^ dx~^k on coordinate components.
double omega(std::span<const double> u, std::span<const double> v);
struct SymplecticPullback {
  double defect = 0.0;         // max over basis pairs of |Omega(Phi s, Phi t) + 2 (s, t)|
  double torsion_term = 0.0;   // max |y_k T^k_{ij}|
  double mismatch = 0.0;       // defect against Omega(X_i^H, X_j^H) = y_k T^k_{ij}
};
SymplecticPullback symplectic_pullback(const CotangentContext& ctx);

struct PhiBracketResidual {
  double residual = 0.0;        // |[Phi s, Phi t] - Phi [s, t]|
  double curvature_term = 0.0;  // |X^i Y^j y_k R^k_{ijl}|
  double mismatch = 0.0;        // |[Phi s, Phi t] - Phi [s, t] - X^i Y^j y_k R^k_{ijl} d/dy_l|
};
PhiBracketResidual phi_bracket_check(const CotangentContext& ctx, const SectionJet& s, const SectionJet& t);

struct TildeStructures {
  Matrix<double> j_frame;
  Matrix<double> g_frame;
  Matrix<double> j_coord;
  Matrix<double> g_coord;
  double j_square = 0.0;     // max |J~^2 + I|
  double g_asymmetry = 0.0;  // max |g~ - g~^T|
  double j_g_symmetry = 0.0; // max |g~(J~u, v) - g~(u, J~v)| on the frame
  double abs_det = 0.0;      // |det g~|
  double two_path = 0.0;     // lift formulas applied to d/dx~, d/dy vs Phi J-hat Phi^{-1}
};
TildeStructures tilde_structures(const CotangentContext& ctx);

struct TildeNijenhuis {
  Array3<double> direct;     // frame components of N(J~), direct(c, a, b)
  Array3<double> expected;   // Phi(N(J-hat)) plus the curvature correction on horizontal pairs
  double vertical = 0.0;     // max discrepancy on (d/dy, d/dy)
  double mixed = 0.0;        // on (X^H, d/dy)
  double horizontal = 0.0;   // on (X^H, X^H)
  double norm = 0.0;         // max |N(J~)|
};
TildeNijenhuis tilde_nijenhuis(const CotangentContext& ctx);

/// coef(c, a, b) is the e_c component of nabla~_{e_a} e_b.
using FrameConnection = Array3<double>;

/// The closed-form coefficients of the Levi-Civita connection of g~ as
/// printed, read literally. `ctx` must be built from the Levi-Civita
/// connection of g.
FrameConnection closed_form_connection(const CotangentContext& ctx);

/// The flat Kahler reduction: Gamma^r_{ij} on (X^H, X^H), -Gamma^j_{is} on
/// (X^H, d/dy), zero elsewhere.
FrameConnection flat_reduction(const CotangentContext& ctx);

struct OracleConnection {
  Christoffel coordinate;    // Levi-Civita of g~ in (x~, y)
  FrameConnection frame;
  double metric_defect = 0.0;   // coordinate and frame nabla~ g~
  double torsion_defect = 0.0;  // frame torsion against structure functions
};
OracleConnection levi_civita_oracle(const CotangentContext& ctx);

struct SlotDiscrepancy {
  double horizontal = 0.0;  // (X^H, X^H)
  double vertical_horizontal = 0.0;  // nabla~_{d/dy} X^H
  double horizontal_vertical = 0.0;  // nabla~_{X^H} d/dy
  double vertical = 0.0;    // (d/dy, d/dy)
  double max() const;
};
SlotDiscrepancy slot_discrepancy(const FrameConnection& a, const FrameConnection& b, std::size_t n);

struct KahlerFlatPoint {
  double nabla_j = 0.0;    // max frame |nabla~ J~|
  double curvature = 0.0;  // max frame |R~|
};
KahlerFlatPoint kahler_flat_at(const CotangentContext& ctx, const OracleConnection& oracle);

struct KahlerFlatReport {
  double tol = 0.0;
  bool hypothesis = false;
  double base_curvature = 0.0;  // max |R| of the base Levi-Civita connection
  double base_nabla_j = 0.0;    // max |nabla J|
  std::vector<KahlerFlatPoint> points;
  KahlerFlatPoint max() const;
  bool passed() const;
};
KahlerFlatReport kahler_flat_suite(std::shared_ptr<const NordenChart> chart, std::span<const CotangentPoint> points,
                                   double tol);

/// Frame components of coordinate tensors: one upper slot first, then lower slots.
Array3<double> to_frame(const Array3<double>& coordinate, const Matrix<double>& F, const Matrix<double>& F_inv);
Array4<double> to_frame(const Array4<double>& coordinate, const Matrix<double>& F, const Matrix<double>& F_inv);

}  // namespace nordenlab
