#pragma once

#include <span>
#include <string>
#include <vector>

#include "nordenlab/connections.hpp"

namespace nordenlab {

/// X + xi evaluated at a point: vector components X^i and form components xi_i.
struct SectionValue {
  std::vector<double> vector;
  std::vector<double> form;
};

/// X + xi as component jets.
struct SectionJet {
  std::vector<Jet> vector;
  std::vector<Jet> form;

  std::size_t dimension() const { return vector.size(); }
  int order() const;
  SectionValue value() const;
  /// (X^1..X^n, xi_1..xi_n).
  std::vector<Jet> stacked() const;
  static SectionJet unstack(std::vector<Jet> stacked);

  SectionJet& operator+=(const SectionJet& rhs);
  SectionJet& operator-=(const SectionJet& rhs);
  SectionJet& operator*=(double s);
  friend SectionJet operator+(SectionJet a, const SectionJet& b) { return a += b; }
  friend SectionJet operator-(SectionJet a, const SectionJet& b) { return a -= b; }
  friend SectionJet operator*(double s, SectionJet a) { return a *= s; }
};

/// f * (X + xi) for a scalar jet f.
SectionJet scale(const Jet& f, const SectionJet& s);

/// Complexified section a + i b; all operations act on real and imaginary
/// parts separately.
struct ComplexSectionJet {
  SectionJet re;
  SectionJet im;
};

/// A section of E = T(M) + T*(M) given by component expressions.
struct GeneralizedSection {
  std::vector<BoundExpression> vector;
  std::vector<BoundExpression> form;

  SectionJet evaluate(std::span<const Jet> coords) const;
};

GeneralizedSection make_section(const NordenChart& chart, const std::vector<std::string>& vector_part,
                                const std::vector<std::string>& form_part);

/// d/dx^i + 0 and 0 + dx^j as constant jets shaped like `like`.
SectionJet coordinate_vector(std::size_t n, std::size_t i, const Jet& like);
SectionJet coordinate_form(std::size_t n, std::size_t j, const Jet& like);
/// The 2n sections {d/dx^i + 0} followed by {0 + dx^j}.
std::vector<SectionJet> basis_sections(std::size_t n, const Jet& like);

/// (X+xi, Y+eta) = -1/2 (xi(Y) - eta(X)).
double pair_symplectic(const SectionValue& a, const SectionValue& b);
/// <X+xi, Y+eta> = -1/2 (xi(Y) + eta(X)).
double pair_metric(const SectionValue& a, const SectionValue& b);
/// Gram matrix of <,> in the basis {d/dx^i, dx^j}.
Matrix<double> pair_metric_gram(std::size_t n);

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};
Signature signature(const Matrix<double>& symmetric, double tol = 1e-12);

/// [X+xi, Y+eta]_nabla = [X,Y] + nabla_X eta - nabla_Y xi.
/// The result has one derivative order less than the inputs.
SectionJet bracket(const Christoffel& gamma, const SectionJet& a, const SectionJet& b);

/// Block operator on E at a point: (A, B; C, D) acting on (X, xi).
struct GeneralizedOperator {
  Matrix<double> A;  // T -> T
  Matrix<double> B;  // T* -> T
  Matrix<double> C;  // T -> T*
  Matrix<double> D;  // T* -> T*

  Matrix<double> full() const;
  SectionValue apply(const SectionValue& s) const;
};

/// (J, -(I + J^2) g^{-1}; g, -J*) at `point`; the corner vanishes when J^2 = -I.
GeneralizedOperator build_Jhat(const NordenChart& chart, std::span<const double> point);
/// The same operator as a 2n x 2n matrix of jets.
Matrix<Jet> jhat_matrix(const StructureJets& s);
/// Gram matrix of g-hat: (g, 1/2 J^T; 1/2 J, g^{-1}) in the (X, xi) basis.
Matrix<Jet> ghat_matrix(const StructureJets& s);
SectionJet apply(const Matrix<Jet>& op, const SectionJet& s);

enum class Calibration { calibrated, pseudo_calibrated };
/// Calibrated iff the metric block is positive definite.
Calibration classify_calibration(const Matrix<double>& g);

/// N(s, t) = [Js, Jt] - J[Js, t] - J[s, Jt] - [s, t] for J-hat of the chart.
SectionJet nijenhuis_generalized(const LocalGeometry& local, const SectionJet& a, const SectionJet& b);
/// Max component of N over all pairs of basis sections, at the point.
double max_basis_nijenhuis(const LocalGeometry& local);

/// Complex-bilinear extensions used by the projection identity.
ComplexSectionJet bracket(const Christoffel& gamma, const ComplexSectionJet& a, const ComplexSectionJet& b);
ComplexSectionJet apply(const Matrix<Jet>& op, const ComplexSectionJet& s);
/// P+ = 1/2 (I - i J), P- = 1/2 (I + i J).
ComplexSectionJet project(const Matrix<Jet>& jhat, const ComplexSectionJet& s, bool plus);
ComplexSectionJet nijenhuis_generalized(const LocalGeometry& local, const ComplexSectionJet& a, const ComplexSectionJet& b);

struct ProjectionResidual {
  double plus = 0.0;   // |P-[P+ s, P+ t] + 1/4 P- N(s, t)|
  double minus = 0.0;  // |P+[P- s, P- t] + 1/4 P+ N(s, t)|
};
ProjectionResidual projection_identity(const LocalGeometry& local, const ComplexSectionJet& a, const ComplexSectionJet& b);

/// g-hat(X+xi, Y+eta) = g(X,Y) + 1/2 g(JX, #eta) + 1/2 g(#xi, JY) + g(#xi, #eta).
double ghat(const NordenChart& chart, const SectionValue& a, const SectionValue& b, std::span<const double> point);

struct IntegrabilityPoint {
  double nijenhuis_J = 0.0;        // max |N(J)|
  double nabla_J = 0.0;            // max |nabla J|
  double d_nabla_g_condition = 0.0;  // max |(d g)(JX,Y) + (d g)(X,JY)|
  double nijenhuis_jhat = 0.0;     // max basis |N^nabla(J-hat)|
};

struct IntegrabilityReport {
  double tol = 0.0;
  std::vector<IntegrabilityPoint> points;
  IntegrabilityPoint max() const;
  bool conditions_hold() const;
  bool integrable() const;
  /// (all three conditions hold) <=> (N^nabla(J-hat) vanishes on the basis).
  bool equivalence_observed() const { return conditions_hold() == integrable(); }
};

IntegrabilityPoint integrability_at(const LocalGeometry& local);
IntegrabilityReport integrability_conditions(const Connection& conn, std::span<const PointSample> points, double tol);

struct DhatPoint {
  double j_parallel = 0.0;       // max |(D-hat_i J-hat)|
  double g_parallel = 0.0;       // max |(D-hat_i g-hat)|
  double curvature_block = 0.0;  // max |R^D-hat - (R^D, -R^D^T)|
  double curvature_norm = 0.0;   // max |R^D-hat|
};

struct DhatReport {
  double tol = 0.0;
  std::vector<DhatPoint> points;
  DhatPoint max() const;
};

DhatPoint dhat_at(const LocalGeometry& local);
DhatReport Dhat_checks(const Connection& D, std::span<const PointSample> points, double tol);

}  // namespace nordenlab
