#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nordenlab/geometry.hpp"

namespace nordenlab {

/// gamma(k, i, j) = Gamma^k_{ij}, i.e. nabla_{d_i} d_j = Gamma^k_{ij} d_k.
using Christoffel = Array3<Jet>;

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A linear connection on a chart, evaluated lazily as Christoffel jets.
class Connection {
 public:
  using Evaluator = std::function<Christoffel(const NordenChart&, std::span<const Jet>)>;

  static Connection levi_civita(std::shared_ptr<const NordenChart> chart);
  /// D = nabla - 1/2 J (nabla J) with nabla the Levi-Civita connection.
  static Connection canonical(std::shared_ptr<const NordenChart> chart);
  static Connection explicit_gamma(std::shared_ptr<const NordenChart> chart, Array3<BoundExpression> gamma);
  /// The connection named by the chart spec's "connection" field.
  static Connection declared(std::shared_ptr<const NordenChart> chart);
  /// Arbitrary Christoffel field; `order_loss` is how many derivative orders
  /// the evaluator consumes relative to its coordinate jets.
  static Connection custom(std::shared_ptr<const NordenChart> chart, std::string label, int order_loss, Evaluator eval);

  ConnectionKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const NordenChart& chart() const { return *chart_; }
  const std::shared_ptr<const NordenChart>& chart_ptr() const { return chart_; }
  int order_loss() const { return order_loss_; }

  /// Christoffel jets; the order is coords order - order_loss().
  Christoffel christoffel(std::span<const Jet> coords) const;

 private:
  Connection(std::shared_ptr<const NordenChart> chart, ConnectionKind kind, std::string label, int order_loss,
             Evaluator eval);

  std::shared_ptr<const NordenChart> chart_;
  ConnectionKind kind_;
  std::string label_;
  int order_loss_;
  Evaluator eval_;
};

/// Structure and connection jets at one point.
struct LocalGeometry {
  std::vector<Jet> coords;
  StructureJets structure;
  Christoffel gamma;
};

LocalGeometry local_geometry(const Connection& conn, std::span<const Jet> coords);
/// Seeds the chart coordinates at `point` with jets of order `order`.
LocalGeometry local_geometry(const Connection& conn, std::span<const double> point, int order);

// Component formulas on jets. Derivatives are taken in jet variables
// 0..n-1, which must be the chart coordinates.

Christoffel levi_civita_christoffel(const StructureJets& s);
/// Gamma(D)^k_{ij} = Gamma^k_{ij} - 1/2 J^k_m (nabla_i J)^m_j.
Christoffel canonical_christoffel(const StructureJets& s, const Christoffel& levi_civita);
/// T(k, i, j) = Gamma^k_{ij} - Gamma^k_{ji}.
Array3<Jet> torsion(const Christoffel& gamma);
/// R(k, i, j, l) = R^k_{ijl} with R(d_i, d_j) d_l = R^k_{ijl} d_k:
/// d_i G^k_{jl} - d_j G^k_{il} + G^k_{im} G^m_{jl} - G^k_{jm} G^m_{il}.
Array4<Jet> curvature(const Christoffel& gamma);
/// out(i, k, j) = (nabla_i J)^k_j.
Array3<Jet> covariant_derivative_J(const Christoffel& gamma, const Matrix<Jet>& J);
/// out(i, j, k) = (nabla_i g)_{jk}.
Array3<Jet> covariant_derivative_metric(const Christoffel& gamma, const Matrix<Jet>& g);
/// out(i, j, k) = ((d^nabla g)(d_i, d_j))_k = (nabla_i g)_{jk} - (nabla_j g)_{ik} + g_{km} T^m_{ij}.
Array3<Jet> d_nabla_g(const Christoffel& gamma, const Matrix<Jet>& g);
/// N(k, i, j) = N(J)(d_i, d_j)^k, the coordinate formula.
Array3<Jet> nijenhuis_J(const Matrix<Jet>& J);
/// Same tensor with partial derivatives replaced by covariant ones; agrees
/// with nijenhuis_J for any torsion-free connection.
Array3<Jet> nijenhuis_J_covariant(const Matrix<Jet>& J, const Christoffel& gamma);

// Point-level conveniences.

Array3<double> christoffel_at(const Connection& conn, std::span<const double> point);
Array3<double> torsion_at(const Connection& conn, std::span<const double> point);
Array4<double> curvature_at(const Connection& conn, std::span<const double> point);
Array3<double> d_nabla_g_at(const Connection& conn, std::span<const double> point);
Array3<double> covariant_derivative_J_at(const Connection& conn, std::span<const double> point);
Array3<double> nijenhuis_J_at(const NordenChart& chart, std::span<const double> point);

/// The canonical connection after checking that J is integrable (N(J) = 0
/// within tol) at the given points; throws PreconditionError otherwise.
Connection canonical_connection(std::shared_ptr<const NordenChart> chart, std::span<const PointSample> points, double tol);

/// Residuals of the three defining conditions of the natural canonical
/// connection on coordinate fields, plus DJ.
struct CanonicalAxioms {
  double metric = 0.0;          // max |(D_i g)_{jk}|
  double torsion_j = 0.0;       // max |T(J d_i, d_j) + T(d_i, J d_j)|
  double torsion_cyclic = 0.0;  // max |g(T(X,Y),Z) + g(T(Y,Z),X) + g(T(Z,X),Y)|
  double dj = 0.0;              // max |(D_i J)^k_j|
};

CanonicalAxioms canonical_axioms(const LocalGeometry& local);

struct CanonicalReport {
  double tol = 0.0;
  std::vector<CanonicalAxioms> points;
  CanonicalAxioms max() const;
  bool passed() const;
};

CanonicalReport verify_canonical(const Connection& D, std::span<const PointSample> points, double tol);

}  // namespace nordenlab
