#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nordenlab/expr.hpp"
#include "nordenlab/jet.hpp"
#include "nordenlab/matrix.hpp"

namespace nordenlab {

/// Malformed chart spec: bad JSON, schema violation, dimension mismatch,
/// expression syntax error or unbound identifier.
class ChartError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

enum class ConnectionKind { levi_civita, canonical, explicit_gamma };

struct ConnectionDecl {
  ConnectionKind kind = ConnectionKind::levi_civita;
  /// gamma(k, i, j) = Gamma^k_{ij}; only for explicit_gamma.
  Array3<BoundExpression> gamma;
};

/// A coordinate chart carrying a metric g_ij and an endomorphism J^k_i.
///
/// complex_structure(k, i) is J^k_i: row = upper index, column = lower index.
struct NordenChart {
  std::string name;
  std::size_t dimension = 0;
  std::vector<std::string> coordinates;
  Matrix<BoundExpression> metric;
  Matrix<BoundExpression> complex_structure;
  std::vector<Interval> sample_box;
  ConnectionDecl connection;
};

NordenChart load_chart(std::string_view json_text);
NordenChart load_chart_file(const std::filesystem::path& path);

/// g, J and g^{-1} evaluated as jets.
struct StructureJets {
  Matrix<Jet> g;
  Matrix<Jet> J;
  Matrix<Jet> g_inv;
};

/// `coords` are jets of the chart coordinates; coordinate i must be jet
/// variable i, additional jet variables (fibre coordinates) are allowed.
StructureJets evaluate_structure(const NordenChart& chart, std::span<const Jet> coords);

Matrix<double> metric_at(const NordenChart& chart, std::span<const double> point);
Matrix<double> structure_at(const NordenChart& chart, std::span<const double> point);

/// X^i -> g_ij X^j.
std::vector<double> musical_flat(const NordenChart& chart, std::span<const double> vector, std::span<const double> point);
/// xi_i -> g^{ij} xi_j; throws SingularMatrixError when det g vanishes.
std::vector<double> musical_sharp(const NordenChart& chart, std::span<const double> form, std::span<const double> point);

struct PointSample {
  std::vector<double> point;
  std::uint64_t index = 0;  // draw index that produced the point
};

/// Uniform in [0, 1) from (seed, draw, coordinate); platform independent.
double uniform01(std::uint64_t seed, std::uint64_t draw, std::uint64_t coordinate);

/// Fixed-seed uniform draws in the sample box. Points with |det g| <= det_tol
/// are redrawn, at most 100 times per point.
std::vector<PointSample> sample_points(const NordenChart& chart, std::uint64_t seed, std::size_t count,
                                       double det_tol = 1e-8);

struct NordenPointResult {
  std::vector<double> point;
  double metric_asymmetry = 0.0;  // max |g_ij - g_ji|
  double abs_det = 0.0;           // |det g|
  double j_square = 0.0;          // max |J^2 + I|
  double g_asymmetry_of_j = 0.0;  // max |g(JX,Y) - g(X,JY)| on basis vectors
};

struct NordenReport {
  double tol = 0.0;
  std::vector<NordenPointResult> points;

  double max_metric_asymmetry() const;
  double min_abs_det() const;
  double max_j_square() const;
  double max_g_asymmetry_of_j() const;
  bool metric_symmetric() const { return max_metric_asymmetry() <= tol; }
  bool metric_nondegenerate() const { return min_abs_det() > tol; }
  bool almost_complex() const { return max_j_square() <= tol; }
  bool j_g_symmetric() const { return max_g_asymmetry_of_j() <= tol; }
  bool passed() const { return metric_symmetric() && metric_nondegenerate() && almost_complex() && j_g_symmetric(); }
};

NordenReport validate_norden(const NordenChart& chart, std::span<const PointSample> points, double tol);

enum class Variance { up, down };

/// Evaluated tensor components; every slot has extent dimension().
class TensorValue {
 public:
  TensorValue(std::size_t dimension, std::vector<Variance> variances);

  std::size_t dimension() const { return n_; }
  const std::vector<Variance>& variances() const { return variances_; }
  std::size_t rank() const { return variances_.size(); }

  double& at(std::span<const std::size_t> index);
  double at(std::span<const std::size_t> index) const;
  std::vector<double>& components() { return data_; }
  const std::vector<double>& components() const { return data_; }

  /// Lowers slot `slot` (must be up) with g.
  TensorValue lower(std::size_t slot, const Matrix<double>& g) const;
  /// Raises slot `slot` (must be down) with g^{-1}.
  TensorValue raise(std::size_t slot, const Matrix<double>& g_inv) const;

  /// Change of basis: the new basis vectors are the columns of `frame`
  /// expressed in the old basis; `frame_inv` is its inverse.
  TensorValue to_basis(const Matrix<double>& frame, const Matrix<double>& frame_inv) const;
  TensorValue from_basis(const Matrix<double>& frame, const Matrix<double>& frame_inv) const;

 private:
  TensorValue contract_slot(std::size_t slot, const Matrix<double>& m, Variance result) const;

  std::size_t n_;
  std::vector<Variance> variances_;
  std::vector<double> data_;
};

}  // namespace nordenlab
