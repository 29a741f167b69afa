#include "nordenlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace nordenlab {

namespace {

using nlohmann::json;

constexpr int kMaxSampleRetries = 100;

const json& require(const json& j, const char* key) {
  if (!j.contains(key)) throw ChartError(std::string("chart spec: missing field '") + key + "'");
  return j.at(key);
}

BoundExpression bind_entry(const json& entry, const std::vector<std::string>& coords, const std::string& where) {
  std::string text;
  if (entry.is_string()) {
    text = entry.get<std::string>();
  } else if (entry.is_number()) {
    // numbers are accepted as a convenience and round-trip through the grammar
    std::ostringstream os;
    os.precision(17);
    os << entry.get<double>();
    text = os.str();
  } else {
    throw ChartError("chart spec: " + where + " must be an expression string");
  }
  try {
    return parse(text).bind(coords);
  } catch (const ParseError& e) {
    throw ChartError("chart spec: " + where + ": " + e.what());
  } catch (const BindError& e) {
    throw ChartError("chart spec: " + where + ": " + e.what());
  }
}

Matrix<BoundExpression> bind_matrix(const json& m, std::size_t n, const std::vector<std::string>& coords,
                                    const std::string& field) {
  if (!m.is_array() || m.size() != n) throw ChartError("chart spec: dimension mismatch in '" + field + "' (rows)");
  Matrix<BoundExpression> out(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!m[r].is_array() || m[r].size() != n)
      throw ChartError("chart spec: dimension mismatch in '" + field + "' row " + std::to_string(r));
    for (std::size_t c = 0; c < n; ++c)
      out(r, c) = bind_entry(m[r][c], coords, field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

NordenChart load_chart(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ChartError(std::string("chart spec: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ChartError("chart spec: top level must be an object");

  NordenChart chart;
  try {
    chart.name = require(doc, "name").get<std::string>();
    const auto dim = require(doc, "dimension").get<long long>();
    if (dim <= 0) throw ChartError("chart spec: dimension must be positive");
    chart.dimension = static_cast<std::size_t>(dim);
    chart.coordinates = require(doc, "coordinates").get<std::vector<std::string>>();
  } catch (const json::type_error& e) {
    throw ChartError(std::string("chart spec: schema violation: ") + e.what());
  }
  const std::size_t n = chart.dimension;
  if (chart.coordinates.size() != n) throw ChartError("chart spec: dimension mismatch in 'coordinates'");
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = chart.coordinates[i];
    if (c.empty() || c == "sin" || c == "cos" || c == "exp")
      throw ChartError("chart spec: invalid coordinate name '" + c + "'");
    if (std::count(chart.coordinates.begin(), chart.coordinates.end(), c) > 1)
      throw ChartError("chart spec: duplicate coordinate name '" + c + "'");
  }

  chart.metric = bind_matrix(require(doc, "metric"), n, chart.coordinates, "metric");
  chart.complex_structure = bind_matrix(require(doc, "complex_structure"), n, chart.coordinates, "complex_structure");

  const json& box = require(doc, "sample_box");
  if (!box.is_array() || box.size() != n) throw ChartError("chart spec: dimension mismatch in 'sample_box'");
  for (const auto& iv : box) {
    if (!iv.is_array() || iv.size() != 2 || !iv[0].is_number() || !iv[1].is_number())
      throw ChartError("chart spec: sample_box entries must be [lo, hi]");
    Interval in{iv[0].get<double>(), iv[1].get<double>()};
    if (!(in.lo <= in.hi)) throw ChartError("chart spec: sample_box interval with lo > hi");
    chart.sample_box.push_back(in);
  }

  if (doc.contains("connection")) {
    const json& c = doc.at("connection");
    if (c.is_string()) {
      const auto s = c.get<std::string>();
      if (s == "levi-civita") {
        chart.connection.kind = ConnectionKind::levi_civita;
      } else if (s == "canonical") {
        chart.connection.kind = ConnectionKind::canonical;
      } else {
        throw ChartError("chart spec: unknown connection '" + s + "'");
      }
    } else if (c.is_object() && c.contains("gamma")) {
      const json& g = c.at("gamma");
      if (!g.is_array() || g.size() != n) throw ChartError("chart spec: dimension mismatch in 'gamma'");
      chart.connection.kind = ConnectionKind::explicit_gamma;
      chart.connection.gamma = Array3<BoundExpression>(n);
      for (std::size_t k = 0; k < n; ++k) {
        const auto m = bind_matrix(g[k], n, chart.coordinates, "gamma[" + std::to_string(k) + "]");
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) chart.connection.gamma(k, i, j) = m(i, j);
      }
    } else {
      throw ChartError("chart spec: 'connection' must be \"levi-civita\", \"canonical\" or {\"gamma\": ...}");
    }
  }
  return chart;
}

NordenChart load_chart_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ChartError("cannot read chart spec '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_chart(ss.str());
}

StructureJets evaluate_structure(const NordenChart& chart, std::span<const Jet> coords) {
  const std::size_t n = chart.dimension;
  if (coords.size() < n) throw std::invalid_argument("too few coordinate jets");
  const auto base = coords.first(n);
  const Jet zero = Jet::constant_like(coords.front(), 0.0);
  StructureJets s{Matrix<Jet>(n, n, zero), Matrix<Jet>(n, n, zero), {}};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      s.g(r, c) = chart.metric(r, c).eval(base);
      s.J(r, c) = chart.complex_structure(r, c).eval(base);
    }
  }
  s.g_inv = inverse(s.g);
  return s;
}

Matrix<double> metric_at(const NordenChart& chart, std::span<const double> point) {
  Matrix<double> g(chart.dimension, chart.dimension);
  for (std::size_t r = 0; r < chart.dimension; ++r)
    for (std::size_t c = 0; c < chart.dimension; ++c) g(r, c) = chart.metric(r, c).eval(point);
  return g;
}

Matrix<double> structure_at(const NordenChart& chart, std::span<const double> point) {
  Matrix<double> J(chart.dimension, chart.dimension);
  for (std::size_t r = 0; r < chart.dimension; ++r)
    for (std::size_t c = 0; c < chart.dimension; ++c) J(r, c) = chart.complex_structure(r, c).eval(point);
  return J;
}

std::vector<double> musical_flat(const NordenChart& chart, std::span<const double> vector, std::span<const double> point) {
  const auto g = metric_at(chart, point);
  return g * std::vector<double>(vector.begin(), vector.end());
}

std::vector<double> musical_sharp(const NordenChart& chart, std::span<const double> form, std::span<const double> point) {
  const auto g = metric_at(chart, point);
  return inverse(g, std::numeric_limits<double>::min()) * std::vector<double>(form.begin(), form.end());
}

double uniform01(std::uint64_t seed, std::uint64_t draw, std::uint64_t coordinate) {
  const std::uint64_t h = splitmix64(splitmix64(splitmix64(seed) ^ draw) ^ (coordinate * 0xD1B54A32D192ED03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

std::vector<PointSample> sample_points(const NordenChart& chart, std::uint64_t seed, std::size_t count, double det_tol) {
  std::vector<PointSample> out;
  std::uint64_t draw = 0;
  for (std::size_t p = 0; p < count; ++p) {
    bool accepted = false;
    for (int attempt = 0; attempt <= kMaxSampleRetries && !accepted; ++attempt, ++draw) {
      PointSample s;
      s.index = draw;
      for (std::size_t i = 0; i < chart.dimension; ++i) {
        const auto& iv = chart.sample_box[i];
        s.point.push_back(iv.lo + (iv.hi - iv.lo) * uniform01(seed, draw, i));
      }
      double det = 0.0;
      try {
        det = determinant(metric_at(chart, s.point));
      } catch (const DomainError&) {
        continue;
      }
      if (std::abs(det) > det_tol && std::isfinite(det)) {
        out.push_back(std::move(s));
        accepted = true;
      }
    }
    if (!accepted) throw SamplingError("no nondegenerate point found in sample box after 100 retries");
  }
  return out;
}

NordenReport validate_norden(const NordenChart& chart, std::span<const PointSample> points, double tol) {
  NordenReport report;
  report.tol = tol;
  const std::size_t n = chart.dimension;
  for (const auto& sample : points) {
    NordenPointResult r;
    r.point = sample.point;
    const auto g = metric_at(chart, sample.point);
    const auto J = structure_at(chart, sample.point);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r.metric_asymmetry = std::max(r.metric_asymmetry, std::abs(g(i, j) - g(j, i)));
    r.abs_det = std::abs(determinant(g));
    const auto J2 = J * J;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) r.j_square = std::max(r.j_square, std::abs(J2(i, j) + (i == j ? 1.0 : 0.0)));
    // g(J e_i, e_j) = g_kj J^k_i
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double lhs = 0.0;
        double rhs = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          lhs += g(k, j) * J(k, i);
          rhs += g(i, k) * J(k, j);
        }
        r.g_asymmetry_of_j = std::max(r.g_asymmetry_of_j, std::abs(lhs - rhs));
      }
    }
    report.points.push_back(std::move(r));
  }
  return report;
}

double NordenReport::max_metric_asymmetry() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.metric_asymmetry);
  return m;
}

double NordenReport::min_abs_det() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : points) m = std::min(m, p.abs_det);
  return m;
}

double NordenReport::max_j_square() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.j_square);
  return m;
}

double NordenReport::max_g_asymmetry_of_j() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.g_asymmetry_of_j);
  return m;
}

TensorValue::TensorValue(std::size_t dimension, std::vector<Variance> variances)
    : n_(dimension), variances_(std::move(variances)) {
  std::size_t size = 1;
  for (std::size_t i = 0; i < variances_.size(); ++i) size *= n_;
  data_.assign(size, 0.0);
}

namespace {

std::size_t flat_index(std::span<const std::size_t> index, std::size_t n) {
  std::size_t flat = 0;
  for (std::size_t i : index) {
    if (i >= n) throw std::out_of_range("tensor index out of range");
    flat = flat * n + i;
  }
  return flat;
}

}  // namespace

double& TensorValue::at(std::span<const std::size_t> index) {
  if (index.size() != rank()) throw std::invalid_argument("tensor index rank mismatch");
  return data_[flat_index(index, n_)];
}

double TensorValue::at(std::span<const std::size_t> index) const {
  if (index.size() != rank()) throw std::invalid_argument("tensor index rank mismatch");
  return data_[flat_index(index, n_)];
}

TensorValue TensorValue::contract_slot(std::size_t slot, const Matrix<double>& m, Variance result) const {
  auto vars = variances_;
  vars[slot] = result;
  TensorValue out(n_, vars);
  // stride of `slot` in the flat layout
  std::size_t stride = 1;
  for (std::size_t s = slot + 1; s < rank(); ++s) stride *= n_;
  for (std::size_t flat = 0; flat < data_.size(); ++flat) {
    const std::size_t idx = (flat / stride) % n_;
    const std::size_t base = flat - idx * stride;
    double acc = 0.0;
    for (std::size_t j = 0; j < n_; ++j) acc += m(idx, j) * data_[base + j * stride];
    out.data_[flat] = acc;
  }
  return out;
}

TensorValue TensorValue::lower(std::size_t slot, const Matrix<double>& g) const {
  if (variances_.at(slot) != Variance::up) throw std::invalid_argument("lower: slot is not contravariant");
  return contract_slot(slot, g, Variance::down);
}

TensorValue TensorValue::raise(std::size_t slot, const Matrix<double>& g_inv) const {
  if (variances_.at(slot) != Variance::down) throw std::invalid_argument("raise: slot is not covariant");
  return contract_slot(slot, g_inv, Variance::up);
}

TensorValue TensorValue::to_basis(const Matrix<double>& frame, const Matrix<double>& frame_inv) const {
  TensorValue out = *this;
  const auto frame_t = transpose(frame);
  for (std::size_t s = 0; s < rank(); ++s)
    out = out.contract_slot(s, variances_[s] == Variance::up ? frame_inv : frame_t, variances_[s]);
  return out;
}

TensorValue TensorValue::from_basis(const Matrix<double>& frame, const Matrix<double>& frame_inv) const {
  TensorValue out = *this;
  const auto frame_inv_t = transpose(frame_inv);
  for (std::size_t s = 0; s < rank(); ++s)
    out = out.contract_slot(s, variances_[s] == Variance::up ? frame : frame_inv_t, variances_[s]);
  return out;
}

}  // namespace nordenlab
