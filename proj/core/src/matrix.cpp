#include "nordenlab/matrix.hpp"

#include <algorithm>

namespace nordenlab {

double determinant(const Matrix<double>& m) {
  const std::size_t n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  Matrix<double> a = m;
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (a(pivot, col) == 0.0) return 0.0;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
    }
  }
  return det;
}

namespace {

template <class Range>
double range_max_abs(const Range& r) {
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

double max_abs(const Matrix<double>& m) { return range_max_abs(m); }
double max_abs(const Array3<double>& a) { return range_max_abs(a); }
double max_abs(const Array4<double>& a) { return range_max_abs(a); }
double max_abs(const std::vector<double>& v) { return range_max_abs(v); }

double max_abs_diff(const Matrix<double>& a, const Matrix<double>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix shape mismatch");
  double m = 0.0;
  auto it = b.begin();
  for (double x : a) m = std::max(m, std::abs(x - *it++));
  return m;
}

}  // namespace nordenlab
