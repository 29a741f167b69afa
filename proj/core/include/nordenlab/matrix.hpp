#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nordenlab/jet.hpp"

namespace nordenlab {

class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix over doubles or jets.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Rank-3 component array a(i, j, k), all extents n.
template <class T>
class Array3 {
 public:
  Array3() = default;
  Array3(std::size_t n, const T& fill = T{}) : n_(n), data_(n * n * n, fill) {}
  std::size_t extent() const { return n_; }
  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[(i * n_ + j) * n_ + k]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[(i * n_ + j) * n_ + k]; }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

/// Rank-4 component array a(i, j, k, l), all extents n.
template <class T>
class Array4 {
 public:
  Array4() = default;
  Array4(std::size_t n, const T& fill = T{}) : n_(n), data_(n * n * n * n, fill) {}
  std::size_t extent() const { return n_; }
  T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) { return data_[((i * n_ + j) * n_ + k) * n_ + l]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return data_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  auto begin() { return data_.begin(); }
  auto end() { return data_.end(); }
  auto begin() const { return data_.begin(); }
  auto end() const { return data_.end(); }

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

template <class T>
Matrix<double> values(const Matrix<T>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = value_of(m(r, c));
  return out;
}

template <class T>
Array3<double> values(const Array3<T>& a) {
  Array3<double> out(a.extent());
  auto it = out.begin();
  for (const auto& x : a) *it++ = value_of(x);
  return out;
}

template <class T>
Array4<double> values(const Array4<T>& a) {
  Array4<double> out(a.extent());
  auto it = out.begin();
  for (const auto& x : a) *it++ = value_of(x);
  return out;
}

template <class T>
Matrix<T> transpose(const Matrix<T>& m) {
  Matrix<T> out(m.cols(), m.rows(), m.rows() && m.cols() ? m(0, 0) : T{});
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) out(c, r) = m(r, c);
  return out;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows() || a.cols() == 0) throw std::invalid_argument("matrix shape mismatch");
  Matrix<T> out(a.rows(), b.cols(), a(0, 0));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < b.cols(); ++c) {
      T acc = a(r, 0) * b(0, c);
      for (std::size_t k = 1; k < a.cols(); ++k) acc += a(r, k) * b(k, c);
      out(r, c) = std::move(acc);
    }
  }
  return out;
}

template <class T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
  auto it = b.begin();
  for (auto& x : a) x += *it++;
  return a;
}

template <class T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
  auto it = b.begin();
  for (auto& x : a) x -= *it++;
  return a;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& v) {
  if (a.cols() != v.size() || v.empty()) throw std::invalid_argument("matrix-vector shape mismatch");
  std::vector<T> out;
  out.reserve(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    T acc = a(r, 0) * v[0];
    for (std::size_t k = 1; k < a.cols(); ++k) acc += a(r, k) * v[k];
    out.push_back(std::move(acc));
  }
  return out;
}

/// Identity with the shape of `like` entries (jets keep their layout/order).
template <class T>
Matrix<T> identity_like(std::size_t n, const T& like) {
  T zero = like * 0.0;
  T one = zero + 1.0;
  Matrix<T> out(n, n, zero);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = one;
  return out;
}

/// Gauss-Jordan inverse with partial pivoting on the point values.
template <class T>
Matrix<T> inverse(const Matrix<T>& m, double singular_tol = 0.0) {
  const std::size_t n = m.rows();
  if (n != m.cols() || n == 0) throw std::invalid_argument("inverse of non-square matrix");
  Matrix<T> a = m;
  Matrix<T> inv = identity_like(n, m(0, 0));
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(value_of(a(r, col))) > std::abs(value_of(a(pivot, col)))) pivot = r;
    if (std::abs(value_of(a(pivot, col))) <= singular_tol) throw SingularMatrixError("singular matrix at evaluation point");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a(pivot, c), a(col, c));
        std::swap(inv(pivot, c), inv(col, c));
      }
    }
    const T scale = 1.0 / a(col, col);
    for (std::size_t c = 0; c < n; ++c) {
      a(col, c) = a(col, c) * scale;
      inv(col, c) = inv(col, c) * scale;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const T factor = a(r, col);
      for (std::size_t c = 0; c < n; ++c) {
        a(r, c) -= factor * a(col, c);
        inv(r, c) -= factor * inv(col, c);
      }
    }
  }
  return inv;
}

double determinant(const Matrix<double>& m);

/// Largest absolute entry.
double max_abs(const Matrix<double>& m);
double max_abs(const Array3<double>& a);
double max_abs(const Array4<double>& a);
double max_abs(const std::vector<double>& v);
double max_abs_diff(const Matrix<double>& a, const Matrix<double>& b);

}  // namespace nordenlab
