#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace nordenlab {

/// Highest derivative order a Jet can carry.
inline constexpr int kMaxJetOrder = 3;

/// Thrown when an operation leaves the domain of the truncated algebra
/// (reciprocal of a jet whose value is zero).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Monomial bookkeeping for jets in a fixed number of variables.
///
/// Monomials are enumerated by total degree and then lexicographically in
/// their sorted variable list, so the coefficients of an order-k jet are a
/// prefix of the coefficients of any higher-order jet in the same variables.
class JetLayout {
 public:
  static const JetLayout& get(std::size_t nvars);

  std::size_t nvars() const { return nvars_; }
  /// Number of monomials of total degree <= order.
  std::size_t count(int order) const { return count_[static_cast<std::size_t>(order)]; }
  int degree(std::size_t monomial) const { return degree_[monomial]; }
  /// Variables of a monomial as a sorted list (with repetition).
  std::span<const std::uint8_t> variables(std::size_t monomial) const;
  std::size_t index_of(std::span<const int> vars) const;
  /// prod(alpha_v!) for the monomial's exponent vector.
  double factorial_weight(std::size_t monomial) const { return weight_[monomial]; }

  struct Term {
    std::uint32_t rhs;
    std::uint32_t product;
    int rhs_degree;
  };
  /// All b with deg(a)+deg(b) <= kMaxJetOrder, in increasing deg(b).
  std::span<const Term> products(std::size_t a) const { return products_[a]; }

  /// Index of alpha + e_v; only valid for deg(alpha) < kMaxJetOrder.
  std::uint32_t raised(std::size_t var, std::size_t monomial) const {
    return raise_[var * count(kMaxJetOrder - 1) + monomial];
  }

 private:
  explicit JetLayout(std::size_t nvars);

  std::size_t nvars_;
  std::vector<std::size_t> count_;
  std::vector<std::vector<std::uint8_t>> monomials_;
  std::vector<int> degree_;
  std::vector<double> weight_;
  std::vector<std::vector<Term>> products_;
  std::vector<std::uint32_t> raise_;
};

/// Truncated multivariate Taylor polynomial: a value together with every
/// partial derivative of total order <= order() at one point.
///
/// Coefficients are stored as Taylor coefficients c_alpha = d^alpha f / alpha!,
/// once per multi-index. Arithmetic is exact truncated-Taylor algebra; binary
/// operations truncate to the lower of the two orders.
class Jet {
 public:
  Jet() = default;
  Jet(std::size_t nvars, int order);

  static Jet constant(std::size_t nvars, int order, double value);
  /// The coordinate function x_index, expanded around `value`.
  static Jet variable(std::size_t nvars, int order, std::size_t index, double value);
  /// A constant with the same shape as `like`.
  static Jet constant_like(const Jet& like, double value);

  std::size_t nvars() const { return layout_ ? layout_->nvars() : 0; }
  int order() const { return order_; }
  bool empty() const { return layout_ == nullptr; }

  double value() const { return coeffs_.empty() ? 0.0 : coeffs_[0]; }
  /// d^|vars| f / dx_{vars[0]} ... ; order of `vars` is irrelevant.
  double partial(std::span<const int> vars) const;
  double partial(std::initializer_list<int> vars) const {
    return partial(std::span<const int>(vars.begin(), vars.size()));
  }
  std::span<const double> coefficients() const { return coeffs_; }

  /// Partial derivative in variable `var`; the result has order() - 1.
  Jet derivative(std::size_t var) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs);

  friend Jet operator-(const Jet& f);
  friend Jet operator+(Jet lhs, const Jet& rhs) { return lhs += rhs; }
  friend Jet operator-(Jet lhs, const Jet& rhs) { return lhs -= rhs; }
  friend Jet operator*(const Jet& lhs, const Jet& rhs);
  friend Jet operator/(const Jet& lhs, const Jet& rhs);
  friend Jet operator+(Jet lhs, double rhs) { return lhs += rhs; }
  friend Jet operator+(double lhs, Jet rhs) { return rhs += lhs; }
  friend Jet operator-(Jet lhs, double rhs) { return lhs -= rhs; }
  friend Jet operator-(double lhs, const Jet& rhs) { return -rhs + lhs; }
  friend Jet operator*(Jet lhs, double rhs) { return lhs *= rhs; }
  friend Jet operator*(double lhs, Jet rhs) { return rhs *= lhs; }
  friend Jet operator/(Jet lhs, double rhs) { return lhs /= rhs; }
  friend Jet operator/(double lhs, const Jet& rhs);

  friend Jet reciprocal(const Jet& f);
  friend Jet sin(const Jet& f);
  friend Jet cos(const Jet& f);
  friend Jet exp(const Jet& f);
  friend Jet pow(const Jet& f, unsigned exponent);

 private:
  Jet(const JetLayout* layout, int order);
  void check_compatible(const Jet& rhs) const;
  void truncate_in_place(int order);

  const JetLayout* layout_ = nullptr;
  int order_ = 0;
  std::vector<double> coeffs_;
};

/// Seeds x_i + e_i for every coordinate of `point`.
std::vector<Jet> seed_variables(std::span<const double> point, int order);

}  // namespace nordenlab
