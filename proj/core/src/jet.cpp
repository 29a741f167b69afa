#include "nordenlab/jet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace nordenlab {

namespace {

constexpr std::size_t kMaxVariables = 64;

std::vector<std::uint8_t> merged(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  std::vector<std::uint8_t> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

JetLayout::JetLayout(std::size_t nvars) : nvars_(nvars) {
  std::map<std::vector<std::uint8_t>, std::uint32_t> index;
  auto add = [&](std::vector<std::uint8_t> vars) {
    index.emplace(vars, static_cast<std::uint32_t>(monomials_.size()));
    degree_.push_back(static_cast<int>(vars.size()));
    double w = 1.0;
    for (std::size_t i = 0; i < vars.size();) {
      std::size_t j = i;
      while (j < vars.size() && vars[j] == vars[i]) ++j;
      for (std::size_t m = 2; m <= j - i; ++m) w *= static_cast<double>(m);
      i = j;
    }
    weight_.push_back(w);
    monomials_.push_back(std::move(vars));
  };

  add({});
  count_.push_back(monomials_.size());
  for (std::uint8_t i = 0; i < nvars; ++i) add({i});
  count_.push_back(monomials_.size());
  for (std::uint8_t i = 0; i < nvars; ++i)
    for (std::uint8_t j = i; j < nvars; ++j) add({i, j});
  count_.push_back(monomials_.size());
  for (std::uint8_t i = 0; i < nvars; ++i)
    for (std::uint8_t j = i; j < nvars; ++j)
      for (std::uint8_t k = j; k < nvars; ++k) add({i, j, k});
  count_.push_back(monomials_.size());

  products_.resize(monomials_.size());
  for (std::size_t a = 0; a < monomials_.size(); ++a) {
    const int room = kMaxJetOrder - degree_[a];
    for (std::size_t b = 0; b < count(room); ++b) {
      const auto prod = merged(monomials_[a], monomials_[b]);
      products_[a].push_back({static_cast<std::uint32_t>(b), index.at(prod), degree_[b]});
    }
  }

  const std::size_t lower = count(kMaxJetOrder - 1);
  raise_.resize(nvars * lower);
  for (std::size_t v = 0; v < nvars; ++v) {
    const std::array<std::uint8_t, 1> single{static_cast<std::uint8_t>(v)};
    for (std::size_t m = 0; m < lower; ++m) raise_[v * lower + m] = index.at(merged(monomials_[m], single));
  }
}

const JetLayout& JetLayout::get(std::size_t nvars) {
  static std::mutex mutex;
  static std::array<std::unique_ptr<JetLayout>, kMaxVariables + 1> layouts;
  if (nvars > kMaxVariables) throw std::invalid_argument("too many jet variables");
  std::lock_guard lock(mutex);
  auto& slot = layouts[nvars];
  if (!slot) slot.reset(new JetLayout(nvars));
  return *slot;
}

std::span<const std::uint8_t> JetLayout::variables(std::size_t monomial) const { return monomials_[monomial]; }

std::size_t JetLayout::index_of(std::span<const int> vars) const {
  std::vector<int> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.size() > static_cast<std::size_t>(kMaxJetOrder)) throw std::out_of_range("derivative order exceeds jet cap");
  for (int v : sorted)
    if (v < 0 || static_cast<std::size_t>(v) >= nvars_) throw std::out_of_range("derivative variable out of range");
  const std::size_t first = sorted.empty() ? 0 : count(static_cast<int>(sorted.size()) - 1);
  const std::size_t last = count(static_cast<int>(sorted.size()));
  for (std::size_t m = first; m < last; ++m)
    if (std::equal(sorted.begin(), sorted.end(), monomials_[m].begin(), monomials_[m].end())) return m;
  throw std::logic_error("monomial lookup failed");
}

Jet::Jet(const JetLayout* layout, int order) : layout_(layout), order_(order), coeffs_(layout->count(order), 0.0) {}

Jet::Jet(std::size_t nvars, int order) {
  if (order < 0 || order > kMaxJetOrder) throw std::invalid_argument("jet order must be in [0, 3]");
  layout_ = &JetLayout::get(nvars);
  order_ = order;
  coeffs_.assign(layout_->count(order), 0.0);
}

Jet Jet::constant(std::size_t nvars, int order, double value) {
  Jet j(nvars, order);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(std::size_t nvars, int order, std::size_t index, double value) {
  if (index >= nvars) throw std::out_of_range("jet variable index out of range");
  Jet j = constant(nvars, order, value);
  if (order >= 1) j.coeffs_[1 + index] = 1.0;
  return j;
}

Jet Jet::constant_like(const Jet& like, double value) {
  Jet j(like.layout_, like.order_);
  j.coeffs_[0] = value;
  return j;
}

double Jet::partial(std::span<const int> vars) const {
  if (static_cast<int>(vars.size()) > order_) throw std::out_of_range("derivative order exceeds jet order");
  const std::size_t m = layout_->index_of(vars);
  return coeffs_[m] * layout_->factorial_weight(m);
}

Jet Jet::derivative(std::size_t var) const {
  if (order_ == 0) throw std::logic_error("cannot differentiate an order-0 jet");
  if (var >= nvars()) throw std::out_of_range("derivative variable out of range");
  Jet out(layout_, order_ - 1);
  for (std::size_t m = 0; m < out.coeffs_.size(); ++m) {
    const auto vars = layout_->variables(m);
    const double mult = 1.0 + static_cast<double>(std::count(vars.begin(), vars.end(), var));
    out.coeffs_[m] = mult * coeffs_[layout_->raised(var, m)];
  }
  return out;
}

Jet Jet::truncated(int order) const {
  Jet out = *this;
  out.truncate_in_place(std::min(order, order_));
  return out;
}

void Jet::truncate_in_place(int order) {
  if (order < order_) {
    order_ = order;
    coeffs_.resize(layout_->count(order));
  }
}

void Jet::check_compatible(const Jet& rhs) const {
  if (layout_ != rhs.layout_) throw std::invalid_argument("jets over different variable sets");
}

Jet& Jet::operator+=(const Jet& rhs) {
  check_compatible(rhs);
  truncate_in_place(rhs.order_);
  for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] += rhs.coeffs_[m];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  check_compatible(rhs);
  truncate_in_place(rhs.order_);
  for (std::size_t m = 0; m < coeffs_.size(); ++m) coeffs_[m] -= rhs.coeffs_[m];
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet& Jet::operator+=(double rhs) {
  coeffs_[0] += rhs;
  return *this;
}

Jet& Jet::operator-=(double rhs) {
  coeffs_[0] -= rhs;
  return *this;
}

Jet& Jet::operator*=(double rhs) {
  for (double& c : coeffs_) c *= rhs;
  return *this;
}

Jet& Jet::operator/=(double rhs) {
  if (rhs == 0.0) throw DomainError("division by zero at evaluation point");
  for (double& c : coeffs_) c /= rhs;
  return *this;
}

Jet operator-(const Jet& f) {
  Jet out = f;
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Jet operator*(const Jet& lhs, const Jet& rhs) {
  lhs.check_compatible(rhs);
  const int order = std::min(lhs.order_, rhs.order_);
  Jet out(lhs.layout_, order);
  const std::size_t n = out.coeffs_.size();
  for (std::size_t a = 0; a < n; ++a) {
    const double ca = lhs.coeffs_[a];
    if (ca == 0.0) continue;
    const int room = order - lhs.layout_->degree(a);
    for (const auto& t : lhs.layout_->products(a)) {
      if (t.rhs_degree > room) break;
      out.coeffs_[t.product] += ca * rhs.coeffs_[t.rhs];
    }
  }
  return out;
}

namespace {

// sum_m weights[m] * h^m, h = f - f(point); weights has order+1 entries.
Jet compose(const Jet& f, std::span<const double> weights) {
  Jet h = f - f.value();
  Jet power = Jet::constant_like(f, 1.0);
  Jet out = Jet::constant_like(f, weights[0]);
  for (int m = 1; m <= f.order(); ++m) {
    power = power * h;
    out += power * weights[static_cast<std::size_t>(m)];
  }
  return out;
}

}  // namespace

Jet reciprocal(const Jet& f) {
  const double v = f.value();
  if (v == 0.0) throw DomainError("division by zero at evaluation point");
  std::array<double, kMaxJetOrder + 1> w{};
  double term = 1.0 / v;
  for (int m = 0; m <= f.order(); ++m) {
    w[static_cast<std::size_t>(m)] = term;
    term *= -1.0 / v;
  }
  return compose(f, std::span<const double>(w.data(), static_cast<std::size_t>(f.order()) + 1));
}

Jet operator/(const Jet& lhs, const Jet& rhs) { return lhs * reciprocal(rhs); }
Jet operator/(double lhs, const Jet& rhs) { return reciprocal(rhs) * lhs; }

Jet exp(const Jet& f) {
  std::array<double, kMaxJetOrder + 1> w{};
  const double e = std::exp(f.value());
  double fact = 1.0;
  for (int m = 0; m <= f.order(); ++m) {
    if (m > 0) fact *= m;
    w[static_cast<std::size_t>(m)] = e / fact;
  }
  return compose(f, std::span<const double>(w.data(), static_cast<std::size_t>(f.order()) + 1));
}

namespace {

// Taylor weights of sin/cos around v: d^m/dv^m sin(v) / m!.
Jet trig(const Jet& f, bool is_sin) {
  const double s = std::sin(f.value());
  const double c = std::cos(f.value());
  // derivatives cycle: sin, cos, -sin, -cos
  const std::array<double, 4> sin_cycle{s, c, -s, -c};
  const std::array<double, 4> cos_cycle{c, -s, -c, s};
  const auto& cycle = is_sin ? sin_cycle : cos_cycle;
  std::array<double, kMaxJetOrder + 1> w{};
  double fact = 1.0;
  for (int m = 0; m <= f.order(); ++m) {
    if (m > 0) fact *= m;
    w[static_cast<std::size_t>(m)] = cycle[static_cast<std::size_t>(m % 4)] / fact;
  }
  return compose(f, std::span<const double>(w.data(), static_cast<std::size_t>(f.order()) + 1));
}

}  // namespace

Jet sin(const Jet& f) { return trig(f, true); }
Jet cos(const Jet& f) { return trig(f, false); }

Jet pow(const Jet& f, unsigned exponent) {
  Jet result = Jet::constant_like(f, 1.0);
  Jet base = f;
  while (exponent > 0) {
    if (exponent & 1U) result = result * base;
    exponent >>= 1U;
    if (exponent > 0) base = base * base;
  }
  return result;
}

std::vector<Jet> seed_variables(std::span<const double> point, int order) {
  std::vector<Jet> out;
  out.reserve(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) out.push_back(Jet::variable(point.size(), order, i, point[i]));
  return out;
}

}  // namespace nordenlab
