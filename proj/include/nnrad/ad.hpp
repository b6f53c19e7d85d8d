#pragma once

/// Forward-mode automatic differentiation with dense seed bundles.
///
/// An ADScalar carries a value and the partial derivatives of that value with
/// respect to `width()` independent inputs. Lifting an n-vector with identity
/// seeds and evaluating a function once yields every column of its Jacobian.
///
/// Model code is written once as a template over the scalar type and runs on
/// `double` (plain evaluation) or `ADScalar` (evaluation plus derivatives).
/// Elementary functions are found by ADL for ADScalar and from <cmath> for
/// double, so generic code should say `using std::sin;` before calling `sin`.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "nnrad/errors.hpp"
#include "nnrad/linalg.hpp"

namespace nnrad {

class ADScalar {
 public:
  ADScalar() = default;
  ADScalar(double value, std::vector<double> seeds) : value_(value), seeds_(std::move(seeds)) {}

  static ADScalar constant(double value, std::size_t width) {
    return {value, std::vector<double>(width, 0.0)};
  }

  static ADScalar variable(double value, std::size_t width, std::size_t index) {
    if (index >= width) throw DimensionError("ADScalar::variable: seed index out of range");
    ADScalar r = constant(value, width);
    r.seeds_[index] = 1.0;
    return r;
  }

  double value() const noexcept { return value_; }
  std::span<const double> seeds() const noexcept { return seeds_; }
  double seed(std::size_t i) const { return seeds_.at(i); }
  std::size_t width() const noexcept { return seeds_.size(); }

  ADScalar& operator+=(const ADScalar& b) {
    check_width(b, "add");
    value_ += b.value_;
    for (std::size_t i = 0; i < seeds_.size(); ++i) seeds_[i] += b.seeds_[i];
    return *this;
  }

  ADScalar& operator-=(const ADScalar& b) {
    check_width(b, "sub");
    value_ -= b.value_;
    for (std::size_t i = 0; i < seeds_.size(); ++i) seeds_[i] -= b.seeds_[i];
    return *this;
  }

  ADScalar& operator*=(const ADScalar& b) {
    check_width(b, "mul");
    for (std::size_t i = 0; i < seeds_.size(); ++i)
      seeds_[i] = seeds_[i] * b.value_ + value_ * b.seeds_[i];
    value_ *= b.value_;
    return *this;
  }

  ADScalar& operator/=(const ADScalar& b) {
    check_width(b, "div");
    if (b.value_ == 0.0) throw DomainError("div: division by ADScalar with value 0");
    const double q = value_ / b.value_;
    for (std::size_t i = 0; i < seeds_.size(); ++i)
      seeds_[i] = (seeds_[i] - q * b.seeds_[i]) / b.value_;
    value_ = q;
    return *this;
  }

  ADScalar& operator+=(double b) noexcept {
    value_ += b;
    return *this;
  }
  ADScalar& operator-=(double b) noexcept {
    value_ -= b;
    return *this;
  }
  ADScalar& operator*=(double b) noexcept {
    value_ *= b;
    for (double& s : seeds_) s *= b;
    return *this;
  }
  ADScalar& operator/=(double b) {
    if (b == 0.0) throw DomainError("div: division by 0");
    value_ /= b;
    for (double& s : seeds_) s /= b;
    return *this;
  }

  /// this += c * b, without a temporary.
  ADScalar& add_scaled(double c, const ADScalar& b) {
    check_width(b, "add_scaled");
    value_ += c * b.value_;
    for (std::size_t i = 0; i < seeds_.size(); ++i) seeds_[i] += c * b.seeds_[i];
    return *this;
  }

  /// Chain rule for a unary elementary function: result = f, seeds scaled by df.
  ADScalar chained(double f, double df) const {
    ADScalar r{f, seeds_};
    for (double& s : r.seeds_) s *= df;
    return r;
  }

 private:
  void check_width(const ADScalar& b, const char* op) const {
    if (b.seeds_.size() != seeds_.size())
      throw DimensionError(std::string(op) + ": seed width mismatch (" +
                           std::to_string(seeds_.size()) + " vs " +
                           std::to_string(b.seeds_.size()) + ")");
  }

  double value_ = 0.0;
  std::vector<double> seeds_;
};

inline ADScalar operator+(ADScalar a, const ADScalar& b) { return a += b; }
inline ADScalar operator-(ADScalar a, const ADScalar& b) { return a -= b; }
inline ADScalar operator*(ADScalar a, const ADScalar& b) { return a *= b; }
inline ADScalar operator/(ADScalar a, const ADScalar& b) { return a /= b; }

inline ADScalar operator+(ADScalar a, double b) { return a += b; }
inline ADScalar operator+(double a, ADScalar b) { return b += a; }
inline ADScalar operator-(ADScalar a, double b) { return a -= b; }
inline ADScalar operator-(double a, const ADScalar& b) { return b.chained(a - b.value(), -1.0); }
inline ADScalar operator*(ADScalar a, double b) { return a *= b; }
inline ADScalar operator*(double a, ADScalar b) { return b *= a; }
inline ADScalar operator/(ADScalar a, double b) { return a /= b; }
inline ADScalar operator/(double a, const ADScalar& b) {
  if (b.value() == 0.0) throw DomainError("div: division by ADScalar with value 0");
  const double q = a / b.value();
  return b.chained(q, -q / b.value());
}

inline ADScalar operator-(const ADScalar& a) { return a.chained(-a.value(), -1.0); }
inline ADScalar operator+(const ADScalar& a) { return a; }

inline bool operator<(const ADScalar& a, const ADScalar& b) noexcept { return a.value() < b.value(); }
inline bool operator>(const ADScalar& a, const ADScalar& b) noexcept { return a.value() > b.value(); }
inline bool operator<(const ADScalar& a, double b) noexcept { return a.value() < b; }
inline bool operator>(const ADScalar& a, double b) noexcept { return a.value() > b; }

namespace detail {
inline std::string describe(const char* op, double v) {
  std::ostringstream os;
  os.precision(17);
  os << op << ": argument " << v << " outside the domain";
  return os.str();
}
}  // namespace detail

inline ADScalar sin(const ADScalar& a) { return a.chained(std::sin(a.value()), std::cos(a.value())); }
inline ADScalar cos(const ADScalar& a) { return a.chained(std::cos(a.value()), -std::sin(a.value())); }
inline ADScalar exp(const ADScalar& a) {
  const double e = std::exp(a.value());
  return a.chained(e, e);
}
inline ADScalar atan(const ADScalar& a) {
  return a.chained(std::atan(a.value()), 1.0 / (1.0 + a.value() * a.value()));
}

inline ADScalar sqrt(const ADScalar& a) {
  if (!(a.value() > 0.0)) throw DomainError(detail::describe("sqrt", a.value()));
  const double s = std::sqrt(a.value());
  return a.chained(s, 0.5 / s);
}

/// a^p for a real exponent. Non-integer p needs a >= 0; a = 0 additionally
/// needs p >= 1 so that the derivative stays finite.
inline ADScalar pow(const ADScalar& a, double p) {
  const double x = a.value();
  const bool integral = std::floor(p) == p;
  if (!integral && x < 0.0) throw DomainError(detail::describe("pow", x));
  if (x == 0.0 && p < 1.0 && p != 0.0) throw DomainError(detail::describe("pow", x));
  if (p == 0.0) return a.chained(1.0, 0.0);
  return a.chained(std::pow(x, p), p * std::pow(x, p - 1.0));
}

/// Quadrant-correct atan2(y, x); undefined at the origin.
inline ADScalar atan2(const ADScalar& y, const ADScalar& x) {
  if (y.width() != x.width()) throw DimensionError("atan2: seed width mismatch");
  const double yv = y.value();
  const double xv = x.value();
  const double r2 = xv * xv + yv * yv;
  if (r2 == 0.0) throw DomainError("atan2: undefined at (0, 0)");
  ADScalar r = y.chained(std::atan2(yv, xv), xv / r2);
  r.add_scaled(-yv / r2, x.chained(0.0, 1.0));
  return r;
}

/// max(a, 0)^p with p > 1: continuous with a continuous first derivative at a = 0.
inline double relu_pow(double a, double p) {
  if (!(p > 1.0)) throw DomainError(detail::describe("relu_pow exponent", p));
  return a > 0.0 ? std::pow(a, p) : 0.0;
}

inline ADScalar relu_pow(const ADScalar& a, double p) {
  if (!(p > 1.0)) throw DomainError(detail::describe("relu_pow exponent", p));
  const double x = a.value();
  if (x <= 0.0) return a.chained(0.0, 0.0);
  return a.chained(std::pow(x, p), p * std::pow(x, p - 1.0));
}

// ---------------------------------------------------------------------------
// Helpers for code that is generic over double and ADScalar.

template <class T>
inline constexpr bool is_ad_v = std::is_same_v<std::remove_cvref_t<T>, ADScalar>;

inline double value_of(double x) noexcept { return x; }
inline double value_of(const ADScalar& x) noexcept { return x.value(); }

/// A zero carrying the same bundle width as `ref`.
inline double zero_like(double) noexcept { return 0.0; }
inline ADScalar zero_like(const ADScalar& ref) { return ADScalar::constant(0.0, ref.width()); }

/// A constant carrying the same bundle width as `ref`.
inline double constant_like(double, double v) noexcept { return v; }
inline ADScalar constant_like(const ADScalar& ref, double v) {
  return ADScalar::constant(v, ref.width());
}

inline void add_scaled(double& acc, double c, double x) noexcept { acc += c * x; }
inline void add_scaled(ADScalar& acc, double c, const ADScalar& x) { acc.add_scaled(c, x); }

template <class T>
T square(const T& x) {
  return x * x;
}

template <class T>
std::vector<double> values_of(std::span<const T> xs) {
  std::vector<double> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(value_of(x));
  return out;
}

/// Identity-seeded lift: element i has value x[i] and seed vector e_i.
inline std::vector<ADScalar> lift_inputs(std::span<const double> x) {
  if (x.empty()) throw DimensionError("lift_inputs: empty input vector");
  std::vector<ADScalar> out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(ADScalar::variable(x[i], x.size(), i));
  return out;
}

inline std::vector<ADScalar> lift_constants(std::span<const double> x, std::size_t width) {
  std::vector<ADScalar> out;
  out.reserve(x.size());
  for (double v : x) out.push_back(ADScalar::constant(v, width));
  return out;
}

struct ValueAndJacobian {
  Vector value;
  Matrix jacobian;
};

/// Evaluates f once on lifted inputs and returns f(x0) together with df/dx at x0.
/// `f` maps std::span<const ADScalar> to std::vector<ADScalar>.
template <class F>
ValueAndJacobian evaluate_with_jacobian(F&& f, std::span<const double> x0) {
  const std::vector<ADScalar> inputs = lift_inputs(x0);
  const std::vector<ADScalar> outputs = f(std::span<const ADScalar>(inputs));
  const std::size_t n = x0.size();
  ValueAndJacobian out{Vector(outputs.size()), Matrix(outputs.size(), n)};
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    if (outputs[i].width() != n)
      throw DimensionError("jacobian: output " + std::to_string(i) + " has seed width " +
                           std::to_string(outputs[i].width()) + ", expected " +
                           std::to_string(n));
    out.value[i] = outputs[i].value();
    const auto seeds = outputs[i].seeds();
    for (std::size_t j = 0; j < n; ++j) out.jacobian(i, j) = seeds[j];
  }
  return out;
}

template <class F>
Matrix jacobian(F&& f, std::span<const double> x0) {
  return evaluate_with_jacobian(std::forward<F>(f), x0).jacobian;
}

}  // namespace nnrad
