#pragma once

#include "steinchi/scalar.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace steinchi {

/// Dense univariate polynomial, coefficients in ascending degree.
/// Trailing zeros are stripped; the zero polynomial has no coefficients.
template <Field T>
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : c_(std::move(coeffs)) { normalize(); }

  static Polynomial monomial(std::size_t degree, T coeff = from_int<T>(1)) {
    std::vector<T> c(degree + 1, from_int<T>(0));
    c[degree] = std::move(coeff);
    return Polynomial(std::move(c));
  }
  static Polynomial constant(T c) { return Polynomial(std::vector<T>{std::move(c)}); }

  std::span<const T> coeffs() const noexcept { return c_; }
  bool is_zero() const noexcept { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  T coeff(std::size_t k) const { return k < c_.size() ? c_[k] : from_int<T>(0); }

  T operator()(const T& x) const {
    T acc = from_int<T>(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  Polynomial derivative(std::size_t k = 1) const {
    if (k >= c_.size()) return {};
    std::vector<T> d(c_.size() - k);
    for (std::size_t j = k; j < c_.size(); ++j) {
      // j (j-1) ... (j-k+1)
      std::int64_t falling = 1;
      for (std::size_t s = 0; s < k; ++s) falling *= static_cast<std::int64_t>(j - s);
      d[j - k] = from_int<T>(falling) * c_[j];
    }
    return Polynomial(std::move(d));
  }

  Polynomial& operator+=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), from_int<T>(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    normalize();
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), from_int<T>(0));
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    normalize();
    return *this;
  }
  Polynomial& operator*=(const T& s) {
    for (auto& x : c_) x *= s;
    normalize();
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const T& s) { return a *= s; }
  friend Polynomial operator*(const T& s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> out(a.c_.size() + b.c_.size() - 1, from_int<T>(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Polynomial(std::move(out));
  }

  /// x -> p(x + shift)
  Polynomial shifted(const T& shift) const {
    Polynomial out;
    const Polynomial linear(std::vector<T>{shift, from_int<T>(1)});
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
      out = out * linear + constant(*it);
    }
    return out;
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void normalize() {
    while (!c_.empty() && steinchi::is_zero(c_.back())) c_.pop_back();
  }

  std::vector<T> c_;
};

}  // namespace steinchi
