#pragma once

#include "steinchi/coefficients.hpp"
#include "steinchi/error.hpp"
#include "steinchi/polynomial.hpp"
#include "steinchi/scalar.hpp"
#include "steinchi/test_function.hpp"

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

namespace steinchi {

enum class Centering { centered, noncentered };

namespace detail {

inline std::int64_t minus_two_pow(std::size_t k) {
  return (k % 2 ? -1 : 1) * (std::int64_t{1} << k);
}

}  // namespace detail

/// The characterizing operator of a weighted chi-square law bound to one
/// test function:
///
///   centered:     Tf(x) = sum_{k=0}^r (-2)^k (mu_k + Lambda_k x) f^(k)(x)
///   non-centered: Tf(x) = sum_{k=0}^r (-2)^k (mu_k + Lambda_k x - Lambda_k mu) f^(k)(x)
///
/// E Tf(U - mu) = 0 (centered) and E Tf(U) = 0 (non-centered) for every f
/// passing integrability_check. The derivatives f^(0..r) are materialized
/// once at construction so repeated evaluation is cheap.
template <Field T>
class SteinOperator {
 public:
  SteinOperator(const CoefficientTable<T>& table, const TestFunction<T>& f, Centering centering) {
    const std::size_t r = table.order();
    if constexpr (is_exact_v<T>) {
      if (!f.is_polynomial()) {
        throw Error(Errc::ModeUnsupported,
                    f.describe() + " cannot be evaluated in exact mode; use float mode");
      }
    }
    for (std::size_t k = 0; k <= r; ++k) {
      T offset = table.mu_seq[k];
      if (centering == Centering::noncentered) offset -= table.lambda_full[k] * table.mu;
      offset_.push_back(std::move(offset));
      slope_.push_back(table.lambda_full[k]);
    }

    std::visit(
        [&](const auto& g) {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, Polynomial<T>>) {
            for (std::size_t k = 0; k <= r; ++k) poly_derivs_.push_back(g.derivative(k));
          } else if constexpr (std::is_same_v<G, Exponential>) {
            kind_ = Kind::exponential;
            rate_ = g.scale;
            for (std::size_t k = 0; k <= r; ++k) amp_.push_back(f.derivative(k).exponential()->amplitude);
          } else {
            kind_ = Kind::trig;
            rate_ = g.frequency;
            // f^(k)(x) = amp_k * (sin or cos)(t x), sign folded into amp_k
            for (std::size_t k = 0; k <= r; ++k) {
              const auto d = f.derivative(k);
              if (const auto* s = std::get_if<Sine>(&d.family())) {
                amp_.push_back(s->amplitude);
                uses_cos_.push_back(false);
              } else {
                amp_.push_back(std::get<Cosine>(d.family()).amplitude);
                uses_cos_.push_back(true);
              }
            }
          }
        },
        f.family());
  }

  std::size_t order() const noexcept { return slope_.size() - 1; }

  /// f^(k)(x) for the bound test function.
  T derivative_at(std::size_t k, const T& x) const {
    if constexpr (is_exact_v<T>) {
      return poly_derivs_[k](x);
    } else {
      switch (kind_) {
        case Kind::polynomial: return poly_derivs_[k](x);
        case Kind::exponential: return amp_[k] * std::exp(rate_ * x);
        case Kind::trig: return amp_[k] * (uses_cos_[k] ? std::cos(rate_ * x) : std::sin(rate_ * x));
      }
      return 0.0;
    }
  }

  T operator()(const T& x) const {
    if constexpr (is_exact_v<T>) {
      T sum = from_int<T>(0);
      for (std::size_t k = 0; k < slope_.size(); ++k) {
        sum += from_int<T>(detail::minus_two_pow(k)) * ((offset_[k] + slope_[k] * x) * poly_derivs_[k](x));
      }
      return sum;
    } else {
      double base_a = 0.0;
      double base_b = 0.0;
      if (kind_ == Kind::exponential) {
        base_a = std::exp(rate_ * x);
      } else if (kind_ == Kind::trig) {
        base_a = std::sin(rate_ * x);
        base_b = std::cos(rate_ * x);
      }
      double sum = 0.0;
      for (std::size_t k = 0; k < slope_.size(); ++k) {
        double fk;
        switch (kind_) {
          case Kind::polynomial: fk = poly_derivs_[k](x); break;
          case Kind::exponential: fk = amp_[k] * base_a; break;
          default: fk = amp_[k] * (uses_cos_[k] ? base_b : base_a); break;
        }
        sum += static_cast<double>(detail::minus_two_pow(k)) * ((offset_[k] + slope_[k] * x) * fk);
      }
      return sum;
    }
  }

 private:
  enum class Kind { polynomial, exponential, trig };

  std::vector<T> offset_;  // mu_k, less Lambda_k mu when non-centered
  std::vector<T> slope_;   // Lambda_k
  Kind kind_ = Kind::polynomial;
  std::vector<Polynomial<T>> poly_derivs_;
  double rate_ = 0.0;
  std::vector<double> amp_;
  std::vector<bool> uses_cos_;
};

template <Field T>
T apply_centered(const CoefficientTable<T>& table, const TestFunction<T>& f, const T& x) {
  return SteinOperator<T>(table, f, Centering::centered)(x);
}

template <Field T>
T apply_noncentered(const CoefficientTable<T>& table, const TestFunction<T>& f, const T& x) {
  return SteinOperator<T>(table, f, Centering::noncentered)(x);
}

/// Exact image of a polynomial under the operator; degree deg(f) + 1 for
/// nonzero f.
template <Field T>
Polynomial<T> operator_polynomial(const CoefficientTable<T>& table, const Polynomial<T>& f,
                                  Centering centering) {
  Polynomial<T> out;
  for (std::size_t k = 0; k <= table.order(); ++k) {
    const Polynomial<T> dk = f.derivative(k);
    if (dk.is_zero()) break;
    T offset = table.mu_seq[k];
    if (centering == Centering::noncentered) offset -= table.lambda_full[k] * table.mu;
    const Polynomial<T> affine(std::vector<T>{offset, table.lambda_full[k]});
    out += (affine * dk) * from_int<T>(detail::minus_two_pow(k));
  }
  return out;
}

/// The single chi^2_p operator 2(x + p) f'(x) - x f(x), for the centered
/// law chi^2_p - p. Equals minus apply_centered for weights (1), dofs (p).
template <Field T>
T single_chisq_operator(const T& p, const TestFunction<T>& f, const T& x) {
  if (sign_of(p) <= 0) throw Error(Errc::InvalidDof, "degrees of freedom must be positive");
  if constexpr (is_exact_v<T>) {
    if (!f.is_polynomial()) {
      throw Error(Errc::ModeUnsupported, f.describe() + " cannot be evaluated in exact mode");
    }
  }
  const T two = from_int<T>(2);
  return T(two * (x + p) * f.derivative(1)(x) - x * f(x));
}

}  // namespace steinchi
