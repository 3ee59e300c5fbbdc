#pragma once

#include "steinchi/error.hpp"
#include "steinchi/scalar.hpp"
#include "steinchi/weight_spec.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace steinchi {

namespace detail {

// e_k <- e_k + w * e_{k-1}, k descending, one pass per weight.
template <Field T>
std::vector<T> symmetric_recurrence(std::span<const T> weights) {
  std::vector<T> e(weights.size() + 1, from_int<T>(0));
  e[0] = from_int<T>(1);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    for (std::size_t k = j + 1; k >= 1; --k) {
      e[k] += weights[j] * e[k - 1];
    }
  }
  return e;
}

}  // namespace detail

/// Elementary symmetric polynomials [Lambda_0 .. Lambda_r] of the weights.
template <Field T>
std::vector<T> elementary_symmetric(std::span<const T> weights) {
  if (weights.empty()) throw Error(Errc::EmptySpec, "weight list is empty");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (is_zero(weights[i])) {
      throw Error(Errc::InvalidWeight, "weight " + std::to_string(i + 1) + " is zero", i);
    }
  }
  return detail::symmetric_recurrence(weights);
}

/// [Lambda_{0,i} .. Lambda_{r,i}]: symmetric polynomials of the weights with
/// entry `index` (zero-based) removed, padded with the vanishing Lambda_{r,i}.
/// Recomputed from scratch rather than by deflating the full polynomial.
template <Field T>
std::vector<T> leave_one_out(std::span<const T> weights, std::size_t index) {
  if (index >= weights.size()) {
    throw Error(Errc::BadIndex,
                "index " + std::to_string(index) + " out of range for " +
                    std::to_string(weights.size()) + " weights",
                index);
  }
  std::vector<T> rest;
  rest.reserve(weights.size() - 1);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    if (j != index) rest.push_back(weights[j]);
  }
  auto e = detail::symmetric_recurrence<T>(rest);
  e.push_back(from_int<T>(0));
  return e;
}

template <Field T>
struct MuSequence {
  T mu;                 // E U = sum_i lambda_i m_i
  std::vector<T> seq;   // [mu_0 .. mu_r], mu_0 = 0
};

/// mu_k = sum_i lambda_i^2 Lambda_{k-1,i} m_i for k >= 1.
template <Field T>
MuSequence<T> mu_sequence(const WeightSpec<T>& spec) {
  const auto w = spec.weights();
  const auto m = spec.dofs();
  const std::size_t r = spec.size();
  MuSequence<T> out{from_int<T>(0), std::vector<T>(r + 1, from_int<T>(0))};
  for (std::size_t i = 0; i < r; ++i) {
    out.mu += w[i] * m[i];
    const auto loo = leave_one_out(w, i);
    const T scale = w[i] * w[i] * m[i];
    for (std::size_t k = 1; k <= r; ++k) out.seq[k] += scale * loo[k - 1];
  }
  return out;
}

/// Every coefficient the characterizing operator needs for one law.
template <Field T>
struct CoefficientTable {
  WeightSpec<T> spec;
  std::vector<T> lambda_full;              // [Lambda_0 .. Lambda_r]
  std::vector<std::vector<T>> lambda_loo;  // lambda_loo[i][k] = Lambda_{k,i}
  std::vector<T> mu_seq;                   // [mu_0 .. mu_r]
  T mu;

  std::size_t order() const noexcept { return lambda_full.size() - 1; }
};

struct IdentityCheck {
  IdentityCheck() = default;
  explicit IdentityCheck(std::string check_name) : name(std::move(check_name)) {}

  std::string name;
  bool passed = true;
  std::string detail;  // first counterexample, empty when passed
};

namespace detail {

template <Field T>
bool same(const T& a, const T& b) {
  if constexpr (is_exact_v<T>) {
    return a == b;
  } else {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) <= 1e-12 * scale;
  }
}

}  // namespace detail

/// Evaluates the structural identities of a table. Exact comparison in
/// rational mode; 1e-12 relative in float mode.
template <Field T>
std::vector<IdentityCheck> check_identities(const CoefficientTable<T>& t) {
  using detail::same;
  const std::size_t r = t.spec.size();
  const auto w = t.spec.weights();
  const T zero = from_int<T>(0);
  const T one = from_int<T>(1);
  std::vector<IdentityCheck> out;

  auto fail = [](IdentityCheck& c, std::string what) {
    if (c.passed) {
      c.passed = false;
      c.detail = std::move(what);
    }
  };
  auto at = [](std::size_t i, std::size_t k) {
    return "i=" + std::to_string(i + 1) + ", k=" + std::to_string(k);
  };

  IdentityCheck shape{"table_shape"};
  if (t.lambda_full.size() != r + 1 || t.mu_seq.size() != r + 1 || t.lambda_loo.size() != r) {
    fail(shape, "table dimensions do not match r=" + std::to_string(r));
  }
  for (const auto& row : t.lambda_loo) {
    if (row.size() != r + 1) fail(shape, "leave-one-out row has wrong length");
  }
  out.push_back(shape);
  if (!shape.passed) return out;

  IdentityCheck lambda0{"lambda_0_is_one"};
  if (!same(t.lambda_full[0], one)) fail(lambda0, "Lambda_0 = " + format_scalar(t.lambda_full[0]));
  for (std::size_t i = 0; i < r; ++i) {
    if (!same(t.lambda_loo[i][0], one)) fail(lambda0, "Lambda_{0,i} != 1 at " + at(i, 0));
  }
  out.push_back(lambda0);

  IdentityCheck loo_r{"lambda_r_i_vanishes"};
  for (std::size_t i = 0; i < r; ++i) {
    if (!same(t.lambda_loo[i][r], zero)) fail(loo_r, "Lambda_{r,i} != 0 at " + at(i, r));
  }
  out.push_back(loo_r);

  IdentityCheck mu0{"mu_0_is_zero"};
  if (!same(t.mu_seq[0], zero)) fail(mu0, "mu_0 = " + format_scalar(t.mu_seq[0]));
  out.push_back(mu0);

  IdentityCheck mur{"mu_r_equals_lambda_r_mu"};
  if (!same(T(t.mu_seq[r]), T(t.lambda_full[r] * t.mu))) {
    fail(mur, "mu_r = " + format_scalar(t.mu_seq[r]) + " but Lambda_r mu = " +
                  format_scalar(T(t.lambda_full[r] * t.mu)));
  }
  out.push_back(mur);

  IdentityCheck deletion{"deletion_recurrence"};  // Lambda_k - Lambda_{k-1,i} lambda_i = Lambda_{k,i}
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t k = 1; k <= r; ++k) {
      if (!same(T(t.lambda_full[k] - t.lambda_loo[i][k - 1] * w[i]), t.lambda_loo[i][k])) {
        fail(deletion, "fails at " + at(i, k));
      }
    }
  }
  out.push_back(deletion);

  IdentityCheck weighted{"weighted_loo_sum"};  // sum_i Lambda_{k,i} lambda_i = (k+1) Lambda_{k+1}
  for (std::size_t k = 0; k < r; ++k) {
    T lhs = zero;
    for (std::size_t i = 0; i < r; ++i) lhs += t.lambda_loo[i][k] * w[i];
    const T rhs = from_int<T>(static_cast<std::int64_t>(k + 1)) * t.lambda_full[k + 1];
    if (!same(lhs, rhs)) fail(weighted, "fails at k=" + std::to_string(k));
  }
  out.push_back(weighted);

  IdentityCheck plain{"plain_loo_sum"};  // sum_i Lambda_{k,i} = (r-k) Lambda_k
  for (std::size_t k = 0; k <= r; ++k) {
    T lhs = zero;
    for (std::size_t i = 0; i < r; ++i) lhs += t.lambda_loo[i][k];
    const T rhs = from_int<T>(static_cast<std::int64_t>(r - k)) * t.lambda_full[k];
    if (!same(lhs, rhs)) fail(plain, "fails at k=" + std::to_string(k));
  }
  out.push_back(plain);

  return out;
}

/// Computes every coefficient without checking the identities.
template <Field T>
CoefficientTable<T> assemble_table(const WeightSpec<T>& spec) {
  CoefficientTable<T> t{spec, elementary_symmetric(spec.weights()), {}, {}, from_int<T>(0)};
  for (std::size_t i = 0; i < spec.size(); ++i) {
    t.lambda_loo.push_back(leave_one_out(spec.weights(), i));
  }
  auto mus = mu_sequence(spec);
  t.mu_seq = std::move(mus.seq);
  t.mu = std::move(mus.mu);
  return t;
}

/// Builds the table. In exact mode every identity is asserted before return
/// and a violation throws InternalInconsistency.
template <Field T>
CoefficientTable<T> build_table(const WeightSpec<T>& spec) {
  CoefficientTable<T> t = assemble_table(spec);

  if constexpr (is_exact_v<T>) {
    for (const auto& check : check_identities(t)) {
      if (!check.passed) {
        throw Error(Errc::InternalInconsistency,
                    "coefficient identity '" + check.name + "' violated: " + check.detail);
      }
    }
  }
  return t;
}

}  // namespace steinchi
