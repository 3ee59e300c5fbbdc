#pragma once

#include "steinchi/coefficients.hpp"
#include "steinchi/polynomial.hpp"
#include "steinchi/scalar.hpp"
#include "steinchi/stein_operator.hpp"
#include "steinchi/weight_spec.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

// Exact expectations under the weighted chi-square law. Everything here is
// rational; float callers convert at the boundary.

namespace steinchi {

/// [E Q^0 .. E Q^n] for Q ~ chi^2_p: E Q^j = p (p+2) ... (p+2j-2).
std::vector<Rational> chisq_raw_moments(const Rational& p, long n);

/// [kappa_1 .. kappa_n] of U: kappa_j = sum_i lambda_i^j 2^{j-1} (j-1)! m_i.
std::vector<Rational> cumulants(const WeightSpec<Rational>& spec, long n);

/// [E (U-mu)^0 .. E (U-mu)^n] via the cumulant-to-moment recursion.
std::vector<Rational> central_moments(const WeightSpec<Rational>& spec, long n);

/// [E U^0 .. E U^n] via the same recursion with kappa_1 kept.
std::vector<Rational> raw_moments(const WeightSpec<Rational>& spec, long n);

/// Second, independent route to the central moments: expands
/// (sum_i lambda_i (Q_i - m_i))^j with the multinomial theorem and factors
/// each term by independence into per-coordinate chi^2 moments. Cost grows
/// combinatorially in r; intended as a cross-check for small r.
std::vector<Rational> central_moments_by_expansion(const WeightSpec<Rational>& spec, long n);

struct MomentTable {
  WeightSpec<Rational> spec;
  std::vector<Rational> cumulants;        // [kappa_1 .. kappa_N]
  std::vector<Rational> central_moments;  // [E U~^0 .. E U~^N]
  std::vector<Rational> raw_moments;      // [E U^0 .. E U^N]

  long order() const noexcept { return static_cast<long>(raw_moments.size()) - 1; }
};

MomentTable moment_table(const WeightSpec<Rational>& spec, long n);

/// True when raw moments equal the binomial shift of the central moments by mu.
bool shift_consistent(const MomentTable& table);

/// Thread-safe memo of moment tables keyed by (spec, order). A cached table
/// of higher order serves lower-order requests.
class MomentCache {
 public:
  std::shared_ptr<const MomentTable> get(const WeightSpec<Rational>& spec, long n);
  std::size_t size() const;

 private:
  static std::string key(const WeightSpec<Rational>& spec);

  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const MomentTable>> tables_;
};

/// E f(U - mu) when centered, E f(U) otherwise.
Rational expect_polynomial(const WeightSpec<Rational>& spec, const Polynomial<Rational>& f,
                           Centering centering);

/// E Tf(U - mu) (centered) or E Tf(U) (non-centered), without judging the result.
Rational operator_expectation(const WeightSpec<Rational>& spec, const Polynomial<Rational>& f,
                              Centering centering);

/// Same, against a caller-supplied table (which may be deliberately corrupted).
Rational operator_expectation(const CoefficientTable<Rational>& table, const Polynomial<Rational>& f,
                              Centering centering);

/// As operator_expectation, but a nonzero result throws TheoremViolation.
Rational expect_operator(const WeightSpec<Rational>& spec, const Polynomial<Rational>& f,
                         Centering centering);

/// E[(Q-p) f(Q)] - E[2 Q f'(Q)] for Q ~ chi^2_p, without judging the result.
Rational ibp_residual(const Rational& p, const Polynomial<Rational>& f);

/// As ibp_residual, but a nonzero result throws LemmaViolation.
Rational verify_ibp(const Rational& p, const Polynomial<Rational>& f);

}  // namespace steinchi
