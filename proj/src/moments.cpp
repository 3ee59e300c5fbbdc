#include "steinchi/moments.hpp"

#include "steinchi/error.hpp"

#include <functional>
#include <mutex>
#include <utility>

namespace steinchi {

namespace {

void require_order(long n, long min) {
  if (n < min) {
    throw Error(Errc::BadOrder, "moment order " + std::to_string(n) + " must be >= " +
                                    std::to_string(min));
  }
}

using boost::multiprecision::mpz_int;

std::vector<mpz_int> binomial_row(long n) {
  std::vector<mpz_int> row(static_cast<std::size_t>(n) + 1, 1);
  for (long k = 1; k < n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
  return row;
}

// m_j = sum_{a=0}^{j-1} C(j-1, a) kappa_{a+1} m_{j-1-a}, kappa passed 1-based as kappa[a].
std::vector<Rational> moments_from_cumulants(const std::vector<Rational>& kappa, long n) {
  std::vector<Rational> m(static_cast<std::size_t>(n) + 1);
  m[0] = 1;
  for (long j = 1; j <= n; ++j) {
    const auto binom = binomial_row(j - 1);
    Rational acc = 0;
    for (long a = 0; a < j; ++a) acc += Rational(binom[a]) * kappa[a] * m[j - 1 - a];
    m[j] = acc;
  }
  return m;
}

}  // namespace

std::vector<Rational> chisq_raw_moments(const Rational& p, long n) {
  require_order(n, 0);
  if (p.sign() <= 0) throw Error(Errc::InvalidDof, "degrees of freedom must be positive");
  std::vector<Rational> out{Rational(1)};
  for (long j = 1; j <= n; ++j) out.push_back(out.back() * (p + 2 * (j - 1)));
  return out;
}

std::vector<Rational> cumulants(const WeightSpec<Rational>& spec, long n) {
  require_order(n, 1);
  std::vector<Rational> out;
  mpz_int factor = 1;  // 2^{j-1} (j-1)!
  for (long j = 1; j <= n; ++j) {
    if (j > 1) factor *= 2 * (j - 1);
    Rational acc = 0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      acc += ipow<Rational>(spec.weight(i), static_cast<unsigned>(j)) * spec.dof(i);
    }
    out.push_back(acc * Rational(factor));
  }
  return out;
}

std::vector<Rational> central_moments(const WeightSpec<Rational>& spec, long n) {
  require_order(n, 0);
  if (n == 0) return {Rational(1)};
  auto kappa = cumulants(spec, n);
  kappa[0] = 0;
  return moments_from_cumulants(kappa, n);
}

std::vector<Rational> raw_moments(const WeightSpec<Rational>& spec, long n) {
  require_order(n, 0);
  if (n == 0) return {Rational(1)};
  return moments_from_cumulants(cumulants(spec, n), n);
}

std::vector<Rational> central_moments_by_expansion(const WeightSpec<Rational>& spec, long n) {
  require_order(n, 0);
  const std::size_t r = spec.size();

  // centered[i][a] = E (lambda_i (Q_i - m_i))^a, from raw chi^2 moments.
  std::vector<std::vector<Rational>> centered(r);
  for (std::size_t i = 0; i < r; ++i) {
    const auto raw = chisq_raw_moments(spec.dof(i), n);
    for (long a = 0; a <= n; ++a) {
      const auto binom = binomial_row(a);
      Rational acc = 0;
      for (long b = 0; b <= a; ++b) {
        acc += Rational(binom[b]) * raw[b] * ipow<Rational>(Rational(-spec.dof(i)), static_cast<unsigned>(a - b));
      }
      centered[i].push_back(acc * ipow<Rational>(spec.weight(i), static_cast<unsigned>(a)));
    }
  }

  std::vector<Rational> out;
  for (long j = 0; j <= n; ++j) {
    // Sum over compositions a_1 + ... + a_r = j of j!/(a_1!...a_r!) prod_i E[...^{a_i}].
    Rational total = 0;
    std::vector<long> parts(r, 0);
    std::function<void(std::size_t, long)> recurse = [&](std::size_t i, long remaining) {
      if (i + 1 == r) {
        parts[i] = remaining;
        mpz_int multinomial = 1;
        long used = 0;
        for (std::size_t s = 0; s < r; ++s) {
          multinomial *= binomial_row(used + parts[s])[parts[s]];
          used += parts[s];
        }
        Rational term(multinomial);
        for (std::size_t s = 0; s < r; ++s) term *= centered[s][parts[s]];
        total += term;
        return;
      }
      for (long a = 0; a <= remaining; ++a) {
        parts[i] = a;
        recurse(i + 1, remaining - a);
      }
    };
    recurse(0, j);
    out.push_back(total);
  }
  return out;
}

MomentTable moment_table(const WeightSpec<Rational>& spec, long n) {
  require_order(n, 1);
  MomentTable t{spec, cumulants(spec, n), {}, {}};
  auto kappa = t.cumulants;
  t.raw_moments = moments_from_cumulants(kappa, n);
  kappa[0] = 0;
  t.central_moments = moments_from_cumulants(kappa, n);
  return t;
}

bool shift_consistent(const MomentTable& table) {
  const Rational& mu = table.cumulants.front();
  for (long j = 0; j <= table.order(); ++j) {
    const auto binom = binomial_row(j);
    Rational acc = 0;
    for (long a = 0; a <= j; ++a) {
      acc += Rational(binom[a]) * table.central_moments[a] * ipow<Rational>(mu, static_cast<unsigned>(j - a));
    }
    if (acc != table.raw_moments[j]) return false;
  }
  return true;
}

std::string MomentCache::key(const WeightSpec<Rational>& spec) {
  std::string k;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    k += format_rational(spec.weight(i)) + ":" + format_rational(spec.dof(i)) + ";";
  }
  return k;
}

std::shared_ptr<const MomentTable> MomentCache::get(const WeightSpec<Rational>& spec, long n) {
  const std::string k = key(spec);
  {
    std::shared_lock lock(mutex_);
    if (auto it = tables_.find(k); it != tables_.end() && it->second->order() >= n) return it->second;
  }
  auto fresh = std::make_shared<const MomentTable>(moment_table(spec, n));
  std::unique_lock lock(mutex_);
  auto& slot = tables_[k];
  if (!slot || slot->order() < n) slot = fresh;
  return slot;
}

std::size_t MomentCache::size() const {
  std::shared_lock lock(mutex_);
  return tables_.size();
}

Rational expect_polynomial(const WeightSpec<Rational>& spec, const Polynomial<Rational>& f,
                           Centering centering) {
  if (f.is_zero()) return 0;
  const long n = f.degree();
  const auto moments = centering == Centering::centered ? central_moments(spec, n) : raw_moments(spec, n);
  Rational acc = 0;
  for (long k = 0; k <= n; ++k) acc += f.coeffs()[k] * moments[k];
  return acc;
}

Rational operator_expectation(const CoefficientTable<Rational>& table, const Polynomial<Rational>& f,
                              Centering centering) {
  return expect_polynomial(table.spec, operator_polynomial(table, f, centering), centering);
}

Rational operator_expectation(const WeightSpec<Rational>& spec, const Polynomial<Rational>& f,
                              Centering centering) {
  return operator_expectation(build_table(spec), f, centering);
}

Rational expect_operator(const WeightSpec<Rational>& spec, const Polynomial<Rational>& f,
                         Centering centering) {
  Rational value = operator_expectation(spec, f, centering);
  if (!value.is_zero()) {
    throw Error(Errc::TheoremViolation,
                std::string(centering == Centering::centered ? "centered" : "non-centered") +
                    " operator expectation is " + format_rational(value) + ", expected exactly 0");
  }
  return value;
}

Rational ibp_residual(const Rational& p, const Polynomial<Rational>& f) {
  if (p.sign() <= 0) throw Error(Errc::InvalidDof, "degrees of freedom must be positive");
  const Polynomial<Rational> x_minus_p(std::vector<Rational>{Rational(-p), Rational(1)});
  const Polynomial<Rational> two_x = Polynomial<Rational>::monomial(1, Rational(2));
  const Polynomial<Rational> integrand = x_minus_p * f - two_x * f.derivative();
  if (integrand.is_zero()) return 0;
  const auto raw = chisq_raw_moments(p, integrand.degree());
  Rational acc = 0;
  for (std::size_t k = 0; k < integrand.coeffs().size(); ++k) acc += integrand.coeffs()[k] * raw[k];
  return acc;
}

Rational verify_ibp(const Rational& p, const Polynomial<Rational>& f) {
  Rational value = ibp_residual(p, f);
  if (!value.is_zero()) {
    throw Error(Errc::LemmaViolation, "E[(Q-p)f(Q)] - E[2Qf'(Q)] = " + format_rational(value) +
                                          " for p = " + format_rational(p));
  }
  return value;
}

}  // namespace steinchi
