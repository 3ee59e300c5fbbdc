#pragma once

#include "steinchi/simulation.hpp"
#include "steinchi/stein_operator.hpp"
#include "steinchi/test_function.hpp"
#include "steinchi/weight_spec.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace steinchi {

/// Test functions probing E Tf = 0 under a hypothesized law. Every entry
/// passes both the integrability and the finite-variance screen for that
/// law; the list is nonempty and duplicate-free.
class FunctionBattery {
 public:
  FunctionBattery(std::vector<TestFunction<double>> functions, const WeightSpec<double>& spec);

  std::span<const TestFunction<double>> functions() const noexcept { return functions_; }
  std::size_t size() const noexcept { return functions_.size(); }

 private:
  std::vector<TestFunction<double>> functions_;
};

/// {x, x^2, x^3, sin x, cos x} plus exp(s x) with s = 0.2 / max|lambda_i|.
FunctionBattery default_battery(const WeightSpec<double>& spec);

struct SteinStatistic {
  double statistic = 0.0;            // max_j |per_function[j]|
  std::vector<double> per_function;  // mean_j / se_j of Tf_j over the data
};

/// Max absolute standardized mean of Tf_j over the data. Centered data are
/// values of U - mu; otherwise values of U. Exactly invariant under
/// reordering of the data and of the battery.
SteinStatistic stein_statistic(std::span<const double> data, const WeightSpec<double>& spec,
                               const FunctionBattery& battery, Centering centering);

struct GofResult {
  double statistic = 0.0;
  double pvalue = 1.0;
  std::vector<double> per_function;
  std::size_t B = 0;
  std::size_t exceedances = 0;  // replicates >= observed
  std::uint64_t seed = 0;
  std::size_t shards = 0;
  std::vector<double> replicates;
};

/// (1 + #{replicate >= observed}) / (B + 1).
double bootstrap_pvalue_from(double observed, std::span<const double> replicates);

/// Parametric bootstrap: B synthetic datasets of the same size are drawn
/// from the hypothesized law (replicate b from stream b + 1 of `seed`), and
/// the observed statistic is ranked against their statistics.
GofResult bootstrap_pvalue(std::span<const double> data, const WeightSpec<double>& spec,
                           const FunctionBattery& battery, Centering centering, std::size_t B,
                           std::uint64_t seed, const ParallelConfig& parallel = {});

}  // namespace steinchi
