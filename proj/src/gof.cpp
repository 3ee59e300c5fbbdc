#include "steinchi/gof.hpp"

#include "steinchi/coefficients.hpp"
#include "steinchi/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace steinchi {

FunctionBattery::FunctionBattery(std::vector<TestFunction<double>> functions,
                                 const WeightSpec<double>& spec)
    : functions_(std::move(functions)) {
  if (functions_.empty()) throw Error(Errc::InvalidSpec, "function battery is empty");
  for (std::size_t j = 0; j < functions_.size(); ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      if (functions_[j] == functions_[k]) {
        throw Error(Errc::InvalidSpec, "duplicate battery entry " + functions_[j].describe());
      }
    }
    for (const auto& report : {integrability_check(functions_[j], spec), variance_check(functions_[j], spec)}) {
      if (!report.ok) {
        throw Error(Errc::NotIntegrable, functions_[j].describe() + ": " + report.reason, report.index);
      }
    }
  }
}

FunctionBattery default_battery(const WeightSpec<double>& spec) {
  using P = Polynomial<double>;
  std::vector<TestFunction<double>> fs{P::monomial(1), P::monomial(2), P::monomial(3), Sine{1.0},
                                       Cosine{1.0}};
  double max_abs = 0.0;
  for (double w : spec.weights()) max_abs = std::max(max_abs, std::abs(w));
  const TestFunction<double> expo = Exponential{0.2 / max_abs};
  if (variance_check(expo, spec)) fs.push_back(expo);
  return FunctionBattery(std::move(fs), spec);
}

namespace {

class StatisticKernel {
 public:
  StatisticKernel(const WeightSpec<double>& spec, const FunctionBattery& battery, Centering centering) {
    const auto table = build_table(spec);
    for (const auto& f : battery.functions()) ops_.emplace_back(table, f, centering);
  }

  SteinStatistic operator()(std::span<const double> data) const {
    if (data.size() < 2) throw Error(Errc::BadCount, "need at least two data points");
    SteinStatistic out;
    std::vector<double> values(data.size());
    for (const auto& op : ops_) {
      for (std::size_t i = 0; i < data.size(); ++i) values[i] = op(data[i]);
      const MCEstimate est = summarize(values);
      double z;
      if (est.std_error > 0.0) {
        z = est.mean / est.std_error;
      } else {
        z = est.mean == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), est.mean);
      }
      out.per_function.push_back(z);
      out.statistic = std::max(out.statistic, std::abs(z));
    }
    return out;
  }

 private:
  std::vector<SteinOperator<double>> ops_;
};

}  // namespace

SteinStatistic stein_statistic(std::span<const double> data, const WeightSpec<double>& spec,
                               const FunctionBattery& battery, Centering centering) {
  // Sorted order makes the floating-point sums independent of input order.
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  return StatisticKernel(spec, battery, centering)(sorted);
}

double bootstrap_pvalue_from(double observed, std::span<const double> replicates) {
  const auto exceed = std::count_if(replicates.begin(), replicates.end(),
                                    [observed](double r) { return r >= observed; });
  return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(replicates.size()) + 1.0);
}

GofResult bootstrap_pvalue(std::span<const double> data, const WeightSpec<double>& spec,
                           const FunctionBattery& battery, Centering centering, std::size_t B,
                           std::uint64_t seed, const ParallelConfig& parallel) {
  if (B < 99) throw Error(Errc::BadCount, "bootstrap needs B >= 99, got " + std::to_string(B));
  const SteinStatistic observed = stein_statistic(data, spec, battery, centering);
  const StatisticKernel kernel(spec, battery, centering);
  const double mu = build_table(spec).mu;

  GofResult result;
  result.replicates.resize(B);
  const ParallelConfig inner{parallel.shards, 1};
  for_each_index(B, parallel.threads, [&](std::size_t b) {
    auto synthetic = sample(spec, data.size(), seed, inner, b + 1);
    if (centering == Centering::centered) {
      for (double& x : synthetic) x -= mu;
    }
    result.replicates[b] = kernel(synthetic).statistic;
  });

  result.statistic = observed.statistic;
  result.per_function = observed.per_function;
  result.B = B;
  result.exceedances = static_cast<std::size_t>(std::count_if(
      result.replicates.begin(), result.replicates.end(),
      [&](double r) { return r >= observed.statistic; }));
  result.pvalue = bootstrap_pvalue_from(observed.statistic, result.replicates);
  result.seed = seed;
  result.shards = parallel.shards;
  return result;
}

}  // namespace steinchi
