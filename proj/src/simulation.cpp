#include "steinchi/simulation.hpp"

#include "steinchi/coefficients.hpp"
#include "steinchi/error.hpp"

#include <cmath>
#include <string>

namespace steinchi {

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 64;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

GammaSampler::GammaSampler(double shape) : shape_(shape), boosted_(shape < 1.0) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw Error(Errc::InvalidDof, "gamma shape must be positive and finite");
  }
  const double a = boosted_ ? shape + 1.0 : shape;
  d_ = a - 1.0 / 3.0;
  c_ = 1.0 / std::sqrt(9.0 * d_);
  if (boosted_) inv_shape_ = 1.0 / shape;
}

double GammaSampler::normal(Philox4x32& rng) {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * rng.uniform() - 1.0;
    v = 2.0 * rng.uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double factor = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * factor;
  have_spare_ = true;
  return u * factor;
}

double GammaSampler::operator()(Philox4x32& rng) {
  if (shape_ == 0.5) {
    const double z = normal(rng);
    return 0.5 * z * z;
  }
  double draw;
  for (;;) {
    const double x = normal(rng);
    double v = 1.0 + c_ * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2 || std::log(u) < 0.5 * x2 + d_ * (1.0 - v + std::log(v))) {
      draw = d_ * v;
      break;
    }
  }
  if (boosted_) {
    const double u = rng.uniform();
    draw *= std::pow(u, inv_shape_);
  }
  return draw;
}

WeightedChiSquareSampler::WeightedChiSquareSampler(const WeightSpec<double>& spec)
    : weights_(spec.weights().begin(), spec.weights().end()) {
  for (double m : spec.dofs()) gammas_.emplace_back(m / 2.0);
}

double WeightedChiSquareSampler::operator()(Philox4x32& rng) {
  double u = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) u += weights_[i] * (2.0 * gammas_[i](rng));
  return u;
}

namespace {

void require_shards(const ParallelConfig& parallel) {
  if (parallel.shards == 0 || parallel.shards > 0xFFFFFFFFu) {
    throw Error(Errc::BadCount, "shard count must be in [1, 2^32)");
  }
}

std::size_t shard_begin(std::size_t shard, std::size_t shards, std::size_t n) {
  return static_cast<std::size_t>((static_cast<unsigned __int128>(shard) * n) / shards);
}

}  // namespace

std::vector<double> sample(const WeightSpec<double>& spec, std::size_t n, std::uint64_t seed,
                           const ParallelConfig& parallel, std::uint64_t stream) {
  if (n == 0) throw Error(Errc::BadCount, "sample count must be positive");
  require_shards(parallel);
  std::vector<double> out(n);
  for_each_index(parallel.shards, parallel.threads, [&](std::size_t shard) {
    Philox4x32 rng(seed, stream_id(stream, shard));
    WeightedChiSquareSampler draw(spec);
    const std::size_t end = shard_begin(shard + 1, parallel.shards, n);
    for (std::size_t j = shard_begin(shard, parallel.shards, n); j < end; ++j) out[j] = draw(rng);
  });
  return out;
}

MCEstimate summarize(std::span<const double> values) {
  if (values.size() < 2) throw Error(Errc::BadCount, "need at least two values for a standard error");
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = pairwise_sum(sq) / (n - 1.0);
  return {mean, std::sqrt(var / n), values.size(), 0, 0};
}

MCEstimate mc_expect_operator(const WeightSpec<double>& spec, const TestFunction<double>& f,
                              Centering centering, std::size_t n, std::uint64_t seed,
                              const ParallelConfig& parallel) {
  if (n < 2) throw Error(Errc::BadCount, "Monte Carlo needs n >= 2");
  require_shards(parallel);
  for (const auto& report : {integrability_check(f, spec), variance_check(f, spec)}) {
    if (!report.ok) {
      throw Error(Errc::NotIntegrable, f.describe() + ": " + report.reason, report.index);
    }
  }
  const auto table = build_table(spec);
  const SteinOperator<double> op(table, f, centering);
  const double shift = centering == Centering::centered ? table.mu : 0.0;

  std::vector<double> values(n);
  for_each_index(parallel.shards, parallel.threads, [&](std::size_t shard) {
    Philox4x32 rng(seed, stream_id(0, shard));
    WeightedChiSquareSampler draw(spec);
    const std::size_t end = shard_begin(shard + 1, parallel.shards, n);
    for (std::size_t j = shard_begin(shard, parallel.shards, n); j < end; ++j) {
      values[j] = op(draw(rng) - shift);
    }
  });
  MCEstimate est = summarize(values);
  est.seed = seed;
  est.shards = parallel.shards;
  return est;
}

}  // namespace steinchi
