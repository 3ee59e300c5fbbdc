#pragma once

#include "steinchi/philox.hpp"
#include "steinchi/stein_operator.hpp"
#include "steinchi/test_function.hpp"
#include "steinchi/weight_spec.hpp"

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace steinchi {

/// How a stochastic computation is partitioned. `shards` is part of the
/// reproducibility contract; `threads` only changes wall time.
struct ParallelConfig {
  std::size_t shards = 16;
  std::size_t threads = 0;  // 0 = hardware concurrency
};

/// Runs fn(0) .. fn(count-1) on up to `threads` workers. fn must only touch
/// state owned by its index. The first exception thrown is rethrown.
template <class Fn>
void for_each_index(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Pairwise (cascade) summation in index order.
double pairwise_sum(std::span<const double> values);

/// Gamma(shape, 1) variates. Shape 1/2 (one degree of freedom) is Z^2 / 2.
/// Other shapes >= 1 use the Marsaglia-Tsang squeeze method with
/// polar-method normals; shape < 1 draws Gamma(shape + 1) and multiplies by
/// u^(1/shape). Changing this changes every seeded output.
class GammaSampler {
 public:
  explicit GammaSampler(double shape);

  double operator()(Philox4x32& rng);

  double shape() const noexcept { return shape_; }

 private:
  double normal(Philox4x32& rng);

  double shape_;
  double d_;
  double c_;
  double inv_shape_ = 0.0;
  bool boosted_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Draws U = sum_i lambda_i Q_i with Q_i = 2 Gamma(m_i / 2).
class WeightedChiSquareSampler {
 public:
  explicit WeightedChiSquareSampler(const WeightSpec<double>& spec);

  double operator()(Philox4x32& rng);

 private:
  std::vector<double> weights_;
  std::vector<GammaSampler> gammas_;
};

/// Stream id for (logical stream, shard). Stream 0 is the primary sample;
/// bootstrap replicate b uses stream b + 1.
constexpr std::uint64_t stream_id(std::uint64_t stream, std::size_t shard) noexcept {
  return (stream << 32) | static_cast<std::uint32_t>(shard);
}

/// n draws of U. Shard s produces the contiguous block
/// [s n / shards, (s+1) n / shards) from its own substream, so the output
/// depends on (spec, n, seed, shards, stream) and never on thread count.
std::vector<double> sample(const WeightSpec<double>& spec, std::size_t n, std::uint64_t seed,
                           const ParallelConfig& parallel = {}, std::uint64_t stream = 0);

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t shards = 0;

  bool within(double multiplier = 4.0) const { return std::abs(mean) <= multiplier * std_error; }
};

/// Mean and standard error of a sample, reduced pairwise in index order.
MCEstimate summarize(std::span<const double> values);

/// Monte Carlo estimate of E Tf(U - mu) (centered) or E Tf(U). Throws
/// NotIntegrable when f fails the integrability screen or the stricter
/// finite-variance screen.
MCEstimate mc_expect_operator(const WeightSpec<double>& spec, const TestFunction<double>& f,
                              Centering centering, std::size_t n, std::uint64_t seed,
                              const ParallelConfig& parallel = {});

}  // namespace steinchi
