#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fogpact/market.hpp"

namespace fogpact {

struct SimConfig {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  /// Pair every draw z with -z. Doubles samples_used.
  bool antithetic = false;
  /// Worker threads; 0 means hardware concurrency capped by FOGPACT_THREADS.
  unsigned threads = 0;
};

struct SimResult {
  double mean_fn_utility = 0.0;
  double stderr_fn_utility = 0.0;
  double mean_payment = 0.0;
  double stderr_payment = 0.0;
  Vector mean_qos;
  std::uint64_t samples_used = 0;
};

/// SplitMix64 keyed by (seed, stream index): stream k of a given seed is the
/// same sequence no matter which thread draws it or in what order.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  /// Uniform on (0, 1].
  double next_uniform();
  /// Standard normal (Box-Muller; the second value of each pair is cached).
  double next_normal();

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Draws q = a + L z with L L^T = Sigma.
class QosSampler {
 public:
  QosSampler(const MarketInstance& inst, EffortVector effort, SimConfig config);

  /// Number of draws, 2*samples when antithetic.
  std::uint64_t count() const noexcept;
  std::size_t dimension() const noexcept { return effort_.a.size(); }
  /// Draw number k; antithetic draws 2m and 2m+1 share one z with opposite sign.
  void draw(std::uint64_t k, std::span<double> out) const;

 private:
  EffortVector effort_;
  Matrix factor_;
  SimConfig config_;
};

/// Materializes all draws. Throws NotPsd when Sigma cannot be factored.
std::vector<Vector> sample_qos(const MarketInstance& inst, const EffortVector& effort,
                               const SimConfig& config);

/// Empirical E[-exp(-eta (w - psi(a)))] and E[w] for w = t + s^T q.
/// Throws Overflow if any sampled exponent exceeds kMaxExponent. The result is
/// bit-identical for every thread count.
SimResult estimate_fn_utility(const MarketInstance& inst, const Contract& contract,
                              const EffortVector& effort, const SimConfig& config);

/// Thread count honoring FOGPACT_THREADS.
unsigned resolve_threads(unsigned requested);

}  // namespace fogpact
