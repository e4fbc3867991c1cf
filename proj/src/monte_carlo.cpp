#include "fogpact/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

#include "fogpact/error.hpp"

namespace fogpact {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Units per reduction chunk; fixed so that the summation tree never depends
// on the thread count.
constexpr std::uint64_t kChunk = 4096;

struct Moments {
  double sum_u = 0.0, sum_u2 = 0.0;
  double sum_w = 0.0, sum_w2 = 0.0;
  Vector sum_q;
};

class Kahan {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = total_ + y;
    carry_ = (t - total_) - y;
    total_ = t;
  }
  double value() const { return total_; }

 private:
  double total_ = 0.0;
  double carry_ = 0.0;
};

double sample_stderr(double sum, double sum2, double units) {
  if (units < 2.0) return 0.0;
  const double var = std::max(0.0, (sum2 - sum * sum / units) / (units - 1.0));
  return std::sqrt(var / units);
}

}  // namespace

SampleStream::SampleStream(std::uint64_t seed, std::uint64_t index)
    : state_(mix64(seed ^ mix64(index * kGolden + 0x2545f4914f6cdd1dULL))) {}

std::uint64_t SampleStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double SampleStream::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double SampleStream::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double radius = std::sqrt(-2.0 * std::log(next_uniform()));
  const double angle = 2.0 * std::numbers::pi * next_uniform();
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

QosSampler::QosSampler(const MarketInstance& inst, EffortVector effort, SimConfig config)
    : effort_(std::move(effort)), factor_(sampling_factor(inst.noise())), config_(config) {
  if (effort_.a.size() != inst.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "effort length does not match instance dimension");
  }
}

std::uint64_t QosSampler::count() const noexcept {
  return config_.antithetic ? 2 * config_.samples : config_.samples;
}

void QosSampler::draw(std::uint64_t k, std::span<double> out) const {
  const std::size_t n = dimension();
  const std::uint64_t stream = config_.antithetic ? k / 2 : k;
  const double sign = (config_.antithetic && (k % 2 == 1)) ? -1.0 : 1.0;
  SampleStream rng(config_.seed, stream);
  double z[kMaxDimension];
  for (std::size_t j = 0; j < n; ++j) z[j] = sign * rng.next_normal();
  for (std::size_t i = 0; i < n; ++i) {
    double noise = 0.0;
    for (std::size_t j = 0; j < n; ++j) noise += factor_(i, j) * z[j];
    out[i] = effort_.a[i] + noise;
  }
}

std::vector<Vector> sample_qos(const MarketInstance& inst, const EffortVector& effort,
                               const SimConfig& config) {
  if (config.samples < 1) throw Error(ErrorKind::InvalidSpec, "samples must be >= 1");
  const QosSampler sampler(inst, effort, config);
  std::vector<Vector> out(sampler.count(), Vector(sampler.dimension()));
  for (std::uint64_t k = 0; k < sampler.count(); ++k) sampler.draw(k, out[k]);
  return out;
}

unsigned resolve_threads(unsigned requested) {
  unsigned threads = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("FOGPACT_THREADS"); cap && *cap) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(cap, &end, 10);
    if (end && *end == '\0' && v >= 1) threads = std::min(threads, static_cast<unsigned>(v));
  }
  return threads;
}

SimResult estimate_fn_utility(const MarketInstance& inst, const Contract& contract,
                              const EffortVector& effort, const SimConfig& config) {
  if (config.samples < 1) throw Error(ErrorKind::InvalidSpec, "samples must be >= 1");
  const std::size_t n = inst.dimension();
  if (contract.s.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "contract length does not match instance dimension");
  }
  const QosSampler sampler(inst, effort, config);
  const double cost = operation_cost(inst, effort);
  const double eta = inst.eta();

  // Accumulate deviations from the noise-free outcome. With Sigma = 0 every
  // deviation is exactly zero and the estimate reproduces the closed form.
  const double w_ref = contract.t + dot(contract.s, effort.a);
  const double u_ref = fn_exponential_utility(inst, w_ref, effort);

  const std::uint64_t per_unit = config.antithetic ? 2 : 1;
  const std::uint64_t units = config.samples;
  const std::uint64_t chunks = (units + kChunk - 1) / kChunk;
  std::vector<Moments> partial(chunks);
  std::vector<std::exception_ptr> failures(chunks);

  auto run_chunk = [&](std::uint64_t c) {
    Moments m;
    m.sum_q.assign(n, 0.0);
    Vector q(n);
    const std::uint64_t begin = c * kChunk;
    const std::uint64_t end = std::min(units, begin + kChunk);
    for (std::uint64_t unit = begin; unit < end; ++unit) {
      double du = 0.0, dw = 0.0;
      for (std::uint64_t r = 0; r < per_unit; ++r) {
        sampler.draw(unit * per_unit + r, q);
        const double w = contract.t + dot(contract.s, q);
        const double exponent = -eta * (w - cost);
        if (!(exponent <= kMaxExponent)) {
          std::ostringstream msg;
          msg << "sampled CARA exponent " << exponent << " exceeds " << kMaxExponent
              << " (draw " << unit * per_unit + r << ")";
          throw Error(ErrorKind::Overflow, msg.str());
        }
        du += -std::exp(exponent) - u_ref;
        dw += w - w_ref;
        for (std::size_t i = 0; i < n; ++i) m.sum_q[i] += q[i] - effort.a[i];
      }
      du /= static_cast<double>(per_unit);
      dw /= static_cast<double>(per_unit);
      m.sum_u += du;
      m.sum_u2 += du * du;
      m.sum_w += dw;
      m.sum_w2 += dw * dw;
    }
    partial[c] = std::move(m);
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(config.threads), chunks));
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t c = next++; c < chunks; c = next++) {
      try {
        run_chunk(c);
      } catch (...) {
        failures[c] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  Kahan su, su2, sw, sw2;
  std::vector<Kahan> sq(n);
  for (const Moments& m : partial) {
    su.add(m.sum_u);
    su2.add(m.sum_u2);
    sw.add(m.sum_w);
    sw2.add(m.sum_w2);
    for (std::size_t i = 0; i < n; ++i) sq[i].add(m.sum_q[i]);
  }

  const double count = static_cast<double>(units);
  SimResult r;
  r.samples_used = units * per_unit;
  r.mean_fn_utility = u_ref + su.value() / count;
  r.stderr_fn_utility = sample_stderr(su.value(), su2.value(), count);
  r.mean_payment = w_ref + sw.value() / count;
  r.stderr_payment = sample_stderr(sw.value(), sw2.value(), count);
  r.mean_qos.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.mean_qos[i] = effort.a[i] + sq[i].value() / static_cast<double>(r.samples_used);
  }
  return r;
}

}  // namespace fogpact
