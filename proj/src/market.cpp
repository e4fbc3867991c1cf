#include "fogpact/market.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "fogpact/error.hpp"

namespace fogpact {
namespace {

[[noreturn]] void reject(const std::string& what) {
  throw Error(ErrorKind::InvalidInstance, what);
}

void check_length(const MarketInstance& inst, std::span<const double> v, const char* name) {
  if (v.size() != inst.dimension()) {
    std::ostringstream msg;
    msg << name << " has length " << v.size() << ", instance dimension is " << inst.dimension();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

bool all_finite(std::span<const double> v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

MarketInstance MarketInstance::create(SymMatrix cost, SymMatrix noise, Vector beta, double eta,
                                      double w_bar, InstanceOptions options) {
  const std::size_t n = beta.size();
  if (n < 1 || n > kMaxDimension) reject("beta must have between 1 and 64 entries");
  if (cost.size() != n || noise.size() != n) {
    std::ostringstream msg;
    msg << "dimension mismatch: beta has " << n << " entries, C is " << cost.size() << "x"
        << cost.size() << ", Sigma is " << noise.size() << "x" << noise.size();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  if (!all_finite(beta)) reject("beta must be finite");
  if (!all_finite(cost.matrix().data())) reject("C must be finite");
  if (!all_finite(noise.matrix().data())) reject("Sigma must be finite");
  if (!(eta > 0.0) || !std::isfinite(eta)) reject("eta must be a finite value > 0");
  if (!std::isfinite(w_bar)) reject("w_bar must be finite");

  if (!options.allow_complementarity) {
    for (double v : cost.matrix().data()) {
      if (v < 0.0) {
        reject("C has a negative entry (technologically complementary resources are disabled; "
               "set allow_complementarity to permit them)");
      }
    }
  }
  if (!is_positive_definite(cost)) reject("C must be symmetric positive definite");
  for (std::size_t i = 0; i < n; ++i) {
    if (noise(i, i) < 0.0) reject("Sigma has a negative variance on its diagonal");
  }
  if (!validate_psd(noise, kTolPsd)) reject("Sigma must be positive semi-definite");

  MarketInstance inst;
  inst.cost_inverse_ = invert(cost);
  inst.cost_ = std::move(cost);
  inst.noise_ = std::move(noise);
  inst.beta_ = std::move(beta);
  inst.eta_ = eta;
  inst.w_bar_ = w_bar;
  inst.options_ = options;
  return inst;
}

MarketInstance MarketInstance::with_cost(SymMatrix cost) const {
  return create(std::move(cost), noise_, beta_, eta_, w_bar_, options_);
}

MarketInstance MarketInstance::with_noise(SymMatrix noise) const {
  return create(cost_, std::move(noise), beta_, eta_, w_bar_, options_);
}

MarketInstance MarketInstance::with_beta(Vector beta) const {
  return create(cost_, noise_, std::move(beta), eta_, w_bar_, options_);
}

MarketInstance MarketInstance::with_eta(double eta) const {
  return create(cost_, noise_, beta_, eta, w_bar_, options_);
}

MarketInstance MarketInstance::with_w_bar(double w_bar) const {
  return create(cost_, noise_, beta_, eta_, w_bar, options_);
}

std::uint64_t MarketInstance::digest() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  auto mix_double = [&](double v) { mix(std::bit_cast<std::uint64_t>(v == 0.0 ? 0.0 : v)); };
  mix(dimension());
  for (double v : cost_.matrix().data()) mix_double(v);
  for (double v : noise_.matrix().data()) mix_double(v);
  for (double v : beta_) mix_double(v);
  mix_double(eta_);
  mix_double(w_bar_);
  mix(options_.allow_complementarity ? 1 : 0);
  return h;
}

double operation_cost(const MarketInstance& inst, const EffortVector& effort) {
  check_length(inst, effort.a, "effort");
  return 0.5 * quadratic_form(inst.cost(), effort.a);
}

double payment_variance(const MarketInstance& inst, std::span<const double> s) {
  check_length(inst, s, "s");
  return quadratic_form(inst.noise(), s);
}

double fn_certainty_equivalent(const MarketInstance& inst, const Contract& k,
                               const EffortVector& effort) {
  check_length(inst, k.s, "s");
  check_length(inst, effort.a, "effort");
  return k.t + dot(k.s, effort.a) - operation_cost(inst, effort) -
         0.5 * inst.eta() * payment_variance(inst, k.s);
}

double fn_exponential_utility(const MarketInstance& inst, double w_realized,
                              const EffortVector& effort) {
  const double exponent = -inst.eta() * (w_realized - operation_cost(inst, effort));
  if (!(exponent <= kMaxExponent)) {
    std::ostringstream msg;
    msg << "CARA exponent " << exponent << " exceeds " << kMaxExponent;
    throw Error(ErrorKind::Overflow, msg.str());
  }
  return -std::exp(exponent);
}

double no_certainty_equivalent(const MarketInstance& inst, const Contract& k,
                               const EffortVector& effort) {
  check_length(inst, k.s, "s");
  check_length(inst, effort.a, "effort");
  return dot(inst.beta(), effort.a) - dot(k.s, effort.a) - k.t;
}

double social_welfare(const MarketInstance& inst, const Contract& k, const EffortVector& effort) {
  check_length(inst, k.s, "s");
  check_length(inst, effort.a, "effort");
  return dot(inst.beta(), effort.a) - operation_cost(inst, effort) -
         0.5 * inst.eta() * payment_variance(inst, k.s);
}

EffortVector fn_best_response(const MarketInstance& inst, const Contract& k) {
  check_length(inst, k.s, "s");
  return EffortVector{multiply(inst.cost_inverse(), k.s)};
}

}  // namespace fogpact
