#include "fogpact/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fogpact/error.hpp"

namespace fogpact {
namespace {

void require(bool ok, const char* field, const char* rule) {
  if (!ok) throw Error(ErrorKind::InvalidProfile, std::string(field) + " must be " + rule);
}

}  // namespace

void validate_profile(const ResourceProfile& p) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  require(positive(p.bandwidth_hz), "bandwidth_hz", "finite and > 0");
  require(positive(p.cpu_cycles_per_s), "cpu_cycles_per_s", "finite and > 0");
  require(std::isfinite(p.distance_m) && p.distance_m >= 0.0, "distance_m", "finite and >= 0");
  require(positive(p.data_bits), "data_bits", "finite and > 0");
  require(positive(p.tx_power_w), "tx_power_w", "finite and > 0");
  require(positive(p.noise_density_w_per_hz), "noise_density_w_per_hz", "finite and > 0");
  require(positive(p.cycles_per_bit), "cycles_per_bit", "finite and > 0");
  require(std::isfinite(p.pathloss_exponent) && p.pathloss_exponent >= 2.0, "pathloss_exponent",
          "finite and >= 2");
}

EffortVector profile_to_effort(const ResourceProfile& p) {
  validate_profile(p);
  const double distance = std::max(p.distance_m, 1.0);
  const double received = p.tx_power_w * std::pow(distance, -p.pathloss_exponent);
  const double snr = received / (p.noise_density_w_per_hz * p.bandwidth_hz);
  const double rate_bps = p.bandwidth_hz * std::log1p(snr) / std::numbers::ln2;
  const double transmission = rate_bps / p.data_bits;
  const double processing = p.cpu_cycles_per_s / (p.cycles_per_bit * p.data_bits);
  return EffortVector{{transmission, processing}};
}

}  // namespace fogpact
