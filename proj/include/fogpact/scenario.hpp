#pragma once

#include "fogpact/market.hpp"

namespace fogpact {

/// Raw description of what a fog node puts into one task.
struct ResourceProfile {
  double bandwidth_hz = 1e6;
  double cpu_cycles_per_s = 1e9;
  double distance_m = 1.0;
  double data_bits = 1e6;
  double tx_power_w = 1.0;
  double noise_density_w_per_hz = 1e-6;
  double cycles_per_bit = 1000.0;
  double pathloss_exponent = 2.0;
};

/// Throws InvalidProfile when a field is non-finite or out of range.
void validate_profile(const ResourceProfile& p);

/// Maps a profile onto two effort dimensions, both in 1/latency (1/s):
///
///   transmission = B log2(1 + P d^-alpha / (N0 B)) / D
///   processing   = f / (cycles_per_bit * D)
///
/// Shannon rate over a path-loss channel and a linear cycles-per-bit compute
/// model. These are illustrative stand-ins; calibrating C and Sigma from
/// profiles is left to the caller. Distances below 1 m are clamped to 1 m.
EffortVector profile_to_effort(const ResourceProfile& p);

}  // namespace fogpact
