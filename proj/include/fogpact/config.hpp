#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fogpact/experiments.hpp"
#include "fogpact/monte_carlo.hpp"

namespace fogpact {

/// Parsed configuration file.
///
///   [instance]             required
///   c      = [[1, 0.2], [0.2, 1]]   full rows, or lower triangle [[1], [0.2, 1]]
///   sigma  = [[1], [0.5, 1]]
///   beta   = [1, 1]
///   eta    = 1
///   w_bar  = 0
///   n      = 2                      optional cross-check
///   allow_complementarity = false   optional
///
///   [solve]                optional
///   plan = general
///
///   [sweep]                optional
///   parameter = eta | c_ii | sigma_ii | beta_i
///   index  = 0                      for c_ii, sigma_ii, beta_i
///   values = [0.5, 1, 2]
///   plans  = [general, opening-reward]   default: all six
///   mode   = own | true
///
///   [sim]                  optional
///   samples = 1000000
///   seed = 42
///   antithetic = false
///   plan = general
///
/// '#' starts a comment. A bracketed value may continue over several lines.
struct ConfigDocument {
  MarketInstance instance;
  std::optional<PlanKind> plan;
  std::optional<SweepSpec> sweep;
  std::optional<SimConfig> sim;
  std::optional<PlanKind> sim_plan;
};

/// `origin` prefixes diagnostics ("<origin>:<line>: ..."). Throws ConfigError.
ConfigDocument parse_config(std::string_view text, const std::string& origin);
/// Throws IoError or ConfigError.
ConfigDocument load_config(const std::string& path);

}  // namespace fogpact
