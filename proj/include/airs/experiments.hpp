#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "airs/channel.hpp"
#include "airs/reflection.hpp"
#include "airs/relay.hpp"

namespace airs {

struct ActiveIrsSystem {
  PowerModel power;
};
struct PassiveIrsSystem {};
struct RelaySystem {
  RelayConfig config;
};

struct SystemDescriptor {
  std::string id;
  std::variant<ActiveIrsSystem, PassiveIrsSystem, RelaySystem> kind;
};

struct DistanceSweep {
  double from = 0.0;
  double to = 0.0;
  double step = 0.0;
};
struct ElementSweep {
  std::vector<int> values;
};

struct SweepSpec {
  std::variant<DistanceSweep, ElementSweep> variable;
  std::vector<SystemDescriptor> systems;
};

struct SweepRow {
  double sweep_value = 0.0;
  std::string system;
  double snr = 0.0;   // linear
  double rate = 0.0;  // bits/s/Hz
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Optimized single-point evaluation of one system on one scenario. Passive
/// IRS is evaluated without amplification noise; relays sit at the scenario's
/// IRS position.
SweepRow evaluate_system(const Scenario& sc, const SystemDescriptor& sys,
                         double sweep_value);

/// Rate-versus-distance sweep. For each distance D the user is placed D
/// meters from the BS along x (keeping its configured altitude) and the
/// IRS/relay at the midpoint (keeping its configured altitude).
SweepResult run_rate_vs_distance(const SweepSpec& spec, const Scenario& base);

/// SNR-versus-element-count sweep at fixed geometry.
SweepResult run_snr_vs_elements(const SweepSpec& spec, const Scenario& base);

/// Least-squares slope of log(SNR) against log(M) over the largest
/// ceil(tail_fraction * n) points.
double estimate_scaling_slope(const std::vector<std::pair<double, double>>& points,
                              double tail_fraction);

struct PlacementResult {
  Position3D position;
  double snr = 0.0;
};

/// Grid search of the optimized SNR along a deployment segment (altitude
/// pinned to base.irs_pos.z). Ties break toward the transmitter end.
PlacementResult optimize_placement(const Scenario& base, Position3D seg_from,
                                   Position3D seg_to, double resolution,
                                   const SystemDescriptor& system);

}  // namespace airs
