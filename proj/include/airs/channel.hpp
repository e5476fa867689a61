#pragma once

#include <complex>
#include <vector>

namespace airs {

struct Position3D {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

double distance(const Position3D& a, const Position3D& b);

/// Power-law path loss: gain(d) = beta0 / d^kappa, beta0 referenced at 1 m.
struct PathLossModel {
  double beta0 = 1e-3;
  double kappa = 2.0;
};

struct NoisePowers {
  double sigma0_sq = 0.0;  // receiver noise, W
  double sigmaI_sq = 0.0;  // per-element amplification noise, W
};

struct Scenario {
  Position3D bs_pos;
  Position3D user_pos;
  Position3D irs_pos;
  int num_elements = 1;
  double wavelength = 0.1;  // m; affects only pre-alignment phases
  PathLossModel path_loss;
  double transmit_power = 0.0;  // W
  NoisePowers noise;
  bool direct_link_blocked = true;
};

/// Throws std::domain_error if any Scenario invariant is violated.
void validate(const Scenario& sc);

/// Per-element baseband channels. g: BS->IRS, h: IRS->user, t: BS->user.
/// Entries carry amplitude units of sqrt(power gain).
struct ChannelRealization {
  std::vector<std::complex<double>> g;
  std::vector<std::complex<double>> h;
  std::complex<double> t{0.0, 0.0};
};

double path_gain(double d, const PathLossModel& model);

/// Deterministic LoS realization. All element magnitudes on a hop are equal
/// (far field); phases follow a half-wavelength uniform linear array along
/// the x-axis centered at irs_pos.
ChannelRealization synthesize_los(const Scenario& sc);

}  // namespace airs
