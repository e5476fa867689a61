#pragma once

#include <variant>
#include <vector>

#include "airs/channel.hpp"

namespace airs {

/// Per-element amplification factors and phase shifts forming the diagonal
/// reflection matrix diag(alpha_m * exp(j*phi_m)).
struct ReflectionConfig {
  std::vector<double> alpha;
  std::vector<double> phi;  // radians in [0, 2*pi)
};

struct Passive {};
struct ActiveTotal {
  double budget_w = 0.0;  // shared amplification power budget
};
struct ActivePerElement {
  double per_element_w = 0.0;  // independent per-element budget
};
using PowerModel = std::variant<Passive, ActiveTotal, ActivePerElement>;

struct QuantizationSpec {
  int phase_bits = 1;   // 2^phase_bits uniform phase levels over [0, 2*pi)
  int amp_levels = 1;   // uniform amplitude levels over [0, alpha_max]
  double alpha_max = 1.0;
};

/// Received SNR of the reflected-plus-direct link:
///   P_t * |h^H Psi g + t|^2 / (sigmaI_sq * ||h^H Psi||^2 + sigma0_sq)
double received_snr(const ChannelRealization& ch, const ReflectionConfig& refl,
                    double tx_power, const NoisePowers& noise);

/// Shannon rate log2(1 + snr), bits/s/Hz.
double achievable_rate(double snr);

struct AmplifierPower {
  std::vector<double> per_element;  // q_m = alpha_m^2 (P_t |g_m|^2 + sigmaI_sq)
  double total = 0.0;
};
AmplifierPower amplifier_power(const ChannelRealization& ch,
                               const ReflectionConfig& refl, double tx_power,
                               double sigmaI_sq);

/// Unit amplitudes, phases aligned so every cascaded term (and the direct
/// link, when present) adds with a common phase at the receiver.
ReflectionConfig optimize_passive(const ChannelRealization& ch);

/// Aligned phases plus amplitude allocation maximizing received_snr subject
/// to the amplifier power constraint of the given active power model.
ReflectionConfig optimize_active(const ChannelRealization& ch,
                                 const PowerModel& pm, double tx_power,
                                 const NoisePowers& noise);

/// Rounds phases and (clamped) amplitudes to uniform hardware levels.
/// Rounding ties go to the lower level.
ReflectionConfig quantize_reflection(const ReflectionConfig& refl,
                                     const QuantizationSpec& spec);

}  // namespace airs
