#pragma once

namespace airs {

enum class RelayMode { HalfDuplex, FullDuplexIdeal };

struct RelayConfig {
  double relay_power = 0.0;     // amplification (transmit) power, W
  double relay_noise_sq = 0.0;  // noise power at the relay input, W
  RelayMode mode = RelayMode::HalfDuplex;
};

/// Variable-gain amplify-and-forward end-to-end SNR:
///   gamma1*gamma2 / (gamma1 + gamma2 + 1)
/// with gamma1 = P_t*gain1/relay_noise_sq and gamma2 = P_r*gain2/sigma0_sq.
double af_end_to_end_snr(double gain1, double gain2, double tx_power,
                         const RelayConfig& cfg, double sigma0_sq);

/// Half duplex pays the equal-slot pre-log 1/2; ideal full duplex does not.
double relay_rate(double snr, RelayMode mode);

}  // namespace airs
