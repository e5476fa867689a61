#include "airs/relay.hpp"

#include <cmath>
#include <stdexcept>

namespace airs {

double af_end_to_end_snr(double gain1, double gain2, double tx_power,
                         const RelayConfig& cfg, double sigma0_sq) {
  if (!(gain1 > 0.0) || !(gain2 > 0.0)) {
    throw std::domain_error("af_end_to_end_snr: hop gains must be positive");
  }
  if (!(tx_power > 0.0) || !(cfg.relay_power > 0.0)) {
    throw std::domain_error("af_end_to_end_snr: powers must be positive");
  }
  if (!(cfg.relay_noise_sq > 0.0) || !(sigma0_sq > 0.0)) {
    throw std::domain_error("af_end_to_end_snr: noise powers must be positive");
  }
  const double gamma1 = tx_power * gain1 / cfg.relay_noise_sq;
  const double gamma2 = cfg.relay_power * gain2 / sigma0_sq;
  return gamma1 * gamma2 / (gamma1 + gamma2 + 1.0);
}

double relay_rate(double snr, RelayMode mode) {
  if (snr < 0.0 || !std::isfinite(snr)) {
    throw std::domain_error("relay_rate: snr must be non-negative");
  }
  const double full = std::log2(1.0 + snr);
  return mode == RelayMode::HalfDuplex ? 0.5 * full : full;
}

}  // namespace airs
