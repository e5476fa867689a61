#include "airs/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace airs {

namespace {

bool finite(const Position3D& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

bool same(const Position3D& a, const Position3D& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}

}  // namespace

double distance(const Position3D& a, const Position3D& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

double path_gain(double d, const PathLossModel& model) {
  if (!(d > 0.0)) {
    throw std::domain_error("path_gain: distance must be positive");
  }
  if (!(model.beta0 > 0.0) || !(model.kappa > 0.0)) {
    throw std::domain_error("path_gain: beta0 and kappa must be positive");
  }
  return model.beta0 / std::pow(d, model.kappa);
}

void validate(const Scenario& sc) {
  if (!finite(sc.bs_pos) || !finite(sc.user_pos) || !finite(sc.irs_pos)) {
    throw std::domain_error("scenario: positions must be finite");
  }
  if (sc.num_elements < 1) {
    throw std::domain_error("scenario: num_elements must be >= 1");
  }
  if (!(sc.transmit_power > 0.0)) {
    throw std::domain_error("scenario: transmit_power must be positive");
  }
  if (!(sc.wavelength > 0.0)) {
    throw std::domain_error("scenario: wavelength must be positive");
  }
  if (same(sc.bs_pos, sc.irs_pos)) {
    throw std::domain_error("scenario: bs_pos coincides with irs_pos");
  }
  if (same(sc.irs_pos, sc.user_pos)) {
    throw std::domain_error("scenario: irs_pos coincides with user_pos");
  }
  if (!(sc.path_loss.beta0 > 0.0) || !(sc.path_loss.kappa > 0.0)) {
    throw std::domain_error("scenario: path loss parameters must be positive");
  }
  if (sc.noise.sigma0_sq < 0.0 || sc.noise.sigmaI_sq < 0.0) {
    throw std::domain_error("scenario: noise powers must be non-negative");
  }
}

ChannelRealization synthesize_los(const Scenario& sc) {
  validate(sc);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const int m_count = sc.num_elements;

  const double d_bs = distance(sc.bs_pos, sc.irs_pos);
  const double d_user = distance(sc.irs_pos, sc.user_pos);
  const double amp_g = std::sqrt(path_gain(d_bs, sc.path_loss));
  const double amp_h = std::sqrt(path_gain(d_user, sc.path_loss));

  // x-components of the unit vectors from the IRS toward each endpoint;
  // elements are laid out along the x-axis.
  const double ux_bs = (sc.bs_pos.x - sc.irs_pos.x) / d_bs;
  const double ux_user = (sc.user_pos.x - sc.irs_pos.x) / d_user;
  const double spacing = sc.wavelength / 2.0;

  ChannelRealization ch;
  ch.g.resize(m_count);
  ch.h.resize(m_count);
  for (int m = 0; m < m_count; ++m) {
    const double offset = (m - 0.5 * (m_count - 1)) * spacing;
    const double dg = d_bs - offset * ux_bs;
    const double dh = d_user - offset * ux_user;
    ch.g[m] = std::polar(amp_g, -two_pi * dg / sc.wavelength);
    ch.h[m] = std::polar(amp_h, -two_pi * dh / sc.wavelength);
  }

  if (sc.direct_link_blocked) {
    ch.t = {0.0, 0.0};
  } else {
    const double d0 = distance(sc.bs_pos, sc.user_pos);
    if (!(d0 > 0.0)) {
      throw std::domain_error("scenario: bs_pos coincides with user_pos");
    }
    ch.t = std::polar(std::sqrt(path_gain(d0, sc.path_loss)),
                      -two_pi * d0 / sc.wavelength);
  }
  return ch;
}

}  // namespace airs
