#include "airs/reflection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace airs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

void check_dims(const ChannelRealization& ch, const ReflectionConfig& refl) {
  const std::size_t m = ch.g.size();
  if (ch.h.size() != m) {
    throw std::invalid_argument("channel vectors g and h differ in length");
  }
  if (refl.alpha.size() != m || refl.phi.size() != m) {
    throw std::invalid_argument("reflection config does not match element count");
  }
  for (double a : refl.alpha) {
    if (a < 0.0 || !std::isfinite(a)) {
      throw std::invalid_argument("amplification factors must be non-negative");
    }
  }
}

// Aligned phases: rotate each cascaded term conj(h_m) g_m onto the phase of
// the direct link (phase 0 when t = 0).
std::vector<double> aligned_phases(const ChannelRealization& ch) {
  const double target = (ch.t == std::complex<double>{0.0, 0.0})
                            ? 0.0
                            : std::arg(ch.t);
  std::vector<double> phi(ch.g.size());
  for (std::size_t m = 0; m < ch.g.size(); ++m) {
    const std::complex<double> cascade = std::conj(ch.h[m]) * ch.g[m];
    const double base = (cascade == std::complex<double>{0.0, 0.0})
                            ? 0.0
                            : std::arg(cascade);
    phi[m] = wrap_phase(target - base);
  }
  return phi;
}

// Amplitude subproblem in whitened coordinates u_m = sqrt(c_m) alpha_m with
// c_m = P_t |g_m|^2 + sigmaI_sq, so the power constraint is a ball (total
// budget) or a box (per-element budget).
struct AmplitudeProblem {
  std::vector<double> a;   // a_m / sqrt(c_m), a_m = |h_m||g_m|
  std::vector<double> h2;  // |h_m|^2 / c_m
  double t_mag = 0.0;
  double tx_power = 0.0;
  double sigmaI_sq = 0.0;
  double sigma0_sq = 0.0;
  bool box = false;
  double u_lim = 0.0;   // per-coordinate cap (box)
  double budget = 0.0;  // squared-norm cap (ball)

  std::size_t size() const { return a.size(); }

  double snr(const std::vector<double>& u) const {
    double s = t_mag;
    double d = sigma0_sq;
    for (std::size_t m = 0; m < u.size(); ++m) {
      s += u[m] * a[m];
      d += sigmaI_sq * u[m] * u[m] * h2[m];
    }
    return tx_power * s * s / d;
  }

  void project(std::vector<double>& u) const {
    if (box) {
      for (double& v : u) v = std::clamp(v, 0.0, u_lim);
      return;
    }
    double n2 = 0.0;
    for (double& v : u) {
      if (v < 0.0) v = 0.0;
      n2 += v * v;
    }
    if (n2 > budget && n2 > 0.0) {
      const double s = std::sqrt(budget / n2);
      for (double& v : u) v *= s;
    }
  }
};

// Maximize N(u) - lambda * D(u) over the feasible set by projected gradient
// ascent with backtracking, where N/D are the SNR numerator/denominator.
void pga_subproblem(const AmplitudeProblem& pb, double lambda,
                    std::vector<double>& u) {
  const std::size_t n = pb.size();
  std::vector<double> grad(n), trial(n);

  auto objective = [&](const std::vector<double>& v) {
    double s = pb.t_mag;
    double d = pb.sigma0_sq;
    for (std::size_t m = 0; m < n; ++m) {
      s += v[m] * pb.a[m];
      d += pb.sigmaI_sq * v[m] * v[m] * pb.h2[m];
    }
    return pb.tx_power * s * s - lambda * d;
  };

  double f = objective(u);
  double step = 0.0;
  for (int it = 0; it < 500; ++it) {
    double s = pb.t_mag;
    for (std::size_t m = 0; m < n; ++m) s += u[m] * pb.a[m];
    double gnorm2 = 0.0;
    double unorm2 = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      grad[m] = 2.0 * pb.tx_power * s * pb.a[m] -
                2.0 * lambda * pb.sigmaI_sq * pb.h2[m] * u[m];
      gnorm2 += grad[m] * grad[m];
      unorm2 += u[m] * u[m];
    }
    if (gnorm2 == 0.0) break;

    const double scale = pb.box ? pb.u_lim * std::sqrt(double(n))
                                : std::sqrt(pb.budget);
    if (it == 0) step = (std::sqrt(unorm2) + scale) / std::sqrt(gnorm2);
    step *= 2.0;

    bool improved = false;
    for (int half = 0; half < 60; ++half) {
      for (std::size_t m = 0; m < n; ++m) trial[m] = u[m] + step * grad[m];
      pb.project(trial);
      const double ft = objective(trial);
      if (ft > f) {
        u = trial;
        f = ft;
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) break;
  }
}

// Dinkelbach outer loop on the SNR ratio from one starting point.
std::vector<double> dinkelbach(const AmplitudeProblem& pb,
                               std::vector<double> u) {
  pb.project(u);
  double lambda = pb.snr(u);
  for (int outer = 0; outer < 200; ++outer) {
    pga_subproblem(pb, lambda, u);
    const double next = pb.snr(u);
    if (next - lambda <= 1e-10 * std::max(lambda, 1e-300)) break;
    lambda = next;
  }
  return u;
}

std::vector<double> solve_amplitudes(const AmplitudeProblem& pb) {
  const std::size_t n = pb.size();
  std::vector<std::vector<double>> starts;

  if (pb.box) {
    starts.emplace_back(n, pb.u_lim);  // per-element maximum
    std::vector<double> matched(n, 0.0);
    const double floor_w = pb.sigma0_sq / std::max(n * pb.u_lim * pb.u_lim, 1e-300);
    double peak = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      matched[m] = pb.a[m] / (pb.sigmaI_sq * pb.h2[m] + floor_w);
      peak = std::max(peak, matched[m]);
    }
    if (peak > 0.0) {
      for (double& v : matched) v *= pb.u_lim / peak;
      starts.push_back(std::move(matched));
    }
  } else {
    const double r = std::sqrt(pb.budget);
    // Uniform alpha direction: u proportional to sqrt(c_m), i.e. a_m/atil_m;
    // with equal element gains this is already the optimum.
    std::vector<double> uniform(n, r / std::sqrt(double(n)));
    starts.push_back(std::move(uniform));
    // Matched direction: stationary point of the ratio on the boundary.
    std::vector<double> matched(n, 0.0);
    double n2 = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      matched[m] = pb.a[m] /
                   (pb.sigmaI_sq * pb.h2[m] + pb.sigma0_sq / pb.budget);
      n2 += matched[m] * matched[m];
    }
    if (n2 > 0.0) {
      const double s = r / std::sqrt(n2);
      for (double& v : matched) v *= s;
      starts.push_back(std::move(matched));
    }
  }
  if (n <= 4) {
    for (std::size_t m = 0; m < n; ++m) {
      std::vector<double> e(n, 0.0);
      e[m] = pb.box ? pb.u_lim : std::sqrt(pb.budget);
      starts.push_back(std::move(e));
    }
  }

  std::vector<double> best(n, 0.0);
  double best_snr = pb.snr(best);  // alpha = 0 is always a candidate
  for (auto& s : starts) {
    auto u = dinkelbach(pb, std::move(s));
    const double v = pb.snr(u);
    if (v > best_snr) {
      best_snr = v;
      best = std::move(u);
    }
  }

  // With no direct link the SNR is non-decreasing along rays, so the total
  // power constraint binds at the optimum.
  if (!pb.box && pb.t_mag == 0.0) {
    double n2 = 0.0;
    for (double v : best) n2 += v * v;
    if (n2 > 0.0) {
      const double s = std::sqrt(pb.budget / n2);
      for (double& v : best) v *= s;
    }
  }
  return best;
}

}  // namespace

double received_snr(const ChannelRealization& ch, const ReflectionConfig& refl,
                    double tx_power, const NoisePowers& noise) {
  check_dims(ch, refl);
  if (!(tx_power > 0.0)) {
    throw std::domain_error("received_snr: transmit power must be positive");
  }
  std::complex<double> sum = ch.t;
  double weighted = 0.0;
  for (std::size_t m = 0; m < ch.g.size(); ++m) {
    sum += std::conj(ch.h[m]) * std::polar(refl.alpha[m], refl.phi[m]) * ch.g[m];
    weighted += refl.alpha[m] * refl.alpha[m] * std::norm(ch.h[m]);
  }
  const double den = noise.sigmaI_sq * weighted + noise.sigma0_sq;
  if (!(den > 0.0)) {
    throw std::domain_error("received_snr: noise denominator is zero");
  }
  return tx_power * std::norm(sum) / den;
}

double achievable_rate(double snr) {
  if (snr < 0.0 || !std::isfinite(snr)) {
    throw std::domain_error("achievable_rate: snr must be non-negative");
  }
  return std::log2(1.0 + snr);
}

AmplifierPower amplifier_power(const ChannelRealization& ch,
                               const ReflectionConfig& refl, double tx_power,
                               double sigmaI_sq) {
  check_dims(ch, refl);
  AmplifierPower out;
  out.per_element.resize(ch.g.size());
  for (std::size_t m = 0; m < ch.g.size(); ++m) {
    const double q = refl.alpha[m] * refl.alpha[m] *
                     (tx_power * std::norm(ch.g[m]) + sigmaI_sq);
    out.per_element[m] = q;
    out.total += q;
  }
  return out;
}

ReflectionConfig optimize_passive(const ChannelRealization& ch) {
  if (ch.h.size() != ch.g.size()) {
    throw std::invalid_argument("channel vectors g and h differ in length");
  }
  ReflectionConfig refl;
  refl.alpha.assign(ch.g.size(), 1.0);
  refl.phi = aligned_phases(ch);
  return refl;
}

ReflectionConfig optimize_active(const ChannelRealization& ch,
                                 const PowerModel& pm, double tx_power,
                                 const NoisePowers& noise) {
  if (ch.h.size() != ch.g.size()) {
    throw std::invalid_argument("channel vectors g and h differ in length");
  }
  if (std::holds_alternative<Passive>(pm)) {
    throw std::domain_error("optimize_active: power model must be active");
  }

  const std::size_t n = ch.g.size();
  AmplitudeProblem pb;
  pb.t_mag = std::abs(ch.t);
  pb.tx_power = tx_power;
  pb.sigmaI_sq = noise.sigmaI_sq;
  pb.sigma0_sq = noise.sigma0_sq;
  pb.a.resize(n);
  pb.h2.resize(n);
  std::vector<double> c(n);
  for (std::size_t m = 0; m < n; ++m) {
    c[m] = tx_power * std::norm(ch.g[m]) + noise.sigmaI_sq;
    const double am = std::abs(ch.h[m]) * std::abs(ch.g[m]);
    pb.a[m] = am / std::sqrt(c[m]);
    pb.h2[m] = std::norm(ch.h[m]) / c[m];
  }

  if (const auto* total = std::get_if<ActiveTotal>(&pm)) {
    if (!(total->budget_w > 0.0)) {
      throw std::domain_error("optimize_active: total power budget must be positive");
    }
    pb.box = false;
    pb.budget = total->budget_w;
  } else {
    const auto& per = std::get<ActivePerElement>(pm);
    if (!(per.per_element_w > 0.0)) {
      throw std::domain_error("optimize_active: per-element power must be positive");
    }
    pb.box = true;
    pb.u_lim = std::sqrt(per.per_element_w);
  }

  const std::vector<double> u = solve_amplitudes(pb);
  ReflectionConfig refl;
  refl.phi = aligned_phases(ch);
  refl.alpha.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    refl.alpha[m] = u[m] / std::sqrt(c[m]);
  }
  return refl;
}

ReflectionConfig quantize_reflection(const ReflectionConfig& refl,
                                     const QuantizationSpec& spec) {
  if (spec.phase_bits < 1 || spec.amp_levels < 1 || !(spec.alpha_max > 0.0)) {
    throw std::invalid_argument("quantize_reflection: invalid quantization spec");
  }
  // Round half-down for cross-platform determinism.
  auto round_half_down = [](double x) {
    const double f = std::floor(x);
    return (x - f > 0.5) ? f + 1.0 : f;
  };

  const long phase_levels = 1L << spec.phase_bits;
  const double phase_step = kTwoPi / double(phase_levels);

  ReflectionConfig out;
  out.alpha.resize(refl.alpha.size());
  out.phi.resize(refl.phi.size());
  for (std::size_t m = 0; m < refl.phi.size(); ++m) {
    long k = long(round_half_down(wrap_phase(refl.phi[m]) / phase_step));
    k %= phase_levels;
    out.phi[m] = double(k) * phase_step;
  }
  for (std::size_t m = 0; m < refl.alpha.size(); ++m) {
    const double clamped = std::clamp(refl.alpha[m], 0.0, spec.alpha_max);
    if (spec.amp_levels == 1) {
      out.alpha[m] = 0.0;
    } else {
      const double amp_step = spec.alpha_max / double(spec.amp_levels - 1);
      out.alpha[m] = round_half_down(clamped / amp_step) * amp_step;
    }
  }
  return out;
}

}  // namespace airs
