#include "airs/oracle.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace airs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using cd = std::complex<double>;

struct GridBest {
  double snr = -1.0;
  std::size_t alpha_idx = 0;
  int phase_idx[3] = {0, 0, 0};
};

// Best grid phase for the last element given the partial sum of the others:
// |S + v e^{j phi_k}|^2 is maximized by the grid phase closest to
// arg(S) - arg(v); neighbors are checked to guard rounding.
int best_last_phase(const cd& partial, const cd& v, int grid) {
  if (v == cd{0.0, 0.0} || partial == cd{0.0, 0.0}) return 0;
  const double target = std::arg(partial) - std::arg(v);
  const long base = std::lround(target * double(grid) / kTwoPi);
  int best = 0;
  double best_val = -1.0;
  for (long k = base - 1; k <= base + 1; ++k) {
    long kk = k % grid;
    if (kk < 0) kk += grid;
    const double val = std::norm(partial + v * std::polar(1.0, kTwoPi * double(kk) / double(grid)));
    if (val > best_val) {
      best_val = val;
      best = int(kk);
    }
  }
  return best;
}

// Exhaustive maximum of |sum_m v_m e^{j phi_m} + t|^2 over the uniform phase
// grid. When t = 0 the grid is shift-invariant, so the first phase is pinned.
double best_numerator(const std::vector<cd>& v, const cd& t, int grid,
                      const std::vector<cd>& table, int phase_idx[3]) {
  const std::size_t m = v.size();
  const bool direct = (t != cd{0.0, 0.0});
  phase_idx[0] = phase_idx[1] = phase_idx[2] = 0;

  if (m == 1) {
    if (!direct) return std::norm(v[0]);
    phase_idx[0] = best_last_phase(t, v[0], grid);
    return std::norm(t + v[0] * table[phase_idx[0]]);
  }

  if (m == 2) {
    if (!direct) {
      phase_idx[1] = best_last_phase(v[0], v[1], grid);
      return std::norm(v[0] + v[1] * table[phase_idx[1]]);
    }
    double best = -1.0;
    for (int k0 = 0; k0 < grid; ++k0) {
      const cd s = t + v[0] * table[k0];
      const int k1 = best_last_phase(s, v[1], grid);
      const double val = std::norm(s + v[1] * table[k1]);
      if (val > best) {
        best = val;
        phase_idx[0] = k0;
        phase_idx[1] = k1;
      }
    }
    return best;
  }

  double best = -1.0;
  if (!direct) {
    for (int k1 = 0; k1 < grid; ++k1) {
      const cd s = v[0] + v[1] * table[k1];
      const int k2 = best_last_phase(s, v[2], grid);
      const double val = std::norm(s + v[2] * table[k2]);
      if (val > best) {
        best = val;
        phase_idx[1] = k1;
        phase_idx[2] = k2;
      }
    }
    return best;
  }
  for (int k0 = 0; k0 < grid; ++k0) {
    const cd s0 = t + v[0] * table[k0];
    for (int k1 = 0; k1 < grid; ++k1) {
      const cd s = s0 + v[1] * table[k1];
      const int k2 = best_last_phase(s, v[2], grid);
      const double val = std::norm(s + v[2] * table[k2]);
      if (val > best) {
        best = val;
        phase_idx[0] = k0;
        phase_idx[1] = k1;
        phase_idx[2] = k2;
      }
    }
  }
  return best;
}

}  // namespace

ReflectionConfig brute_force_oracle(const ChannelRealization& ch,
                                    const PowerModel& pm, double tx_power,
                                    const NoisePowers& noise,
                                    int grid_points_per_dim) {
  const std::size_t m = ch.g.size();
  if (ch.h.size() != m) {
    throw std::invalid_argument("channel vectors g and h differ in length");
  }
  if (m > 3) {
    throw std::domain_error("brute_force_oracle: refused for M > 3");
  }
  if (m == 0 || grid_points_per_dim < 8) {
    throw std::invalid_argument("brute_force_oracle: need M >= 1 and grid >= 8");
  }
  if (!(tx_power > 0.0)) {
    throw std::domain_error("brute_force_oracle: transmit power must be positive");
  }
  const int grid = grid_points_per_dim;

  std::vector<double> c(m), amax(m);
  std::vector<std::vector<double>> alphas;
  if (std::holds_alternative<Passive>(pm)) {
    alphas.emplace_back(m, 1.0);
  } else {
    double total_budget = 0.0;
    double per_budget = 0.0;
    if (const auto* total = std::get_if<ActiveTotal>(&pm)) {
      if (!(total->budget_w > 0.0)) {
        throw std::domain_error("brute_force_oracle: total power budget must be positive");
      }
      total_budget = total->budget_w;
    } else {
      per_budget = std::get<ActivePerElement>(pm).per_element_w;
      if (!(per_budget > 0.0)) {
        throw std::domain_error("brute_force_oracle: per-element power must be positive");
      }
    }
    for (std::size_t i = 0; i < m; ++i) {
      c[i] = tx_power * std::norm(ch.g[i]) + noise.sigmaI_sq;
      if (!(c[i] > 0.0)) {
        throw std::domain_error("brute_force_oracle: degenerate power constraint");
      }
      const double cap = total_budget > 0.0 ? total_budget : per_budget;
      amax[i] = std::sqrt(cap / c[i]);
    }

    std::vector<int> idx(m, 0);
    std::vector<double> a(m);
    for (;;) {
      double used = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        a[i] = double(idx[i]) * amax[i] / double(grid - 1);
        used += a[i] * a[i] * c[i];
      }
      if (total_budget > 0.0) {
        if (used <= total_budget * (1.0 + 1e-12)) {
          alphas.push_back(a);
          if (used > 0.0) {
            auto boundary = a;
            const double s = std::sqrt(total_budget / used);
            for (double& v : boundary) v *= s;
            alphas.push_back(std::move(boundary));
          }
        }
      } else {
        alphas.push_back(a);
      }
      std::size_t d = 0;
      while (d < m && ++idx[d] == grid) idx[d++] = 0;
      if (d == m) break;
    }
  }

  std::vector<cd> table(grid);
  for (int k = 0; k < grid; ++k) {
    table[k] = std::polar(1.0, kTwoPi * double(k) / double(grid));
  }
  std::vector<cd> cascade(m);
  std::vector<double> h2(m);
  for (std::size_t i = 0; i < m; ++i) {
    cascade[i] = std::conj(ch.h[i]) * ch.g[i];
    h2[i] = std::norm(ch.h[i]);
  }

  auto scan = [&](std::size_t lo, std::size_t hi, GridBest& out) {
    std::vector<cd> v(m);
    int phase_idx[3];
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& a = alphas[i];
      double weighted = 0.0;
      for (std::size_t e = 0; e < m; ++e) {
        v[e] = a[e] * cascade[e];
        weighted += a[e] * a[e] * h2[e];
      }
      const double den = noise.sigmaI_sq * weighted + noise.sigma0_sq;
      if (!(den > 0.0)) continue;
      const double num = best_numerator(v, ch.t, grid, table, phase_idx);
      const double snr = tx_power * num / den;
      if (snr > out.snr) {
        out.snr = snr;
        out.alpha_idx = i;
        for (std::size_t e = 0; e < m; ++e) out.phase_idx[e] = phase_idx[e];
      }
    }
  };

  GridBest best;
  const unsigned workers =
      std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()), 8u);
  if (alphas.size() < 2048 || workers == 1) {
    scan(0, alphas.size(), best);
  } else {
    std::vector<GridBest> partial(workers);
    std::vector<std::thread> threads;
    const std::size_t chunk = (alphas.size() + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(alphas.size(), lo + chunk);
      if (lo >= hi) break;
      threads.emplace_back([&, lo, hi, w] { scan(lo, hi, partial[w]); });
    }
    for (auto& th : threads) th.join();
    for (const auto& p : partial) {
      if (p.snr > best.snr ||
          (p.snr == best.snr && p.alpha_idx < best.alpha_idx)) {
        best = p;
      }
    }
  }

  if (best.snr < 0.0) {
    throw std::domain_error("brute_force_oracle: noise denominator is zero");
  }
  ReflectionConfig refl;
  refl.alpha = alphas[best.alpha_idx];
  refl.phi.resize(m);
  for (std::size_t e = 0; e < m; ++e) {
    refl.phi[e] = kTwoPi * double(best.phase_idx[e]) / double(grid);
  }
  return refl;
}

}  // namespace airs
