#include "airs/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airs {

namespace {

struct Evaluator {
  const Scenario& sc;
  double sweep_value;

  SweepRow operator()(const ActiveIrsSystem& sys) const {
    const ChannelRealization ch = synthesize_los(sc);
    const ReflectionConfig refl =
        optimize_active(ch, sys.power, sc.transmit_power, sc.noise);
    const double snr = received_snr(ch, refl, sc.transmit_power, sc.noise);
    return {sweep_value, "", snr, achievable_rate(snr)};
  }

  SweepRow operator()(const PassiveIrsSystem&) const {
    const ChannelRealization ch = synthesize_los(sc);
    const ReflectionConfig refl = optimize_passive(ch);
    const NoisePowers noise{sc.noise.sigma0_sq, 0.0};
    const double snr = received_snr(ch, refl, sc.transmit_power, noise);
    return {sweep_value, "", snr, achievable_rate(snr)};
  }

  SweepRow operator()(const RelaySystem& sys) const {
    const double gain1 =
        path_gain(distance(sc.bs_pos, sc.irs_pos), sc.path_loss);
    const double gain2 =
        path_gain(distance(sc.irs_pos, sc.user_pos), sc.path_loss);
    const double snr = af_end_to_end_snr(gain1, gain2, sc.transmit_power,
                                         sys.config, sc.noise.sigma0_sq);
    return {sweep_value, "", snr, relay_rate(snr, sys.config.mode)};
  }
};

std::vector<double> sweep_distances(const DistanceSweep& ds) {
  if (!(ds.step > 0.0) || !(ds.to >= ds.from)) {
    throw std::domain_error("distance sweep: need step > 0 and to >= from");
  }
  std::vector<double> out;
  const double eps = ds.step * 1e-9;
  for (double d = ds.from; d <= ds.to + eps; d += ds.step) {
    out.push_back(std::min(d, ds.to));
  }
  return out;
}

}  // namespace

SweepRow evaluate_system(const Scenario& sc, const SystemDescriptor& sys,
                         double sweep_value) {
  SweepRow row = std::visit(Evaluator{sc, sweep_value}, sys.kind);
  row.system = sys.id;
  return row;
}

SweepResult run_rate_vs_distance(const SweepSpec& spec, const Scenario& base) {
  const auto* ds = std::get_if<DistanceSweep>(&spec.variable);
  if (ds == nullptr) {
    throw std::invalid_argument("run_rate_vs_distance: sweep variable is not a distance range");
  }
  if (spec.systems.empty()) {
    throw std::domain_error("run_rate_vs_distance: no systems to evaluate");
  }
  SweepResult result;
  for (double d : sweep_distances(*ds)) {
    Scenario sc = base;
    sc.user_pos = {base.bs_pos.x + d, base.bs_pos.y, base.user_pos.z};
    sc.irs_pos = {base.bs_pos.x + d / 2.0, base.bs_pos.y, base.irs_pos.z};
    for (const auto& sys : spec.systems) {
      result.rows.push_back(evaluate_system(sc, sys, d));
    }
  }
  return result;
}

SweepResult run_snr_vs_elements(const SweepSpec& spec, const Scenario& base) {
  const auto* es = std::get_if<ElementSweep>(&spec.variable);
  if (es == nullptr) {
    throw std::invalid_argument("run_snr_vs_elements: sweep variable is not an element list");
  }
  if (es->values.empty() || spec.systems.empty()) {
    throw std::domain_error("run_snr_vs_elements: empty sweep");
  }
  SweepResult result;
  for (int m : es->values) {
    Scenario sc = base;
    sc.num_elements = m;
    for (const auto& sys : spec.systems) {
      result.rows.push_back(evaluate_system(sc, sys, double(m)));
    }
  }
  return result;
}

double estimate_scaling_slope(const std::vector<std::pair<double, double>>& points,
                              double tail_fraction) {
  if (!(tail_fraction > 0.0) || tail_fraction > 1.0) {
    throw std::domain_error("estimate_scaling_slope: tail_fraction must be in (0, 1]");
  }
  auto sorted = points;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t keep =
      std::size_t(std::ceil(tail_fraction * double(sorted.size())));
  if (keep < 3) {
    throw std::domain_error("estimate_scaling_slope: need at least 3 tail points");
  }
  sorted.erase(sorted.begin(), sorted.end() - std::ptrdiff_t(keep));

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [m, snr] : sorted) {
    if (!(m > 0.0) || !(snr > 0.0)) {
      throw std::domain_error("estimate_scaling_slope: points must be positive");
    }
    const double x = std::log(m);
    const double y = std::log(snr);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(keep);
  const double denom = n * sxx - sx * sx;
  if (!(denom > 0.0)) {
    throw std::domain_error("estimate_scaling_slope: degenerate abscissae");
  }
  return (n * sxy - sx * sy) / denom;
}

PlacementResult optimize_placement(const Scenario& base, Position3D seg_from,
                                   Position3D seg_to, double resolution,
                                   const SystemDescriptor& system) {
  if (!(resolution > 0.0)) {
    throw std::domain_error("optimize_placement: resolution must be positive");
  }
  const double len = distance(seg_from, seg_to);
  if (!(len > 0.0)) {
    throw std::domain_error("optimize_placement: segment endpoints coincide");
  }

  std::vector<double> offsets;
  for (double s = 0.0; s < len - resolution * 1e-9; s += resolution) {
    offsets.push_back(s);
  }
  offsets.push_back(len);
  if (offsets.empty()) {
    throw std::domain_error("optimize_placement: empty search grid");
  }
  // Walk from the transmitter end so ties resolve toward it.
  if (distance(seg_from, base.bs_pos) > distance(seg_to, base.bs_pos)) {
    std::swap(seg_from, seg_to);
    for (double& s : offsets) s = len - s;
    std::reverse(offsets.begin(), offsets.end());
  }

  PlacementResult best;
  best.snr = -1.0;
  for (double s : offsets) {
    const double f = s / len;
    Position3D pos{seg_from.x + f * (seg_to.x - seg_from.x),
                   seg_from.y + f * (seg_to.y - seg_from.y),
                   base.irs_pos.z};
    Scenario sc = base;
    sc.irs_pos = pos;
    const SweepRow row = evaluate_system(sc, system, s);
    if (row.snr > best.snr) {
      best.snr = row.snr;
      best.position = pos;
    }
  }
  return best;
}

}  // namespace airs
