#include <cmath>

#include "doctest.h"

#include "airs/experiments.hpp"

using namespace airs;

namespace {

Scenario base_scenario(int elements = 16) {
  Scenario sc;
  sc.bs_pos = {0.0, 0.0, 2.0};
  sc.user_pos = {100.0, 0.0, 0.0};
  sc.irs_pos = {50.0, 0.0, 2.0};
  sc.num_elements = elements;
  sc.path_loss = {1e-3, 2.0};
  sc.transmit_power = 0.1;
  sc.noise = {1e-11, 1e-11};
  return sc;
}

}  // namespace

TEST_CASE("evaluate_system composes the optimizer with received_snr") {
  const Scenario sc = base_scenario();

  SUBCASE("passive") {
    const SweepRow row = evaluate_system(sc, {"p", PassiveIrsSystem{}}, 1.0);
    const ChannelRealization ch = synthesize_los(sc);
    const double expect = received_snr(ch, optimize_passive(ch),
                                       sc.transmit_power,
                                       {sc.noise.sigma0_sq, 0.0});
    CHECK(row.snr == doctest::Approx(expect).epsilon(1e-12));
    CHECK(row.rate == doctest::Approx(achievable_rate(expect)).epsilon(1e-12));
    CHECK(row.system == "p");
    CHECK(row.sweep_value == 1.0);
  }

  SUBCASE("active total") {
    const PowerModel pm = ActiveTotal{0.01};
    const SweepRow row =
        evaluate_system(sc, {"a", ActiveIrsSystem{pm}}, 2.0);
    const ChannelRealization ch = synthesize_los(sc);
    const double expect = received_snr(
        ch, optimize_active(ch, pm, sc.transmit_power, sc.noise),
        sc.transmit_power, sc.noise);
    CHECK(row.snr == doctest::Approx(expect).epsilon(1e-12));
  }

  SUBCASE("relay uses the scenario's reflector position") {
    RelayConfig cfg{0.0316, 1e-11, RelayMode::HalfDuplex};
    const SweepRow row = evaluate_system(sc, {"r", RelaySystem{cfg}}, 3.0);
    const double g1 = path_gain(distance(sc.bs_pos, sc.irs_pos), sc.path_loss);
    const double g2 = path_gain(distance(sc.irs_pos, sc.user_pos), sc.path_loss);
    const double expect =
        af_end_to_end_snr(g1, g2, sc.transmit_power, cfg, sc.noise.sigma0_sq);
    CHECK(row.snr == doctest::Approx(expect).epsilon(1e-12));
    CHECK(row.rate == doctest::Approx(relay_rate(expect, cfg.mode)).epsilon(1e-12));
  }
}

TEST_CASE("run_rate_vs_distance row layout and geometry") {
  const Scenario sc = base_scenario();
  SweepSpec spec;
  spec.variable = DistanceSweep{20.0, 60.0, 20.0};
  spec.systems = {{"p", PassiveIrsSystem{}}};
  const SweepResult res = run_rate_vs_distance(spec, sc);
  REQUIRE(res.rows.size() == 3);
  CHECK(res.rows[0].sweep_value == doctest::Approx(20.0));
  CHECK(res.rows[1].sweep_value == doctest::Approx(40.0));
  CHECK(res.rows[2].sweep_value == doctest::Approx(60.0));

  // Midpoint placement: each distance should match an explicit evaluation.
  Scenario at40 = sc;
  at40.user_pos = {40.0, 0.0, 0.0};
  at40.irs_pos = {20.0, 0.0, 2.0};
  const SweepRow direct = evaluate_system(at40, spec.systems[0], 40.0);
  CHECK(res.rows[1].snr == doctest::Approx(direct.snr).epsilon(1e-12));

  // Longer links are never better.
  CHECK(res.rows[0].rate >= res.rows[1].rate);
  CHECK(res.rows[1].rate >= res.rows[2].rate);
}

TEST_CASE("run_rate_vs_distance input validation") {
  const Scenario sc = base_scenario();
  SweepSpec spec;
  spec.variable = ElementSweep{{4, 8}};
  spec.systems = {{"p", PassiveIrsSystem{}}};
  CHECK_THROWS_AS(run_rate_vs_distance(spec, sc), std::invalid_argument);

  spec.variable = DistanceSweep{20.0, 60.0, 20.0};
  spec.systems.clear();
  CHECK_THROWS_AS(run_rate_vs_distance(spec, sc), std::domain_error);

  spec.systems = {{"p", PassiveIrsSystem{}}};
  spec.variable = DistanceSweep{20.0, 10.0, 5.0};
  CHECK_THROWS_AS(run_rate_vs_distance(spec, sc), std::domain_error);
}

TEST_CASE("run_snr_vs_elements grows with the array") {
  const Scenario sc = base_scenario();
  SweepSpec spec;
  spec.variable = ElementSweep{{4, 16, 64}};
  spec.systems = {{"p", PassiveIrsSystem{}}, {"a", ActiveIrsSystem{ActiveTotal{0.01}}}};
  const SweepResult res = run_snr_vs_elements(spec, sc);
  REQUIRE(res.rows.size() == 6);
  for (int s = 0; s < 2; ++s) {
    CHECK(res.rows[2 + s].snr > res.rows[0 + s].snr);
    CHECK(res.rows[4 + s].snr > res.rows[2 + s].snr);
  }
}

TEST_CASE("passive snr scales exactly with the square of the element count") {
  const Scenario sc = base_scenario(8);
  Scenario big = sc;
  big.num_elements = 32;
  const SystemDescriptor p{"p", PassiveIrsSystem{}};
  const double r = evaluate_system(big, p, 0.0).snr / evaluate_system(sc, p, 0.0).snr;
  CHECK(r == doctest::Approx(16.0).epsilon(1e-9));
}

TEST_CASE("estimate_scaling_slope recovers exact power laws") {
  std::vector<std::pair<double, double>> quad, lin;
  for (int m : {8, 16, 32, 64, 128, 256}) {
    quad.emplace_back(m, 3.0 * m * m);
    lin.emplace_back(m, 0.25 * m);
  }
  CHECK(estimate_scaling_slope(quad, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(estimate_scaling_slope(quad, 1.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(estimate_scaling_slope(lin, 0.5) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("estimate_scaling_slope error handling") {
  std::vector<std::pair<double, double>> pts = {{8, 1}, {16, 2}, {32, 4}, {64, 8}};
  CHECK_THROWS_AS(estimate_scaling_slope(pts, 0.0), std::domain_error);
  CHECK_THROWS_AS(estimate_scaling_slope(pts, 1.5), std::domain_error);
  CHECK_THROWS_AS(estimate_scaling_slope(pts, 0.25), std::domain_error);  // < 3 tail points
  pts[0].second = 0.0;
  CHECK_THROWS_AS(estimate_scaling_slope(pts, 1.0), std::domain_error);
  std::vector<std::pair<double, double>> same = {{8, 1}, {8, 2}, {8, 3}};
  CHECK_THROWS_AS(estimate_scaling_slope(same, 1.0), std::domain_error);
}

TEST_CASE("passive placement prefers a segment endpoint") {
  // SNR ~ 1/(d1^2 d2^2); along a segment strictly between the endpoints the
  // distance product peaks in the middle, so an optimizer should pick an end.
  const Scenario sc = base_scenario(8);
  const SystemDescriptor p{"p", PassiveIrsSystem{}};
  const PlacementResult best = optimize_placement(
      sc, {30.0, 0.0, 2.0}, {70.0, 0.0, 2.0}, 1.0, p);
  const bool at_end = std::abs(best.position.x - 30.0) < 1e-9 ||
                      std::abs(best.position.x - 70.0) < 1e-9;
  CHECK(at_end);

  // And it is at least as good as both endpoints.
  for (double x : {30.0, 70.0}) {
    Scenario end = sc;
    end.irs_pos = {x, 0.0, 2.0};
    CHECK(best.snr >= evaluate_system(end, p, 0.0).snr * (1.0 - 1e-12));
  }
}

TEST_CASE("shrinking the amplification budget pulls the reflector toward the user") {
  const Scenario sc = base_scenario(8);
  const Position3D from{1.0, 0.0, 2.0};
  const Position3D to{99.0, 0.0, 2.0};
  const SystemDescriptor rich{"a", ActiveIrsSystem{ActiveTotal{0.01}}};
  const SystemDescriptor poor{"a", ActiveIrsSystem{ActiveTotal{0.0001}}};
  const PlacementResult b_rich = optimize_placement(sc, from, to, 2.0, rich);
  const PlacementResult b_poor = optimize_placement(sc, from, to, 2.0, poor);
  CHECK(b_poor.position.x >= b_rich.position.x - 1e-9);
}

TEST_CASE("without amplification noise the active optimum sits with the passive one") {
  Scenario sc = base_scenario(8);
  sc.noise.sigmaI_sq = 0.0;
  const Position3D from{55.0, 0.0, 2.0};
  const Position3D to{99.0, 0.0, 2.0};
  const SystemDescriptor a{"a", ActiveIrsSystem{ActiveTotal{0.01}}};
  const SystemDescriptor p{"p", PassiveIrsSystem{}};
  const PlacementResult ba = optimize_placement(sc, from, to, 2.0, a);
  const PlacementResult bp = optimize_placement(sc, from, to, 2.0, p);
  CHECK(ba.position.x == doctest::Approx(bp.position.x).epsilon(1e-9));
}

TEST_CASE("optimize_placement argument checks") {
  const Scenario sc = base_scenario(8);
  const SystemDescriptor p{"p", PassiveIrsSystem{}};
  CHECK_THROWS_AS(
      optimize_placement(sc, {30, 0, 2}, {70, 0, 2}, 0.0, p), std::domain_error);
  CHECK_THROWS_AS(
      optimize_placement(sc, {30, 0, 2}, {30, 0, 2}, 1.0, p), std::domain_error);
}
