#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "airs/config.hpp"
#include "airs/units.hpp"

using namespace airs;

namespace {

std::string snr_config(const std::string& output) {
  return R"({
  "experiment": "snr",
  "scenario": {
    "bs": [0, 0, 2],
    "user": [100, 0, 0],
    "irs": [50, 0, 2],
    "elements": 16,
    "ref_gain_db": -30,
    "pathloss_exp": 2,
    "tx_power_dbm": 20,
    "rx_noise_dbm": -80,
    "irs_noise_dbm": -80
  },
  "systems": [
    {"type": "passive-irs"},
    {"type": "active-irs", "power": "total", "amp_power_dbm": 10}
  ],
  "output": ")" + output + R"("
})";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = (std::filesystem::temp_directory_path() / name).string();
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("unit conversions") {
  CHECK(db_to_linear(-30.0) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(db_to_linear(0.0) == 1.0);
  CHECK(dbm_to_watts(-80.0) == doctest::Approx(1e-11).epsilon(1e-14));
  CHECK(dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-14));
  CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(watts_to_dbm(0.2) == doctest::Approx(23.0103).epsilon(1e-5));
  CHECK(linear_to_db(db_to_linear(-17.3)) == doctest::Approx(-17.3).epsilon(1e-12));
}

TEST_CASE("parse_config_text validates the document") {
  const RunConfig rc = parse_config_text(snr_config("out.csv"), "cfg");
  CHECK(rc.experiment == Experiment::Snr);
  CHECK(rc.scenario.num_elements == 16);
  CHECK(rc.scenario.transmit_power == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(rc.scenario.noise.sigma0_sq == doctest::Approx(1e-11).epsilon(1e-12));
  CHECK(rc.scenario.path_loss.beta0 == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(rc.scenario.direct_link_blocked);  // default
  REQUIRE(rc.sweep.systems.size() == 2);
  CHECK(rc.sweep.systems[0].id == "passive-irs");
  CHECK(rc.sweep.systems[1].id == "active-irs-total");
  CHECK(rc.output_path == "out.csv");
}

TEST_CASE("unknown keys are reported by name") {
  std::string text = snr_config("out.csv");
  text.insert(text.rfind('}'), R"(, "extra_knob": 1)");
  try {
    parse_config_text(text, "cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("extra_knob") != std::string::npos);
  }
}

TEST_CASE("missing required keys are reported by name") {
  const std::string text = R"({"experiment": "snr"})";
  try {
    parse_config_text(text, "cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("scenario") != std::string::npos);
  }
}

TEST_CASE("malformed syntax errors carry a line number") {
  const std::string text = "{\n  \"experiment\": \"snr\",\n  oops\n}";
  try {
    parse_config_text(text, "cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("cfg:3") != std::string::npos);
    CHECK(msg.find("malformed") != std::string::npos);
  }
}

TEST_CASE("power fields accept exactly one unit") {
  std::string text = snr_config("out.csv");
  const std::string needle = "\"amp_power_dbm\": 10";
  text.replace(text.find(needle), needle.size(),
               "\"amp_power_dbm\": 10, \"amp_power_w\": 0.01");
  CHECK_THROWS_AS(parse_config_text(text, "cfg"), ConfigError);
}

TEST_CASE("duplicate system ids are rejected") {
  std::string text = snr_config("out.csv");
  const std::string needle = "{\"type\": \"passive-irs\"}";
  text.replace(text.find(needle), needle.size(),
               "{\"type\": \"passive-irs\", \"id\": \"active-irs-total\"}");
  CHECK_THROWS_AS(parse_config_text(text, "cfg"), ConfigError);
}

TEST_CASE("config round-trips through emit and parse") {
  const RunConfig rc = parse_config_text(snr_config("out.csv"), "cfg");
  const std::string emitted = emit_config(rc);
  const RunConfig again = parse_config_text(emitted, "echo");
  CHECK(rc == again);
  CHECK(emit_config(again) == emitted);
}

TEST_CASE("run writes a deterministic csv") {
  TempFile out1("irslink_test_run1.csv");
  TempFile out2("irslink_test_run2.csv");

  std::ostringstream sum1, sum2, diag;
  const RunConfig rc1 = parse_config_text(snr_config(out1.path), "cfg");
  REQUIRE(run(rc1, sum1, diag) == 0);
  const RunConfig rc2 = parse_config_text(snr_config(out2.path), "cfg");
  REQUIRE(run(rc2, sum2, diag) == 0);
  CHECK(diag.str().empty());

  const std::string csv1 = slurp(out1.path);
  const std::string csv2 = slurp(out2.path);
  CHECK(csv1 == csv2);
  CHECK(csv1.rfind("sweep_value,system,snr_db,rate_bps_hz\n", 0) == 0);

  // One data row per system, comma-separated with 4 fields.
  std::istringstream lines(csv1);
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 3);
    ++rows;
  }
  CHECK(rows == 2);
}

TEST_CASE("run reports failures through the diagnostic stream") {
  RunConfig rc = parse_config_text(snr_config("out.csv"), "cfg");
  rc.output_path = "/nonexistent-dir-for-sure/out.csv";
  std::ostringstream sum, diag;
  CHECK(run(rc, sum, diag) == 1);
  CHECK(diag.str().find("error:") != std::string::npos);
}

TEST_CASE("placement config schema") {
  const std::string text = R"({
  "experiment": "placement",
  "scenario": {
    "bs": [0, 0, 2], "user": [100, 0, 0], "irs": [50, 0, 2],
    "elements": 8, "ref_gain_db": -30, "pathloss_exp": 2,
    "tx_power_dbm": 20, "rx_noise_dbm": -80, "irs_noise_dbm": -80
  },
  "system": {"type": "active-irs", "power": "total", "amp_power_dbm": 10},
  "placement": {"from": [1, 0, 2], "to": [99, 0, 2], "resolution_m": 7}
})";
  const RunConfig rc = parse_config_text(text, "cfg");
  REQUIRE(rc.placement.has_value());
  CHECK(rc.placement->resolution == 7.0);
  CHECK(rc.output_path == "placement.csv");  // default name

  TempFile out("irslink_test_placement.csv");
  RunConfig runnable = rc;
  runnable.output_path = out.path;
  std::ostringstream sum, diag;
  REQUIRE(run(runnable, sum, diag) == 0);
  CHECK(slurp(out.path).rfind("x_m,y_m,z_m,system,snr_db,rate_bps_hz\n", 0) == 0);
  CHECK(sum.str().find("best position") != std::string::npos);
}

TEST_CASE("quantize-sweep config schema and defaults") {
  const std::string text = R"({
  "experiment": "quantize-sweep",
  "scenario": {
    "bs": [0, 0, 2], "user": [100, 0, 0], "irs": [50, 0, 2],
    "elements": 8, "ref_gain_db": -30, "pathloss_exp": 2,
    "tx_power_dbm": 20, "rx_noise_dbm": -80, "irs_noise_dbm": -80
  },
  "system": {"type": "active-irs", "power": "total", "amp_power_dbm": 10}
})";
  const RunConfig rc = parse_config_text(text, "cfg");
  REQUIRE(rc.quantize.has_value());
  CHECK(rc.quantize->phase_bits_max == 8);
  CHECK(rc.quantize->amp_levels == 1025);

  TempFile out("irslink_test_quantize.csv");
  RunConfig runnable = rc;
  runnable.output_path = out.path;
  std::ostringstream sum, diag;
  REQUIRE(run(runnable, sum, diag) == 0);
  std::istringstream lines(slurp(out.path));
  std::string line;
  std::getline(lines, line);
  int rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 8);

  // Passive reflectors cannot be quantize-swept.
  std::string bad = text;
  const std::string needle =
      R"({"type": "active-irs", "power": "total", "amp_power_dbm": 10})";
  bad.replace(bad.find(needle), needle.size(), R"({"type": "passive-irs"})");
  CHECK_THROWS_AS(parse_config_text(bad, "cfg"), ConfigError);
}
