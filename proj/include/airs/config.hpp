#pragma once

#include <optional>
#include <ostream>
#include <string>

#include "airs/experiments.hpp"

#include "json.hpp"

namespace airs {

enum class Experiment { Fig5, Fig6, Placement, Snr, QuantizeSweep };

const char* experiment_name(Experiment e);

struct PlacementSearch {
  Position3D from;
  Position3D to;
  double resolution = 1.0;
};

struct QuantizeSweepSearch {
  int phase_bits_max = 8;
  int amp_levels = 1025;
};

/// Fully validated run description. `doc` is the canonical echo of the
/// parsed file (defaults materialized); all derived fields are linear/watts.
struct RunConfig {
  nlohmann::ordered_json doc;
  Experiment experiment = Experiment::Snr;
  Scenario scenario;
  SweepSpec sweep;
  std::optional<PlacementSearch> placement;
  std::optional<QuantizeSweepSearch> quantize;
  std::string output_path;
};

bool operator==(const RunConfig& a, const RunConfig& b);

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& name);

/// Canonical echo; parse_config_text(emit_config(rc)) == rc.
std::string emit_config(const RunConfig& config);

/// Executes the selected experiment, writes the results file atomically and
/// prints a one-line summary. Returns the process exit status.
int run(const RunConfig& config, std::ostream& summary, std::ostream& diag);

}  // namespace airs
