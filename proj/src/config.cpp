#include "airs/config.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "airs/units.hpp"

namespace airs {

namespace {

using ojson = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void check_object(const ojson& node, const std::string& path) {
  if (!node.is_object()) fail(path + ": expected an object");
}

void check_known_keys(const ojson& node, const std::string& path,
                      std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : node.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) fail("unknown key: " + join_path(path, key));
  }
}

const ojson& require_key(const ojson& node, const std::string& path,
                         const char* key) {
  auto it = node.find(key);
  if (it == node.end()) fail("missing required key: " + join_path(path, key));
  return *it;
}

double get_number(const ojson& node, const std::string& path, const char* key) {
  const ojson& v = require_key(node, path, key);
  if (!v.is_number()) fail(join_path(path, key) + ": expected a number");
  return v.get<double>();
}

int get_int(const ojson& node, const std::string& path, const char* key) {
  const ojson& v = require_key(node, path, key);
  if (!v.is_number_integer()) fail(join_path(path, key) + ": expected an integer");
  return v.get<int>();
}

std::string get_string(const ojson& node, const std::string& path,
                       const char* key) {
  const ojson& v = require_key(node, path, key);
  if (!v.is_string()) fail(join_path(path, key) + ": expected a string");
  return v.get<std::string>();
}

Position3D get_position(const ojson& node, const std::string& path,
                        const char* key) {
  const ojson& v = require_key(node, path, key);
  if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
      !v[1].is_number() || !v[2].is_number()) {
    fail(join_path(path, key) + ": expected [x, y, z] in meters");
  }
  return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

// Power fields accept exactly one of <base>_dbm / <base>_w.
double get_power_watts(const ojson& node, const std::string& path,
                       const char* base) {
  const std::string dbm_key = std::string(base) + "_dbm";
  const std::string w_key = std::string(base) + "_w";
  const bool has_dbm = node.contains(dbm_key);
  const bool has_w = node.contains(w_key);
  if (has_dbm == has_w) {
    fail(path + ": give exactly one of " + dbm_key + " and " + w_key);
  }
  if (has_dbm) {
    const ojson& v = node[dbm_key];
    if (!v.is_number()) fail(join_path(path, dbm_key.c_str()) + ": expected a number");
    return dbm_to_watts(v.get<double>());
  }
  const ojson& v = node[w_key];
  if (!v.is_number()) fail(join_path(path, w_key.c_str()) + ": expected a number");
  return v.get<double>();
}

Scenario parse_scenario(ojson& node, const std::string& path) {
  check_object(node, path);
  check_known_keys(node, path,
                   {"bs", "user", "irs", "elements", "wavelength_m",
                    "ref_gain_db", "pathloss_exp", "tx_power_dbm",
                    "rx_noise_dbm", "irs_noise_dbm", "direct_blocked"});
  Scenario sc;
  sc.bs_pos = get_position(node, path, "bs");
  sc.user_pos = get_position(node, path, "user");
  sc.irs_pos = get_position(node, path, "irs");
  sc.num_elements = get_int(node, path, "elements");
  if (sc.num_elements < 1) fail(join_path(path, "elements") + ": must be >= 1");

  if (!node.contains("wavelength_m")) node["wavelength_m"] = 0.1;
  sc.wavelength = get_number(node, path, "wavelength_m");
  if (!(sc.wavelength > 0.0)) fail(join_path(path, "wavelength_m") + ": must be > 0");

  // dB/dBm fields are converted to linear/watts exactly once, here.
  sc.path_loss.beta0 = db_to_linear(get_number(node, path, "ref_gain_db"));
  sc.path_loss.kappa = get_number(node, path, "pathloss_exp");
  if (!(sc.path_loss.kappa > 0.0)) fail(join_path(path, "pathloss_exp") + ": must be > 0");
  sc.transmit_power = dbm_to_watts(get_number(node, path, "tx_power_dbm"));
  sc.noise.sigma0_sq = dbm_to_watts(get_number(node, path, "rx_noise_dbm"));
  sc.noise.sigmaI_sq = dbm_to_watts(get_number(node, path, "irs_noise_dbm"));

  if (!node.contains("direct_blocked")) node["direct_blocked"] = true;
  const ojson& blocked = node["direct_blocked"];
  if (!blocked.is_boolean()) fail(join_path(path, "direct_blocked") + ": expected a boolean");
  sc.direct_link_blocked = blocked.get<bool>();

  try {
    validate(sc);
  } catch (const std::exception& e) {
    fail(path + ": " + e.what());
  }
  return sc;
}

SystemDescriptor parse_system(ojson& node, const std::string& path,
                              const Scenario& sc) {
  check_object(node, path);
  const std::string type = get_string(node, path, "type");
  SystemDescriptor sys;
  std::string default_id;

  if (type == "active-irs") {
    check_known_keys(node, path,
                     {"type", "id", "power", "amp_power_dbm", "amp_power_w"});
    const std::string power = get_string(node, path, "power");
    const double watts = get_power_watts(node, path, "amp_power");
    if (!(watts > 0.0)) fail(path + ": amplification power must be > 0");
    if (power == "total") {
      sys.kind = ActiveIrsSystem{ActiveTotal{watts}};
      default_id = "active-irs-total";
    } else if (power == "per-element") {
      sys.kind = ActiveIrsSystem{ActivePerElement{watts}};
      default_id = "active-irs-per-element";
    } else {
      fail(join_path(path, "power") + ": expected \"total\" or \"per-element\"");
    }
  } else if (type == "passive-irs") {
    check_known_keys(node, path, {"type", "id"});
    sys.kind = PassiveIrsSystem{};
    default_id = "passive-irs";
  } else if (type == "relay") {
    check_known_keys(node, path,
                     {"type", "id", "mode", "amp_power_dbm", "amp_power_w",
                      "noise_dbm"});
    RelayConfig cfg;
    cfg.relay_power = get_power_watts(node, path, "amp_power");
    if (!(cfg.relay_power > 0.0)) fail(path + ": amplification power must be > 0");
    const std::string mode = get_string(node, path, "mode");
    if (mode == "half-duplex") {
      cfg.mode = RelayMode::HalfDuplex;
      default_id = "relay-hd";
    } else if (mode == "full-duplex") {
      cfg.mode = RelayMode::FullDuplexIdeal;
      default_id = "relay-fd";
    } else {
      fail(join_path(path, "mode") + ": expected \"half-duplex\" or \"full-duplex\"");
    }
    if (!node.contains("noise_dbm")) {
      node["noise_dbm"] = watts_to_dbm(sc.noise.sigma0_sq);
    }
    cfg.relay_noise_sq = dbm_to_watts(get_number(node, path, "noise_dbm"));
    if (!(cfg.relay_noise_sq > 0.0)) fail(join_path(path, "noise_dbm") + ": noise must be > 0 W");
    sys.kind = RelaySystem{cfg};
  } else {
    fail(join_path(path, "type") +
         ": expected \"active-irs\", \"passive-irs\" or \"relay\"");
  }

  if (!node.contains("id")) node["id"] = default_id;
  const ojson& id = node["id"];
  if (!id.is_string() || id.get<std::string>().empty()) {
    fail(join_path(path, "id") + ": expected a non-empty string");
  }
  sys.id = id.get<std::string>();
  return sys;
}

std::vector<SystemDescriptor> parse_systems(ojson& node, const std::string& path,
                                            const Scenario& sc) {
  if (!node.is_array() || node.empty()) {
    fail(path + ": expected a non-empty array of systems");
  }
  std::vector<SystemDescriptor> out;
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string sub = path + "[" + std::to_string(i) + "]";
    out.push_back(parse_system(node[i], sub, sc));
    for (std::size_t j = 0; j + 1 < out.size(); ++j) {
      if (out[j].id == out.back().id) {
        fail(sub + ": duplicate system id \"" + out.back().id +
             "\"; set distinct \"id\" values");
      }
    }
  }
  return out;
}

Experiment parse_experiment(const ojson& node, const std::string& path) {
  if (!node.is_string()) fail(path + ": expected a string");
  const std::string name = node.get<std::string>();
  if (name == "fig5") return Experiment::Fig5;
  if (name == "fig6") return Experiment::Fig6;
  if (name == "placement") return Experiment::Placement;
  if (name == "snr") return Experiment::Snr;
  if (name == "quantize-sweep") return Experiment::QuantizeSweep;
  fail(path + ": unknown experiment \"" + name + "\"");
}

std::size_t line_of_offset(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

std::string format_sig9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string snr_db_string(double snr) {
  if (!(snr > 0.0)) return "-inf";
  return format_sig9(linear_to_db(snr));
}

void write_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open output file: " + tmp.string());
    out << contents;
    if (!out) throw std::runtime_error("failed writing output file: " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace

const char* experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Fig5: return "fig5";
    case Experiment::Fig6: return "fig6";
    case Experiment::Placement: return "placement";
    case Experiment::Snr: return "snr";
    case Experiment::QuantizeSweep: return "quantize-sweep";
  }
  return "?";
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  return a.doc == b.doc;
}

RunConfig parse_config_text(const std::string& text, const std::string& name) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(name + ":" + std::to_string(line_of_offset(text, e.byte)) +
         ": malformed config: " + e.what());
  }
  check_object(doc, name);

  RunConfig rc;
  rc.experiment = parse_experiment(require_key(doc, "", "experiment"), "experiment");

  switch (rc.experiment) {
    case Experiment::Fig5:
    case Experiment::Fig6:
      check_known_keys(doc, "", {"experiment", "scenario", "systems", "sweep", "output"});
      break;
    case Experiment::Snr:
      check_known_keys(doc, "", {"experiment", "scenario", "systems", "output"});
      break;
    case Experiment::Placement:
      check_known_keys(doc, "", {"experiment", "scenario", "system", "placement", "output"});
      break;
    case Experiment::QuantizeSweep:
      check_known_keys(doc, "", {"experiment", "scenario", "system", "quantize", "output"});
      break;
  }

  require_key(doc, "", "scenario");
  rc.scenario = parse_scenario(doc["scenario"], "scenario");

  if (rc.experiment == Experiment::Fig5 || rc.experiment == Experiment::Fig6 ||
      rc.experiment == Experiment::Snr) {
    require_key(doc, "", "systems");
    rc.sweep.systems = parse_systems(doc["systems"], "systems", rc.scenario);
  }

  if (rc.experiment == Experiment::Fig5) {
    require_key(doc, "", "sweep");
    ojson& sweep = doc["sweep"];
    check_object(sweep, "sweep");
    check_known_keys(sweep, "sweep", {"distance_m"});
    require_key(sweep, "sweep", "distance_m");
    ojson& dist = sweep["distance_m"];
    check_object(dist, "sweep.distance_m");
    check_known_keys(dist, "sweep.distance_m", {"from", "to", "step"});
    DistanceSweep ds;
    ds.from = get_number(dist, "sweep.distance_m", "from");
    ds.to = get_number(dist, "sweep.distance_m", "to");
    ds.step = get_number(dist, "sweep.distance_m", "step");
    if (!(ds.step > 0.0) || !(ds.to >= ds.from) || !(ds.from > 0.0)) {
      fail("sweep.distance_m: need 0 < from <= to and step > 0");
    }
    rc.sweep.variable = ds;
  } else if (rc.experiment == Experiment::Fig6) {
    require_key(doc, "", "sweep");
    ojson& sweep = doc["sweep"];
    check_object(sweep, "sweep");
    check_known_keys(sweep, "sweep", {"elements"});
    const ojson& vals = require_key(sweep, "sweep", "elements");
    if (!vals.is_array() || vals.empty()) {
      fail("sweep.elements: expected a non-empty array of element counts");
    }
    ElementSweep es;
    for (const auto& v : vals) {
      if (!v.is_number_integer() || v.get<int>() < 1) {
        fail("sweep.elements: entries must be integers >= 1");
      }
      es.values.push_back(v.get<int>());
    }
    rc.sweep.variable = es;
  }

  if (rc.experiment == Experiment::Placement ||
      rc.experiment == Experiment::QuantizeSweep) {
    require_key(doc, "", "system");
    rc.sweep.systems.push_back(parse_system(doc["system"], "system", rc.scenario));
    if (rc.experiment == Experiment::QuantizeSweep &&
        !std::holds_alternative<ActiveIrsSystem>(rc.sweep.systems[0].kind)) {
      fail("system: quantize-sweep requires an active-irs system");
    }
  }

  if (rc.experiment == Experiment::Placement) {
    require_key(doc, "", "placement");
    ojson& pl = doc["placement"];
    check_object(pl, "placement");
    check_known_keys(pl, "placement", {"from", "to", "resolution_m"});
    PlacementSearch ps;
    ps.from = get_position(pl, "placement", "from");
    ps.to = get_position(pl, "placement", "to");
    ps.resolution = get_number(pl, "placement", "resolution_m");
    if (!(ps.resolution > 0.0)) fail("placement.resolution_m: must be > 0");
    rc.placement = ps;
  }

  if (rc.experiment == Experiment::QuantizeSweep) {
    if (!doc.contains("quantize")) doc["quantize"] = ojson::object();
    ojson& qz = doc["quantize"];
    check_object(qz, "quantize");
    check_known_keys(qz, "quantize", {"phase_bits_max", "amp_levels"});
    if (!qz.contains("phase_bits_max")) qz["phase_bits_max"] = 8;
    if (!qz.contains("amp_levels")) qz["amp_levels"] = 1025;
    QuantizeSweepSearch qs;
    qs.phase_bits_max = get_int(qz, "quantize", "phase_bits_max");
    qs.amp_levels = get_int(qz, "quantize", "amp_levels");
    if (qs.phase_bits_max < 1 || qs.phase_bits_max > 24 || qs.amp_levels < 1) {
      fail("quantize: need 1 <= phase_bits_max <= 24 and amp_levels >= 1");
    }
    rc.quantize = qs;
  }

  if (!doc.contains("output")) {
    doc["output"] = std::string(experiment_name(rc.experiment)) + ".csv";
  }
  if (!doc["output"].is_string() || doc["output"].get<std::string>().empty()) {
    fail("output: expected a non-empty string");
  }
  rc.output_path = doc["output"].get<std::string>();

  rc.doc = std::move(doc);
  return rc;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

std::string emit_config(const RunConfig& config) {
  return config.doc.dump(2) + "\n";
}

int run(const RunConfig& config, std::ostream& summary, std::ostream& diag) {
  try {
    const auto start = std::chrono::steady_clock::now();
    std::string header = "sweep_value,system,snr_db,rate_bps_hz";
    std::vector<std::string> lines;
    std::string note;

    auto push_row = [&lines](const SweepRow& row) {
      lines.push_back(format_sig9(row.sweep_value) + "," + row.system + "," +
                      snr_db_string(row.snr) + "," + format_sig9(row.rate));
    };

    switch (config.experiment) {
      case Experiment::Fig5: {
        const SweepResult res = run_rate_vs_distance(config.sweep, config.scenario);
        for (const auto& row : res.rows) push_row(row);
        break;
      }
      case Experiment::Fig6: {
        const SweepResult res = run_snr_vs_elements(config.sweep, config.scenario);
        for (const auto& row : res.rows) push_row(row);

        // Crossover of the per-element curve over the total-power curve.
        const SystemDescriptor* total = nullptr;
        const SystemDescriptor* per = nullptr;
        for (const auto& sys : config.sweep.systems) {
          if (const auto* irs = std::get_if<ActiveIrsSystem>(&sys.kind)) {
            if (std::holds_alternative<ActiveTotal>(irs->power) && !total) total = &sys;
            if (std::holds_alternative<ActivePerElement>(irs->power) && !per) per = &sys;
          }
        }
        if (total && per) {
          std::vector<std::pair<double, bool>> above;  // (M, per > total)
          for (std::size_t i = 0; i < res.rows.size(); ++i) {
            if (res.rows[i].system != total->id) continue;
            for (std::size_t j = 0; j < res.rows.size(); ++j) {
              if (res.rows[j].system == per->id &&
                  res.rows[j].sweep_value == res.rows[i].sweep_value) {
                above.emplace_back(res.rows[i].sweep_value,
                                   res.rows[j].snr > res.rows[i].snr);
              }
            }
          }
          int rises = 0, falls = 0;
          double crossover = 0.0;
          for (std::size_t i = 1; i < above.size(); ++i) {
            if (!above[i - 1].second && above[i].second) {
              ++rises;
              crossover = above[i].first;
            } else if (above[i - 1].second && !above[i].second) {
              ++falls;
            }
          }
          if (rises == 1 && falls == 0) {
            note = ", crossover M*=" + format_sig9(crossover);
          } else {
            note = ", no unique crossover";
          }
        }
        break;
      }
      case Experiment::Snr: {
        const double d = distance(config.scenario.bs_pos, config.scenario.user_pos);
        for (const auto& sys : config.sweep.systems) {
          push_row(evaluate_system(config.scenario, sys, d));
        }
        break;
      }
      case Experiment::Placement: {
        header = "x_m,y_m,z_m,system,snr_db,rate_bps_hz";
        const auto& ps = *config.placement;
        const auto& sys = config.sweep.systems[0];
        const PlacementResult best = optimize_placement(
            config.scenario, ps.from, ps.to, ps.resolution, sys);
        Scenario sc = config.scenario;
        sc.irs_pos = best.position;
        const SweepRow row = evaluate_system(sc, sys, 0.0);
        lines.push_back(format_sig9(best.position.x) + "," +
                        format_sig9(best.position.y) + "," +
                        format_sig9(best.position.z) + "," + row.system + "," +
                        snr_db_string(row.snr) + "," + format_sig9(row.rate));
        note = ", best position (" + format_sig9(best.position.x) + ", " +
               format_sig9(best.position.y) + ", " +
               format_sig9(best.position.z) + "), snr " +
               snr_db_string(row.snr) + " dB";
        break;
      }
      case Experiment::QuantizeSweep: {
        const auto& sys = config.sweep.systems[0];
        const auto& irs = std::get<ActiveIrsSystem>(sys.kind);
        const ChannelRealization ch = synthesize_los(config.scenario);
        const ReflectionConfig cont = optimize_active(
            ch, irs.power, config.scenario.transmit_power, config.scenario.noise);
        const double cont_snr = received_snr(
            ch, cont, config.scenario.transmit_power, config.scenario.noise);
        double alpha_max = 0.0;
        for (double a : cont.alpha) alpha_max = std::max(alpha_max, a);
        if (alpha_max <= 0.0) alpha_max = 1.0;
        for (int bits = 1; bits <= config.quantize->phase_bits_max; ++bits) {
          const ReflectionConfig q = quantize_reflection(
              cont, {bits, config.quantize->amp_levels, alpha_max});
          const double snr = received_snr(ch, q, config.scenario.transmit_power,
                                          config.scenario.noise);
          push_row({double(bits), sys.id, snr, achievable_rate(snr)});
        }
        note = ", continuous snr " + snr_db_string(cont_snr) + " dB";
        break;
      }
    }

    std::string csv = header + "\n";
    for (const auto& line : lines) csv += line + "\n";
    write_atomic(config.output_path, csv);

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    char secs_buf[32];
    std::snprintf(secs_buf, sizeof(secs_buf), "%.2f", secs);
    summary << experiment_name(config.experiment) << ": " << lines.size()
            << " rows -> " << config.output_path << " (" << secs_buf << " s)"
            << note << "\n";
    return 0;
  } catch (const std::exception& e) {
    diag << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace airs
