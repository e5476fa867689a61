#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "airs/config.hpp"

namespace {

struct SubArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;  // reserved for future randomized experiments
};

int dispatch(const std::string& subcommand, const SubArgs& args) {
  try {
    airs::RunConfig config = airs::parse_config(args.config_path);
    if (airs::experiment_name(config.experiment) != subcommand) {
      std::cerr << "error: config file selects experiment \""
                << airs::experiment_name(config.experiment)
                << "\" but subcommand is \"" << subcommand << "\"\n";
      return 1;
    }
    if (!args.out_path.empty()) {
      config.output_path = args.out_path;
      config.doc["output"] = args.out_path;
    }
    return airs::run(config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Link-level simulator for active-IRS-aided wireless links"};
  app.require_subcommand(1);

  const std::pair<const char*, const char*> subs[] = {
      {"fig5", "Achievable rate versus BS-user distance"},
      {"fig6", "Received SNR versus number of reflecting elements"},
      {"placement", "Optimize IRS/relay position on a deployment segment"},
      {"snr", "Single-point SNR/rate evaluation"},
      {"quantize-sweep", "SNR versus phase-shift resolution"},
  };

  for (const auto& [name, desc] : subs) {
    auto* sub = app.add_subcommand(name, desc);
    auto args = std::make_shared<SubArgs>();
    sub->add_option("--config", args->config_path, "Path to the config file")
        ->required();
    sub->add_option("--out", args->out_path,
                    "Results file (overrides the config's output path)");
    sub->add_option("--seed", args->seed, "Reserved; accepted for forward compatibility");
    sub->callback([name = std::string(name), args] {
      const int status = dispatch(name, *args);
      if (status != 0) throw CLI::RuntimeError(status);
    });
  }

  CLI11_PARSE(app, argc, argv);
  return 0;
}
