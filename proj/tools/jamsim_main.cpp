#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "jamsim/jamsim.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Uplink massive MIMO jamming-suppression simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a sweep scenario and write CSV");
  std::string config_path;
  std::string preset;
  std::string out_path;
  long trials_outer = -1;
  long trials_inner = -1;
  long long seed = -1;
  int threads = -1;
  bool reproducible = false;
  run->add_option("--config", config_path, "Scenario file (key = value lines)");
  run->add_option("--preset", preset, "Built-in scenario: fig2 or fig3");
  run->add_option("--trials-outer", trials_outer, "Outer Monte Carlo draws");
  run->add_option("--trials-inner", trials_inner, "Inner trials per outer draw");
  run->add_option("--seed", seed, "Base RNG seed");
  run->add_option("--out", out_path, "Output CSV path");
  run->add_option("--threads", threads, "Worker threads (0 = hardware)");
  run->add_flag("--reproducible", reproducible, "Suppress the timestamp header line");

  CLI11_PARSE(app, argc, argv);

  try {
    jamsim::Scenario scenario;
    if (!config_path.empty()) {
      scenario = jamsim::parse_scenario_file(config_path);
      if (!preset.empty()) {
        std::cerr << "error: give either --config or --preset, not both\n";
        return 1;
      }
    } else if (!preset.empty()) {
      scenario = jamsim::preset_by_name(preset);
    } else {
      std::cerr << "error: one of --config or --preset is required\n";
      return 1;
    }
    if (trials_outer >= 0) scenario.n_outer = trials_outer;
    if (trials_inner >= 0) scenario.n_inner = trials_inner;
    if (seed >= 0) scenario.base.seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) scenario.threads = threads;
    if (!out_path.empty()) scenario.out_path = out_path;
    if (reproducible) scenario.reproducible = true;
    scenario.validate();

    jamsim::run_scenario(scenario);
    const size_t rows =
        scenario.sweep_values.size() * scenario.tau_values.size() * scenario.methods.size();
    std::cout << "wrote " << rows << " rows to " << scenario.out_path << "\n";
    return 0;
  } catch (const jamsim::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 1;
  } catch (const jamsim::ConfigError& e) {
    std::cerr << "invalid scenario: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
