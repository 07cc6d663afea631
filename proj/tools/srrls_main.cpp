// Command-line front end: Monte-Carlo NMSD experiments for the robust
// sparsity-aware RLS family.

#include <chrono>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "srrls/config.hpp"
#include "srrls/errors.hpp"
#include "srrls/harness.hpp"

namespace {

std::vector<std::string> split_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Keeps the configured spec for each requested variant when present,
// otherwise falls back to the scenario default for that variant.
void select_algorithms(srrls::ExperimentConfig& config, const std::string& csv) {
  std::vector<srrls::AlgorithmSpec> picked;
  for (const std::string& name : split_list(csv)) {
    bool found = false;
    for (const auto& spec : config.algorithms) {
      if (spec.display_label() == name) {
        picked.push_back(spec);
        found = true;
        break;
      }
    }
    if (found) continue;
    const auto variant = srrls::parse_variant(name);
    if (!variant) throw srrls::ConfigError("unknown algorithm '" + name + "'");
    picked.push_back(srrls::default_algorithm(config.case_kind, *variant));
  }
  if (picked.empty()) throw srrls::ConfigError("--algorithms selected nothing");
  config.algorithms = std::move(picked);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse-system identification with robust sparsity-aware RLS filters"};
  app.require_subcommand(1);

  std::string config_path;
  std::string case_name;
  std::size_t runs = 0;
  std::size_t iterations = 0;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::string algorithms;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run a Monte-Carlo NMSD experiment");
  run->add_option("--config", config_path, "Experiment config file")->check(CLI::ExistingFile);
  run->add_option("--case", case_name, "Built-in scenario")->check(CLI::IsMember({"1", "2"}));
  run->add_option("--runs", runs, "Number of independent runs")->check(CLI::PositiveNumber);
  run->add_option("--iterations", iterations, "Samples per run")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--threads", threads, "Worker threads (0: all cores)");
  run->add_option("--algorithms", algorithms, "Comma-separated variants or labels");
  run->add_option("--out", out_dir, "Output directory");

  auto* list = app.add_subcommand("list-algorithms", "List the available algorithm variants");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Parse and check a config file");
  validate->add_option("--config", validate_path, "Experiment config file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (srrls::Variant v : srrls::all_variants()) {
        std::cout << srrls::to_string(v) << "\trobust=" << srrls::is_robust(v)
                  << " sparse=" << srrls::is_sparse(v)
                  << " adaptive_rho=" << srrls::has_adaptive_rho(v)
                  << " variable_lambda=" << srrls::has_variable_lambda(v) << '\n';
      }
      return 0;
    }

    if (*validate) {
      const srrls::ExperimentConfig config = srrls::load_config(validate_path);
      config.validate();
      std::cout << "ok: " << config.algorithms.size() << " algorithm(s), " << config.runs
                << " run(s) x " << config.iterations << " iteration(s)\n";
      return 0;
    }

    srrls::ExperimentConfig config;
    if (!config_path.empty()) {
      config = srrls::load_config(config_path);
      if (!case_name.empty()) {
        throw srrls::ConfigError("--case and --config are mutually exclusive");
      }
    } else if (!case_name.empty()) {
      config = case_name == "1" ? srrls::case1_defaults() : srrls::case2_defaults();
    } else {
      throw srrls::ConfigError("run needs --config or --case");
    }
    if (run->count("--runs")) config.runs = runs;
    if (run->count("--iterations")) config.iterations = iterations;
    if (run->count("--seed")) config.seed = seed;
    if (run->count("--threads")) config.threads = threads;
    if (run->count("--out")) config.output_dir = out_dir;
    if (!algorithms.empty()) select_algorithms(config, algorithms);
    config.validate();

    const auto start = std::chrono::steady_clock::now();
    const srrls::ExperimentResult result = srrls::run_experiment(config);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    for (const std::string& msg : result.discarded) std::cerr << "discarded " << msg << '\n';
    srrls::emit_outputs(result.curves, config, config.output_dir);

    std::cout << "runs used: " << result.runs_used << '/' << config.runs << "  (" << secs
              << " s)\n";
    for (const auto& curve : result.curves) {
      std::cout << "  " << curve.label << ": final NMSD " << curve.values.back() << " dB\n";
    }
    std::cout << "wrote " << config.output_dir << "/nmsd.csv\n";
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
