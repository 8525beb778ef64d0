// Command-line front end: single experiments, presets and scenario validation.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

#include "lotr/harness.hpp"

namespace {

using namespace lotr;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

struct OutputOptions {
  std::string out;
  std::string records;
};

void emit(const std::vector<ExperimentResult>& results, const OutputOptions& output) {
  if (output.out.empty()) {
    std::cerr << render_table(results);
    write_csv(std::cout, results);
  } else {
    std::ofstream file(output.out);
    if (!file) throw ConfigError("cannot write " + output.out);
    write_csv(file, results);
    std::cout << render_table(results);
  }
  if (!output.records.empty()) {
    std::ofstream file(output.records);
    if (!file) throw ConfigError("cannot write " + output.records);
    write_records_csv(file, results);
  }
}

std::vector<ExperimentResult> run_all(const std::vector<ExperimentConfig>& configs) {
  std::vector<ExperimentResult> results;
  for (const auto& c : configs) {
    std::cerr << "running " << c.label << " (" << c.trials << " trials)\n";
    results.push_back(run_experiment(c));
  }
  return results;
}

CardLibrary library_from(const std::string& path) {
  return path.empty() ? bundled_library() : load_card_library_file(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solo card game simulator with random, expert, flat Monte-Carlo and MCTS agents"};
  app.require_subcommand(1);

  std::string library_path;
  app.add_option("--library", library_path, "Card library file (default: bundled reference set)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Run one experiment");
  std::string scenario_path;
  std::string difficulty_name;
  int planning = 2, questing = 2, defense = 2;
  int budget = 40;
  std::string playouts = "expert";
  int trials = 1000;
  std::uint64_t seed = 0;
  int workers = 1;
  OutputOptions output;
  simulate->add_option("--scenario", scenario_path, "Scenario file (default: bundled scenario for --difficulty)");
  simulate->add_option("--difficulty", difficulty_name, "easy|medium|hard")
      ->check(CLI::IsMember({"easy", "medium", "hard"}, CLI::ignore_case));
  simulate->add_option("--planning", planning, "Agent for Planning")->check(CLI::Range(1, 4));
  simulate->add_option("--questing", questing, "Agent for Commitment")->check(CLI::Range(1, 4));
  simulate->add_option("--defense", defense, "Agent for Declare Defenders")->check(CLI::Range(1, 4));
  simulate->add_option("--budget", budget, "Playout budget")->check(CLI::PositiveNumber);
  simulate->add_option("--playouts", playouts, "random|expert")->check(CLI::IsMember({"random", "expert"}));
  simulate->add_option("--trials", trials)->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed);
  simulate->add_option("--workers", workers)->check(CLI::PositiveNumber);
  simulate->add_option("--out", output.out, "CSV path (default: stdout)");
  simulate->add_option("--records", output.records, "Per-trial CSV path");

  // presets
  std::vector<std::pair<std::string, CLI::App*>> presets;
  PresetOptions preset_options;
  for (auto name : preset_names()) {
    auto* sub = app.add_subcommand(std::string(name), "Preset experiment set");
    sub->add_option("--trials", preset_options.trials)->check(CLI::PositiveNumber);
    sub->add_option("--seed", preset_options.master_seed);
    sub->add_option("--workers", preset_options.workers)->check(CLI::PositiveNumber);
    sub->add_option("--out", output.out, "CSV path (default: stdout)");
    sub->add_option("--records", output.records, "Per-trial CSV path");
    presets.emplace_back(std::string(name), sub);
  }

  // validate
  auto* validate = app.add_subcommand("validate", "Check a scenario against the card library");
  std::string validate_path;
  validate->add_option("--scenario", validate_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*validate) {
      const auto library = library_from(library_path);
      const auto violations = validate_scenario(load_scenario_file(validate_path), library);
      for (const auto& v : violations) {
        std::cout << to_string(v.code) << ' ' << v.subject << ": " << v.message << '\n';
      }
      if (violations.empty()) std::cout << "ok\n";
      return violations.empty() ? kExitOk : kExitConfig;
    }

    if (*simulate) {
      const auto library = library_from(library_path);
      ScenarioConfig config;
      if (!scenario_path.empty()) {
        config = load_scenario_file(scenario_path);
        if (!difficulty_name.empty() && parse_difficulty(difficulty_name) != config.difficulty) {
          throw ConfigError("--difficulty " + difficulty_name + " contradicts the scenario file (" +
                            std::string(to_string(config.difficulty)) + ")");
        }
      } else {
        if (difficulty_name.empty()) throw ConfigError("simulate needs --scenario or --difficulty");
        config = bundled_scenario(*parse_difficulty(difficulty_name));
      }
      const auto scenario = build_scenario(config, library);
      ExperimentConfig experiment;
      experiment.scenario = &scenario;
      experiment.assignment = {*agent_from_number(planning), *agent_from_number(questing), *agent_from_number(defense)};
      experiment.label = experiment.assignment.label();
      experiment.budget = {budget};
      experiment.playout_policy = playouts == "random" ? PolicyKind::Random : PolicyKind::Expert;
      experiment.trials = trials;
      experiment.master_seed = seed;
      experiment.workers = workers;
      emit(run_all({experiment}), output);
      return kExitOk;
    }

    for (const auto& [name, sub] : presets) {
      if (!*sub) continue;
      std::unique_ptr<ScenarioSet> custom;
      if (!library_path.empty()) {
        const auto library = library_from(library_path);
        custom = std::make_unique<ScenarioSet>(
            library, std::array{bundled_scenario(Difficulty::Easy), bundled_scenario(Difficulty::Medium),
                                bundled_scenario(Difficulty::Hard)});
      }
      const ScenarioSet& scenarios = custom ? *custom : ScenarioSet::bundled();
      emit(run_all(preset_experiments(name, scenarios, preset_options)), output);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvariantViolation& e) {
    std::cerr << "internal invariant violation: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}
