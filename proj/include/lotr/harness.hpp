#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lotr/agents.hpp"
#include "lotr/card_model.hpp"
#include "lotr/errors.hpp"
#include "lotr/rules_engine.hpp"
#include "lotr/search.hpp"

namespace lotr {

enum class AgentKind : std::uint8_t { Random = 1, Expert = 2, FlatMc = 3, Mcts = 4 };
std::optional<AgentKind> agent_from_number(int n);

/// Agent per configurable decision stage. Travel and DeclareAttackers are
/// always played by the expert rules.
struct AgentAssignment {
  AgentKind planning = AgentKind::Expert;
  AgentKind questing = AgentKind::Expert;
  AgentKind defense = AgentKind::Expert;

  AgentKind for_stage(StageId stage) const;
  std::string label() const;  // "4-2-4"
  bool operator==(const AgentAssignment&) const = default;
};

struct GameRecord {
  std::uint64_t seed = 0;
  Outcome outcome = Outcome::Loss;
  TerminalStatus status;
  int rounds = 0;
  int decisions = 0;
  double seconds = 0.0;
};

/// Plays one full game. The outcome is a pure function of the arguments;
/// only `seconds` varies between runs.
GameRecord run_game(const BuiltScenario& scenario, AgentAssignment assignment, SearchBudget budget,
                    PolicyKind playout_policy, std::uint64_t seed);

struct ExperimentConfig {
  std::string label;
  const BuiltScenario* scenario = nullptr;  // non-owning
  AgentAssignment assignment;
  SearchBudget budget;
  PolicyKind playout_policy = PolicyKind::Expert;
  int trials = 1000;
  std::uint64_t master_seed = 0;
  int workers = 1;
};

struct Summary {
  int wins = 0;
  int trials = 0;
  double winrate = 0.0;
  double ci_halfwidth = 0.0;  // 95%
  double mean_game_seconds = 0.0;
  double stdev_game_seconds = 0.0;
};

struct ExperimentResult {
  ExperimentConfig config;
  Summary summary;
  std::vector<GameRecord> records;  // trial order
};

/// A failed trial; names the seed that reproduces it.
class TrialAborted : public InvariantViolation {
 public:
  TrialAborted(std::uint64_t seed, const std::string& what)
      : InvariantViolation("trial with seed " + std::to_string(seed) + " aborted: " + what), seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

/// Runs trials on up to `workers` threads. Trial i uses derive_seed(master_seed, i),
/// so results do not depend on the worker count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Normal-approximation binomial half-width at 95%: 1.96 sqrt(p(1-p)/n).
double confidence_interval(double p, int n);

Summary summarize_records(std::span<const GameRecord> records);

/// "98.1 ± 0.85" (percentage points).
std::string format_winrate(const Summary& summary);

inline constexpr std::string_view kCsvHeader =
    "label,planning,questing,defense,difficulty,budget,playout_policy,trials,wins,winrate_pct,ci_pct,mean_s,stdev_s";
inline constexpr int kTimingColumns = 2;  // trailing columns excluded from determinism checks

void write_csv(std::ostream& out, std::span<const ExperimentResult> results);
void write_records_csv(std::ostream& out, std::span<const ExperimentResult> results);
/// Aligned table sorted by winrate (descending), then label.
std::string render_table(std::span<const ExperimentResult> results);

/// One built scenario per difficulty; addresses stay valid for the object's lifetime.
class ScenarioSet {
 public:
  ScenarioSet(const CardLibrary& library, const std::array<ScenarioConfig, 3>& configs);
  static const ScenarioSet& bundled();
  const BuiltScenario& get(Difficulty d) const { return scenarios_[static_cast<int>(d)]; }

 private:
  std::array<BuiltScenario, 3> scenarios_;
};

struct PresetOptions {
  int trials = 1000;
  std::uint64_t master_seed = 0;
  int workers = 1;
};

/// Experiment lists for `sweep-budget`, `grid-agents` and `final-comp`.
std::vector<ExperimentConfig> preset_experiments(std::string_view preset, const ScenarioSet& scenarios,
                                                 const PresetOptions& options);
const std::vector<std::string_view>& preset_names();

AgentAssignment parse_assignment(std::string_view label);  // "4-2-4"

/// The fourteen Planning-Questing-Defense mixtures of the agent grid.
const std::vector<AgentAssignment>& grid_assignments();

}  // namespace lotr
