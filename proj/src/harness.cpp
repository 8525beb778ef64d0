#include "lotr/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "lotr/random.hpp"

namespace lotr {

namespace {

// A game cannot outlast the threat limit; anything longer is an engine bug.
constexpr int kRoundGuard = 1000;

Action agent_decision(AgentKind agent, const GameState& state, SearchBudget budget, PolicyKind playout_policy,
                      Rng& rng) {
  switch (agent) {
    case AgentKind::Random: return random_action(state, rng);
    case AgentKind::Expert: return expert_action(state);
    case AgentKind::FlatMc: return flat_mc_decide(state, budget, playout_policy, rng);
    case AgentKind::Mcts: return mcts_decide(state, budget, playout_policy, rng);
  }
  throw InvariantViolation("unknown agent kind");
}

std::string fixed(double v, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << v;
  return os.str();
}

int digit(AgentKind a) { return static_cast<int>(a); }

}  // namespace

std::optional<AgentKind> agent_from_number(int n) {
  if (n < 1 || n > 4) return std::nullopt;
  return static_cast<AgentKind>(n);
}

AgentKind AgentAssignment::for_stage(StageId stage) const {
  switch (stage) {
    case StageId::Planning: return planning;
    case StageId::CommitCharacters: return questing;
    case StageId::DeclareDefenders: return defense;
    default: return AgentKind::Expert;
  }
}

std::string AgentAssignment::label() const {
  return std::to_string(digit(planning)) + "-" + std::to_string(digit(questing)) + "-" +
         std::to_string(digit(defense));
}

AgentAssignment parse_assignment(std::string_view label) {
  if (label.size() != 5 || label[1] != '-' || label[3] != '-') {
    throw ConfigError("agent triple must look like 4-2-4, got '" + std::string(label) + "'");
  }
  auto slot = [&](char c) {
    auto a = agent_from_number(c - '0');
    if (!a) throw ConfigError("agent must be 1..4 in '" + std::string(label) + "'");
    return *a;
  };
  return {slot(label[0]), slot(label[2]), slot(label[4])};
}

const std::vector<AgentAssignment>& grid_assignments() {
  static const std::vector<AgentAssignment> grid = [] {
    std::vector<AgentAssignment> out;
    for (auto s : {"3-2-2", "4-2-2", "4-2-4", "2-2-4", "3-3-2", "2-3-2", "4-4-4", "4-4-2", "2-4-4", "2-4-2",
                   "3-2-3", "2-2-3", "2-3-3", "3-3-3"}) {
      out.push_back(parse_assignment(s));
    }
    return out;
  }();
  return grid;
}

GameRecord run_game(const BuiltScenario& scenario, AgentAssignment assignment, SearchBudget budget,
                    PolicyKind playout_policy, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  GameRecord record;
  record.seed = seed;
  GameState state = init_game(scenario, seed);
  Rng agent_rng(derive_seed(seed, 1));
  while (true) {
    advance_to_decision(state);
    const auto status = terminal_status(state);
    if (!status.ongoing()) {
      record.status = status;
      record.outcome = status.kind == TerminalStatus::Kind::Win ? Outcome::Win : Outcome::Loss;
      break;
    }
    if (state.round_number > kRoundGuard) throw InvariantViolation("game exceeded the round guard");
    apply_decision(state, agent_decision(assignment.for_stage(state.stage), state, budget, playout_policy, agent_rng));
    ++record.decisions;
  }
  record.rounds = state.round_number;
  record.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return record;
}

double confidence_interval(double p, int n) {
  if (n < 1) throw ConfigError("confidence interval needs n >= 1");
  if (p < 0.0 || p > 1.0) throw ConfigError("winrate must lie in [0, 1]");
  return 1.96 * std::sqrt(p * (1.0 - p) / n);
}

Summary summarize_records(std::span<const GameRecord> records) {
  Summary s;
  s.trials = static_cast<int>(records.size());
  if (records.empty()) return s;
  double total = 0.0;
  for (const auto& r : records) {
    if (r.outcome == Outcome::Win) ++s.wins;
    total += r.seconds;
  }
  s.winrate = static_cast<double>(s.wins) / s.trials;
  s.ci_halfwidth = confidence_interval(s.winrate, s.trials);
  s.mean_game_seconds = total / s.trials;
  if (s.trials > 1) {
    double sq = 0.0;
    for (const auto& r : records) sq += (r.seconds - s.mean_game_seconds) * (r.seconds - s.mean_game_seconds);
    s.stdev_game_seconds = std::sqrt(sq / (s.trials - 1));
  }
  return s;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  if (!config.scenario) throw ConfigError("experiment has no scenario");
  if (config.trials < 1) throw ConfigError("trials must be >= 1");
  if (config.workers < 1) throw ConfigError("workers must be >= 1");
  if (config.budget.playouts < 1) throw ConfigError("budget must be >= 1");

  ExperimentResult result;
  result.config = config;
  result.records.resize(config.trials);
  std::vector<std::string> errors(config.trials);
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};

  auto lane = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const int i = next.fetch_add(1);
      if (i >= config.trials) return;
      const auto seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(i));
      try {
        result.records[i] = run_game(*config.scenario, config.assignment, config.budget, config.playout_policy, seed);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        failed = true;
      }
    }
  };

  const int lanes = std::min(config.workers, config.trials);
  if (lanes == 1) {
    lane();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < lanes; ++w) pool.emplace_back(lane);
  }

  for (int i = 0; i < config.trials; ++i) {
    if (!errors[i].empty()) throw TrialAborted(derive_seed(config.master_seed, static_cast<std::uint64_t>(i)), errors[i]);
  }
  result.summary = summarize_records(result.records);
  return result;
}

std::string format_winrate(const Summary& summary) {
  return fixed(summary.winrate * 100.0, 1) + " ± " + fixed(summary.ci_halfwidth * 100.0, 2);
}

void write_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << kCsvHeader << '\n';
  for (const auto& r : results) {
    const auto& c = r.config;
    const auto& s = r.summary;
    out << c.label << ',' << digit(c.assignment.planning) << ',' << digit(c.assignment.questing) << ','
        << digit(c.assignment.defense) << ',' << to_string(c.scenario->difficulty) << ',' << c.budget.playouts << ','
        << to_string(c.playout_policy) << ',' << s.trials << ',' << s.wins << ',' << fixed(s.winrate * 100.0, 2) << ','
        << fixed(s.ci_halfwidth * 100.0, 2) << ',' << fixed(s.mean_game_seconds, 6) << ','
        << fixed(s.stdev_game_seconds, 6) << '\n';
  }
}

void write_records_csv(std::ostream& out, std::span<const ExperimentResult> results) {
  out << "label,trial,seed,outcome,reason,rounds,decisions,seconds\n";
  for (const auto& r : results) {
    for (std::size_t i = 0; i < r.records.size(); ++i) {
      const auto& g = r.records[i];
      out << r.config.label << ',' << i << ',' << g.seed << ',' << (g.outcome == Outcome::Win ? "win" : "loss") << ','
          << to_string(g.status) << ',' << g.rounds << ',' << g.decisions << ',' << fixed(g.seconds, 6) << '\n';
    }
  }
}

std::string render_table(std::span<const ExperimentResult> results) {
  std::vector<const ExperimentResult*> rows;
  for (const auto& r : results) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(), [](const auto* a, const auto* b) {
    if (a->summary.wins * b->summary.trials != b->summary.wins * a->summary.trials) {
      return a->summary.winrate > b->summary.winrate;
    }
    return a->config.label < b->config.label;
  });

  std::size_t label_w = 5;
  for (const auto* r : rows) label_w = std::max(label_w, r->config.label.size());
  std::ostringstream os;
  os << std::left << std::setw(static_cast<int>(label_w)) << "label" << "  P-Q-D  difficulty  budget  playouts"
     << "  winrate %      time s\n";
  for (const auto* r : rows) {
    const auto& c = r->config;
    os << std::left << std::setw(static_cast<int>(label_w)) << c.label << "  " << c.assignment.label() << "  "
       << std::setw(10) << to_string(c.scenario->difficulty) << "  " << std::right << std::setw(6) << c.budget.playouts
       << "  " << std::left << std::setw(8) << to_string(c.playout_policy) << "  " << std::setw(13)
       << format_winrate(r->summary) << "  " << fixed(r->summary.mean_game_seconds, 3) << " ± "
       << fixed(r->summary.stdev_game_seconds, 3) << '\n';
  }
  return os.str();
}

ScenarioSet::ScenarioSet(const CardLibrary& library, const std::array<ScenarioConfig, 3>& configs)
    : scenarios_{build_scenario(configs[0], library), build_scenario(configs[1], library),
                 build_scenario(configs[2], library)} {
  for (int d = 0; d < 3; ++d) {
    if (scenarios_[d].difficulty != static_cast<Difficulty>(d)) {
      throw ConfigError("scenario set slot " + std::to_string(d) + " holds a " +
                        std::string(to_string(scenarios_[d].difficulty)) + " scenario");
    }
  }
}

const ScenarioSet& ScenarioSet::bundled() {
  static const ScenarioSet set(bundled_library(), {bundled_scenario(Difficulty::Easy),
                                                   bundled_scenario(Difficulty::Medium),
                                                   bundled_scenario(Difficulty::Hard)});
  return set;
}

const std::vector<std::string_view>& preset_names() {
  static const std::vector<std::string_view> names{"sweep-budget", "grid-agents", "final-comp"};
  return names;
}

std::vector<ExperimentConfig> preset_experiments(std::string_view preset, const ScenarioSet& scenarios,
                                                 const PresetOptions& options) {
  auto base = [&](std::string label, Difficulty d, AgentAssignment a, int budget, PolicyKind policy) {
    ExperimentConfig c;
    c.label = std::move(label);
    c.scenario = &scenarios.get(d);
    c.assignment = a;
    c.budget = {budget};
    c.playout_policy = policy;
    c.trials = options.trials;
    c.master_seed = options.master_seed;
    c.workers = options.workers;
    return c;
  };

  std::vector<ExperimentConfig> out;
  if (preset == "sweep-budget") {
    for (auto policy : {PolicyKind::Random, PolicyKind::Expert}) {
      for (auto agent : {AgentKind::FlatMc, AgentKind::Mcts}) {
        for (int budget : {1, 5, 10, 20, 40, 80}) {
          const std::string name = agent == AgentKind::FlatMc ? "flat" : "mcts";
          out.push_back(base(name + "-" + std::string(to_string(policy)) + "-b" + std::to_string(budget),
                             Difficulty::Medium, {agent, agent, agent}, budget, policy));
        }
      }
    }
  } else if (preset == "grid-agents") {
    auto triples = grid_assignments();
    triples.push_back(parse_assignment("2-2-2"));
    triples.push_back(parse_assignment("1-1-1"));
    for (const auto& a : triples) out.push_back(base(a.label(), Difficulty::Medium, a, 40, PolicyKind::Expert));
  } else if (preset == "final-comp") {
    for (auto s : {"1-1-1", "2-2-2", "3-3-3", "4-4-4", "3-2-2", "4-2-2", "4-2-4"}) {
      out.push_back(base(s, Difficulty::Hard, parse_assignment(s), 40, PolicyKind::Expert));
    }
  } else {
    throw ConfigError("unknown preset '" + std::string(preset) + "'");
  }
  return out;
}

}  // namespace lotr
