#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "lotr/harness.hpp"

namespace lotr {
namespace {

using test::lab;

ExperimentConfig lab_config(const std::string& triple, int trials, int workers, int budget = 3) {
  ExperimentConfig c;
  c.label = triple;
  c.scenario = &lab();
  c.assignment = parse_assignment(triple);
  c.budget = {budget};
  c.trials = trials;
  c.workers = workers;
  c.master_seed = 77;
  return c;
}

std::vector<std::string> csv_lines(std::span<const ExperimentResult> results) {
  std::ostringstream os;
  write_csv(os, results);
  std::vector<std::string> lines;
  std::istringstream in(os.str());
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

std::string without_timing(const std::string& line) {
  auto cut = line.size();
  for (int i = 0; i < kTimingColumns; ++i) cut = line.rfind(',', cut - 1);
  return line.substr(0, cut);
}

}  // namespace

// Published 95% half-widths at n = 1000, as (winrate %, half-width pp).
TEST(ConfidenceInterval, ReferenceTable) {
  const std::pair<double, double> table[] = {
      {98.1, 0.85}, {97.1, 1.04}, {96.4, 1.15}, {92.8, 1.60}, {82.5, 2.36}, {81.6, 2.40}, {80.2, 2.47},
      {76.5, 2.63}, {67.6, 2.90}, {40.2, 3.04}, {39.5, 3.03}, {34.8, 2.95}, {24.3, 2.66}, {20.4, 2.50}};
  for (const auto& [p, hw] : table) {
    EXPECT_NEAR(confidence_interval(p / 100.0, 1000) * 100.0, hw, 0.01) << p;
  }
}

TEST(ConfidenceInterval, Shape) {
  EXPECT_DOUBLE_EQ(confidence_interval(0.0, 50), 0.0);
  EXPECT_DOUBLE_EQ(confidence_interval(1.0, 1), 0.0);
  EXPECT_NEAR(confidence_interval(0.5, 1), 0.98, 1e-12);
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    EXPECT_NEAR(confidence_interval(p, 300), confidence_interval(1.0 - p, 300), 1e-12);
    EXPECT_LE(confidence_interval(p, 300), confidence_interval(0.5, 300) + 1e-15);
  }
  EXPECT_NEAR(confidence_interval(0.3, 400) * 2.0, confidence_interval(0.3, 100), 1e-12);
}

TEST(ConfidenceInterval, BadInput) {
  EXPECT_THROW(confidence_interval(0.5, 0), ConfigError);
  EXPECT_THROW(confidence_interval(-0.1, 10), ConfigError);
  EXPECT_THROW(confidence_interval(1.1, 10), ConfigError);
}

TEST(Summary, CountsAndTiming) {
  std::vector<GameRecord> records(4);
  records[0].outcome = records[2].outcome = Outcome::Win;
  records[0].seconds = 1.0;
  records[1].seconds = 2.0;
  records[2].seconds = 3.0;
  records[3].seconds = 4.0;
  const auto s = summarize_records(records);
  EXPECT_EQ(s.wins, 2);
  EXPECT_EQ(s.trials, 4);
  EXPECT_DOUBLE_EQ(s.winrate, 0.5);
  EXPECT_DOUBLE_EQ(s.ci_halfwidth, 1.96 * 0.25);
  EXPECT_DOUBLE_EQ(s.mean_game_seconds, 2.5);
  EXPECT_NEAR(s.stdev_game_seconds, std::sqrt(5.0 / 3.0), 1e-12);

  const auto one = summarize_records(std::span(records).first(1));
  EXPECT_DOUBLE_EQ(one.winrate, 1.0);
  EXPECT_DOUBLE_EQ(one.ci_halfwidth, 0.0);
  EXPECT_DOUBLE_EQ(one.stdev_game_seconds, 0.0);
}

TEST(Summary, Format) {
  Summary s;
  s.winrate = 0.981;
  s.ci_halfwidth = confidence_interval(0.981, 1000);
  EXPECT_EQ(format_winrate(s), "98.1 ± 0.85");
}

TEST(Assignment, ParseAndLabel) {
  const auto a = parse_assignment("4-2-3");
  EXPECT_EQ(a.planning, AgentKind::Mcts);
  EXPECT_EQ(a.questing, AgentKind::Expert);
  EXPECT_EQ(a.defense, AgentKind::FlatMc);
  EXPECT_EQ(a.label(), "4-2-3");
  EXPECT_EQ(a.for_stage(StageId::Planning), AgentKind::Mcts);
  EXPECT_EQ(a.for_stage(StageId::CommitCharacters), AgentKind::Expert);
  EXPECT_EQ(a.for_stage(StageId::DeclareDefenders), AgentKind::FlatMc);
  EXPECT_EQ(parse_assignment("1-1-1").for_stage(StageId::Travel), AgentKind::Expert);
  EXPECT_EQ(parse_assignment("1-1-1").for_stage(StageId::DeclareAttackers), AgentKind::Expert);
  for (auto bad : {"", "5-1-1", "0-1-1", "4-2", "4-2-4-1", "4_2_4", "a-b-c"}) {
    EXPECT_THROW(parse_assignment(bad), ConfigError) << bad;
  }
}

TEST(Assignment, GridHasFourteenDistinctMixtures) {
  const auto& grid = grid_assignments();
  ASSERT_EQ(grid.size(), 14u);
  std::set<std::string> labels;
  for (const auto& a : grid) labels.insert(a.label());
  EXPECT_EQ(labels.size(), 14u);
  EXPECT_FALSE(labels.contains("1-1-1"));
  EXPECT_FALSE(labels.contains("2-2-2"));
}

TEST(RunGame, PureInItsArguments) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto triple : {"1-1-1", "2-2-2", "3-4-1"}) {
      const auto a = run_game(lab(), parse_assignment(triple), {2}, PolicyKind::Expert, seed);
      const auto b = run_game(lab(), parse_assignment(triple), {2}, PolicyKind::Expert, seed);
      EXPECT_EQ(a.outcome, b.outcome);
      EXPECT_EQ(a.status, b.status);
      EXPECT_EQ(a.rounds, b.rounds);
      EXPECT_EQ(a.decisions, b.decisions);
      EXPECT_FALSE(a.status.ongoing());
      EXPECT_EQ(a.outcome == Outcome::Win, a.status.kind == TerminalStatus::Kind::Win);
      EXPECT_EQ(a.seed, seed);
    }
  }
}

TEST(Experiment, WorkerCountDoesNotMatter) {
  const auto one = run_experiment(lab_config("4-3-1", 24, 1));
  for (int workers : {2, 5, 40}) {
    const auto many = run_experiment(lab_config("4-3-1", 24, workers));
    ASSERT_EQ(many.records.size(), one.records.size());
    for (std::size_t i = 0; i < one.records.size(); ++i) {
      EXPECT_EQ(many.records[i].seed, derive_seed(77, i));
      EXPECT_EQ(many.records[i].outcome, one.records[i].outcome);
      EXPECT_EQ(many.records[i].decisions, one.records[i].decisions);
    }
    EXPECT_EQ(many.summary.wins, one.summary.wins);
    const std::vector<ExperimentResult> a{one}, b{many};
    EXPECT_EQ(without_timing(csv_lines(a)[1]), without_timing(csv_lines(b)[1]));
  }
}

TEST(Experiment, BadConfig) {
  auto c = lab_config("2-2-2", 10, 1);
  c.trials = 0;
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = lab_config("2-2-2", 10, 0);
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = lab_config("2-2-2", 10, 1, 0);
  EXPECT_THROW(run_experiment(c), ConfigError);
  c = lab_config("2-2-2", 10, 1);
  c.scenario = nullptr;
  EXPECT_THROW(run_experiment(c), ConfigError);
}

TEST(Experiment, SingleTrial) {
  const auto r = run_experiment(lab_config("2-2-2", 1, 8));
  EXPECT_EQ(r.summary.trials, 1);
  EXPECT_DOUBLE_EQ(r.summary.ci_halfwidth, 0.0);
}

TEST(Csv, HeaderOnlyWhenEmpty) {
  const auto lines = csv_lines({});
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0], kCsvHeader);
}

TEST(Csv, RowLayout) {
  const std::vector<ExperimentResult> results{run_experiment(lab_config("2-1-2", 20, 1))};
  const auto lines = csv_lines(results);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(std::count(lines[1].begin(), lines[1].end(), ','), std::count(kCsvHeader.begin(), kCsvHeader.end(), ','));
  const auto& s = results[0].summary;
  std::ostringstream expected;
  expected << "2-1-2,2,1,2,Easy,3,expert,20," << s.wins << ',';
  EXPECT_EQ(lines[1].rfind(expected.str(), 0), 0u) << lines[1];

  std::ostringstream records;
  write_records_csv(records, results);
  std::istringstream in(records.str());
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  EXPECT_EQ(rows, 21);
}

TEST(Table, SortedByWinrateThenLabel) {
  std::vector<ExperimentResult> rows(3);
  const char* labels[] = {"zeta", "alpha", "mid"};
  const int wins[] = {5, 5, 9};
  for (int i = 0; i < 3; ++i) {
    rows[i].config = lab_config("2-2-2", 10, 1);
    rows[i].config.label = labels[i];
    rows[i].summary.wins = wins[i];
    rows[i].summary.trials = 10;
    rows[i].summary.winrate = wins[i] / 10.0;
  }
  const auto table = render_table(rows);
  const auto mid = table.find("mid"), alpha = table.find("alpha"), zeta = table.find("zeta");
  ASSERT_NE(zeta, std::string::npos);
  EXPECT_LT(mid, alpha);
  EXPECT_LT(alpha, zeta);
}

TEST(Presets, Shapes) {
  const auto& set = ScenarioSet::bundled();
  const PresetOptions options{200, 9, 4};

  const auto sweep = preset_experiments("sweep-budget", set, options);
  ASSERT_EQ(sweep.size(), 24u);
  std::set<int> budgets;
  for (const auto& c : sweep) {
    budgets.insert(c.budget.playouts);
    EXPECT_EQ(c.scenario->difficulty, Difficulty::Medium);
    EXPECT_EQ(c.assignment.planning, c.assignment.questing);
    EXPECT_EQ(c.assignment.questing, c.assignment.defense);
    EXPECT_TRUE(c.assignment.planning == AgentKind::FlatMc || c.assignment.planning == AgentKind::Mcts);
    EXPECT_EQ(c.trials, 200);
    EXPECT_EQ(c.master_seed, 9u);
    EXPECT_EQ(c.workers, 4);
  }
  EXPECT_EQ(budgets, (std::set<int>{1, 5, 10, 20, 40, 80}));

  const auto grid = preset_experiments("grid-agents", set, options);
  ASSERT_EQ(grid.size(), 16u);
  for (const auto& c : grid) {
    EXPECT_EQ(c.scenario->difficulty, Difficulty::Medium);
    EXPECT_EQ(c.budget.playouts, 40);
    EXPECT_EQ(c.label, c.assignment.label());
  }

  const auto final_comp = preset_experiments("final-comp", set, options);
  ASSERT_EQ(final_comp.size(), 7u);
  for (const auto& c : final_comp) EXPECT_EQ(c.scenario->difficulty, Difficulty::Hard);

  EXPECT_THROW(preset_experiments("nope", set, options), ConfigError);
  EXPECT_EQ(preset_names().size(), 3u);
}

TEST(Presets, ScenarioSetRejectsWrongSlots) {
  const auto& lib = bundled_library();
  EXPECT_THROW(ScenarioSet(lib, {bundled_scenario(Difficulty::Medium), bundled_scenario(Difficulty::Medium),
                                 bundled_scenario(Difficulty::Hard)}),
               ConfigError);
}

}  // namespace lotr
