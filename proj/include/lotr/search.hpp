#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "lotr/action.hpp"
#include "lotr/agents.hpp"
#include "lotr/random.hpp"
#include "lotr/rules_engine.hpp"

namespace lotr {

/// Number of playouts a search may spend. Flat Monte-Carlo spends it per
/// child; MCTS spends it per decision.
struct SearchBudget {
  int playouts = 40;
};

/// UCT score: winrate + sqrt(2 ln(parent_visits) / visits). Needs visits >= 1.
double uct_value(double winrate, int parent_visits, int visits);

struct SearchNode {
  std::optional<Action> action;  // edge from the parent; empty at the root
  int visits = 0;
  int wins = 0;
  int rank = 0;  // position of `action` in the parent's filtered list when expanded
  SearchNode* parent = nullptr;
  std::vector<std::unique_ptr<SearchNode>> children;
  std::vector<Action> untried;  // filtered actions with no child yet, as of the last visit
  GameState snapshot;           // state in which `action` was expanded (root: the search state)

  double winrate() const { return visits > 0 ? static_cast<double>(wins) / visits : 0.0; }
};

/// argmax of uct_value over the children, with n = node.visits; ties go to
/// the lower rank. Throws InvariantViolation when there are no children.
SearchNode& select_child(SearchNode& node);

/// Plays a copy of `state` to the end with `policy` at every decision.
Outcome simulate_playout(const GameState& state, PolicyKind policy, Rng& rng);

/// visits += 1 on every node of the path, wins += 1 on a win.
void backpropagate(std::span<SearchNode* const> path, Outcome outcome);

/// Re-deals hidden information: shuffles both draw piles (from sorted order)
/// and reseeds the state's stream. Search agents use it so they never read the real deck order.
void resample_hidden(GameState& state, Rng& rng);

struct ChildStats {
  Action action;
  int playouts = 0;
  int wins = 0;
};

struct FlatMcResult {
  Action chosen;
  std::vector<ChildStats> children;  // legal_actions order
  int playouts = 0;
};

/// Agent 3: `budget.playouts` playouts from every legal child; the child with
/// the most wins is chosen (first in canonical order on ties).
FlatMcResult flat_mc_search(const GameState& state, SearchBudget budget, PolicyKind policy, Rng& rng);
Action flat_mc_decide(const GameState& state, SearchBudget budget, PolicyKind policy, Rng& rng);

struct MctsResult {
  Action chosen;
  std::unique_ptr<SearchNode> root;  // null when the decision was forced
  int playouts = 0;
};

/// Agent 4: UCT over decisions with expert-filtered expansion; untried
/// actions are expanded in enumeration order. Chance is
/// handled open-loop: every iteration re-deals hidden cards, and only
/// children whose action is legal in that deal are eligible. Final choice is
/// the root child with the most visits (lowest rank on ties).
MctsResult mcts_search(const GameState& state, SearchBudget budget, PolicyKind policy, Rng& rng);
Action mcts_decide(const GameState& state, SearchBudget budget, PolicyKind policy, Rng& rng);

/// Stages the tree branches on. Travel and DeclareAttackers are always played
/// by the expert rules inside the tree.
bool is_searched_stage(StageId stage);

}  // namespace lotr
