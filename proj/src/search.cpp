#include "lotr/search.hpp"

#include <algorithm>
#include <cmath>

#include "lotr/action_space.hpp"
#include "lotr/errors.hpp"

namespace lotr {

namespace {

// Moves a tree state to the next searched decision, letting the expert rules
// play the stages the tree does not branch on.
void advance_in_tree(GameState& state) {
  while (true) {
    advance_to_decision(state);
    if (!terminal_status(state).ongoing() || is_searched_stage(state.stage)) return;
    apply_decision(state, expert_action(state));
  }
}

bool better_uct(const SearchNode& a, const SearchNode& b, int parent_visits) {
  const double sa = uct_value(a.winrate(), parent_visits, a.visits);
  const double sb = uct_value(b.winrate(), parent_visits, b.visits);
  if (sa != sb) return sa > sb;
  return a.rank < b.rank;
}

}  // namespace

bool is_searched_stage(StageId stage) {
  return stage == StageId::Planning || stage == StageId::CommitCharacters || stage == StageId::DeclareDefenders;
}

double uct_value(double winrate, int parent_visits, int visits) {
  if (visits < 1 || parent_visits < 1) throw InvariantViolation("uct_value needs visits >= 1");
  return winrate + std::sqrt(2.0 * std::log(static_cast<double>(parent_visits)) / visits);
}

SearchNode& select_child(SearchNode& node) {
  if (node.children.empty()) throw InvariantViolation("select_child on a node without children");
  SearchNode* best = node.children.front().get();
  for (const auto& child : node.children) {
    if (better_uct(*child, *best, node.visits)) best = child.get();
  }
  return *best;
}

Outcome simulate_playout(const GameState& state, PolicyKind policy, Rng& rng) {
  GameState game = state;
  while (true) {
    const auto status = terminal_status(game);
    if (!status.ongoing()) return status.kind == TerminalStatus::Kind::Win ? Outcome::Win : Outcome::Loss;
    if (is_decision_stage(game.stage)) apply_decision(game, policy_action(policy, game, rng));
    else step(game);
  }
}

void backpropagate(std::span<SearchNode* const> path, Outcome outcome) {
  for (auto* node : path) {
    ++node->visits;
    if (outcome == Outcome::Win) ++node->wins;
  }
}

void resample_hidden(GameState& state, Rng& rng) {
  // Sorting first makes the deal depend on the pile contents only.
  std::sort(state.player_deck.begin(), state.player_deck.end());
  std::sort(state.encounter_deck.begin(), state.encounter_deck.end());
  std::shuffle(state.player_deck.begin(), state.player_deck.end(), rng);
  std::shuffle(state.encounter_deck.begin(), state.encounter_deck.end(), rng);
  state.rng.seed(rng());
}

FlatMcResult flat_mc_search(const GameState& state, SearchBudget budget, PolicyKind policy, Rng& rng) {
  if (budget.playouts < 1) throw ConfigError("playout budget must be >= 1");
  FlatMcResult result;
  const auto actions = legal_actions(state);
  if (actions.size() == 1) {
    result.chosen = actions.front();
    result.children.push_back({actions.front()});
    return result;
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    ChildStats stats{actions[i]};
    for (int p = 0; p < budget.playouts; ++p) {
      GameState game = state;
      resample_hidden(game, rng);
      apply_decision(game, actions[i]);
      if (simulate_playout(game, policy, rng) == Outcome::Win) ++stats.wins;
      ++stats.playouts;
    }
    result.playouts += stats.playouts;
    result.children.push_back(stats);
    if (stats.wins > result.children[best].wins) best = i;
  }
  result.chosen = actions[best];
  return result;
}

Action flat_mc_decide(const GameState& state, SearchBudget budget, PolicyKind policy, Rng& rng) {
  return flat_mc_search(state, budget, policy, rng).chosen;
}

MctsResult mcts_search(const GameState& state, SearchBudget budget, PolicyKind policy, Rng& rng) {
  if (budget.playouts < 1) throw ConfigError("playout budget must be >= 1");
  MctsResult result;
  const auto root_actions = expert_expansion_filter(state, legal_actions(state));
  if (root_actions.size() == 1) {
    result.chosen = root_actions.front();
    return result;
  }
  result.root = std::make_unique<SearchNode>();
  SearchNode& root = *result.root;
  root.snapshot = state;
  root.untried = root_actions;

  std::vector<SearchNode*> path;
  for (int iteration = 0; iteration < budget.playouts; ++iteration) {
    GameState game = state;
    resample_hidden(game, rng);
    path.assign(1, &root);
    SearchNode* node = &root;
    while (terminal_status(game).ongoing()) {
      const auto available =
          node == &root ? root_actions : expert_expansion_filter(game, legal_actions(game));
      node->untried.clear();
      for (const auto& a : available) {
        const bool expanded = std::any_of(node->children.begin(), node->children.end(),
                                          [&](const auto& c) { return *c->action == a; });
        if (!expanded) node->untried.push_back(a);
      }
      if (!node->untried.empty()) {
        const auto pick = node->untried.front();
        auto child = std::make_unique<SearchNode>();
        child->action = pick;
        child->rank = static_cast<int>(std::find(available.begin(), available.end(), pick) - available.begin());
        child->parent = node;
        child->snapshot = game;
        std::erase(node->untried, pick);
        node->children.push_back(std::move(child));
        node = node->children.back().get();
        path.push_back(node);
        apply_decision(game, pick);
        advance_in_tree(game);
        break;
      }
      SearchNode* best = nullptr;
      for (const auto& child : node->children) {
        if (std::find(available.begin(), available.end(), *child->action) == available.end()) continue;
        if (!best || better_uct(*child, *best, node->visits)) best = child.get();
      }
      node = best;
      path.push_back(node);
      apply_decision(game, *node->action);
      advance_in_tree(game);
    }
    backpropagate(path, simulate_playout(game, policy, rng));
    ++result.playouts;
  }

  const SearchNode* chosen = root.children.front().get();
  for (const auto& child : root.children) {
    if (child->visits > chosen->visits || (child->visits == chosen->visits && child->rank < chosen->rank)) {
      chosen = child.get();
    }
  }
  result.chosen = *chosen->action;
  return result;
}

Action mcts_decide(const GameState& state, SearchBudget budget, PolicyKind policy, Rng& rng) {
  return mcts_search(state, budget, policy, rng).chosen;
}

}  // namespace lotr
