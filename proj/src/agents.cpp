#include "lotr/agents.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <tuple>

#include "lotr/action_space.hpp"
#include "lotr/errors.hpp"

namespace lotr {

namespace {

std::size_t uniform_index(std::size_t n, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

std::uint64_t uniform_subset(int k, Rng& rng) {
  const std::uint64_t hi = k >= 64 ? std::numeric_limits<std::uint64_t>::max() : (std::uint64_t{1} << k) - 1;
  return std::uniform_int_distribution<std::uint64_t>(0, hi)(rng);
}

bool contains(std::span<const Action> actions, const Action& a) {
  return std::find(actions.begin(), actions.end(), a) != actions.end();
}

// Rejection sampling shared by both random commit paths; `accept` decides membership.
template <class Accept>
Action sample_commit(const GameState& state, Rng& rng, Accept accept) {
  const auto candidates = mask_members(state.ready_mask());
  const int threat = state.staging_threat();
  for (int attempt = 0; attempt < kCommitRejectionCap; ++attempt) {
    const auto mask = expand_subset(uniform_subset(static_cast<int>(candidates.size()), rng), candidates);
    if (mask != 0 && mask_willpower(state, mask) > threat && accept(mask)) return Action::commit(mask);
  }
  return Action::commit(0);
}

std::vector<std::int8_t> sample_defenders(const GameState& state, Rng& rng) {
  auto candidates = mask_members(state.ready_mask());
  std::vector<std::int8_t> assignment;
  for (std::size_t j = 0; j < state.engagement_area.size(); ++j) {
    if (candidates.empty()) {
      assignment.push_back(kUndefended);
      continue;
    }
    const auto pick = uniform_index(candidates.size(), rng);
    assignment.push_back(static_cast<std::int8_t>(candidates[pick]));
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return assignment;
}

std::vector<int> attackable_enemies(const GameState& state) {
  std::vector<int> out;
  for (std::size_t j = 0; j < state.engagement_area.size(); ++j) {
    const auto& e = state.engagement_area[j];
    if (!e.targeted && state.alive(e)) out.push_back(static_cast<int>(j));
  }
  return out;
}

int hitpoints_left(const GameState& state, const EnemyInPlay& e) { return state.card(e.card).hitpoints - e.damage; }

// Expert defense rule, built directly from the state.
std::vector<std::int8_t> expert_defenders(const GameState& state) {
  const std::size_t enemies = state.engagement_area.size();
  std::vector<int> order(enemies);
  for (std::size_t j = 0; j < enemies; ++j) order[j] = static_cast<int>(j);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return state.card(state.engagement_area[a].card).attack > state.card(state.engagement_area[b].card).attack;
  });
  auto available = state.ready_mask();
  std::vector<std::int8_t> assignment(enemies, kUndefended);
  for (const int j : order) {
    const int attack = state.card(state.engagement_area[j].card).attack;
    int best = -1;
    for (const int c : mask_members(available)) {
      if (!survives_hit(state, c, attack)) continue;
      if (best < 0 || state.character_def(c).defense < state.character_def(best).defense) best = c;
    }
    if (best >= 0) {
      assignment[j] = static_cast<std::int8_t>(best);
      available &= ~(std::uint64_t{1} << best);
    }
  }
  return assignment;
}

// Sums reachable with the first i values, for every prefix length i.
std::vector<std::vector<char>> prefix_sums(const std::vector<int>& values, int cap) {
  std::vector<std::vector<char>> reach(values.size() + 1, std::vector<char>(cap + 1, 0));
  reach[0][0] = 1;
  for (std::size_t i = 0; i < values.size(); ++i) {
    reach[i + 1] = reach[i];
    for (int s = cap; s >= values[i]; --s) {
      if (reach[i][s - values[i]]) reach[i + 1][s] = 1;
    }
  }
  return reach;
}

// Smallest total the expert commit aims for; total > threat is assumed.
int commit_target(int threat, int total) { return std::min(threat + kExpertQuestMargin + 1, total); }

// Expert commitment without enumeration: the smallest reachable total >= target, then the
// lowest mask reaching exactly that total (built from the highest index down).
Action expert_commit(const GameState& state) {
  const auto candidates = mask_members(state.ready_mask());
  const int threat = state.staging_threat();
  std::vector<int> wp;
  int total = 0;
  for (const int c : candidates) {
    wp.push_back(state.character_def(c).willpower);
    total += wp.back();
  }
  if (total <= threat) return Action::commit(0);
  const auto reach = prefix_sums(wp, total);
  int best = commit_target(threat, total);
  while (!reach.back()[best]) ++best;
  std::uint64_t mask = 0;
  int need = best;
  for (int i = static_cast<int>(candidates.size()) - 1; i >= 0; --i) {
    if (reach[i][need]) continue;
    mask |= std::uint64_t{1} << candidates[i];
    need -= wp[i];
  }
  return Action::commit(mask);
}

struct KillPlan {
  int count;
  int sum;
  std::uint64_t mask;
};

// Fewest attackers, then least total attack, then lowest mask, with total >= need.
std::optional<KillPlan> smallest_killing_set(const GameState& state, const std::vector<int>& candidates, int need) {
  std::vector<int> atk;
  int total = 0;
  for (const int c : candidates) {
    atk.push_back(state.character_def(c).attack);
    total += atk.back();
  }
  if (total < need) return std::nullopt;
  if (need <= 0) need = 0;
  const std::size_t k = candidates.size();
  // reach[i][c][s]: some subset of the first i candidates has c members summing to s.
  std::vector<std::vector<std::vector<char>>> reach(
      k + 1, std::vector<std::vector<char>>(k + 1, std::vector<char>(total + 1, 0)));
  reach[0][0][0] = 1;
  for (std::size_t i = 0; i < k; ++i) {
    reach[i + 1] = reach[i];
    for (std::size_t c = 1; c <= i + 1; ++c) {
      for (int s = atk[i]; s <= total; ++s) {
        if (reach[i][c - 1][s - atk[i]]) reach[i + 1][c][s] = 1;
      }
    }
  }
  for (std::size_t c = 1; c <= k; ++c) {
    for (int s = need; s <= total; ++s) {
      if (!reach[k][c][s]) continue;
      std::uint64_t mask = 0;
      std::size_t cc = c;
      int ss = s;
      for (int i = static_cast<int>(k) - 1; i >= 0; --i) {
        if (reach[i][cc][ss]) continue;
        mask |= std::uint64_t{1} << candidates[i];
        --cc;
        ss -= atk[i];
      }
      return KillPlan{static_cast<int>(c), s, mask};
    }
  }
  return std::nullopt;
}

Action expert_attack(const GameState& state) {
  const auto candidates = mask_members(state.ready_mask());
  if (candidates.empty()) return Action::pass();
  std::optional<std::pair<int, KillPlan>> best;
  for (const int j : attackable_enemies(state)) {
    const auto& e = state.engagement_area[j];
    const auto& def = state.card(e.card);
    const auto plan = smallest_killing_set(state, candidates, hitpoints_left(state, e) + def.defense);
    if (!plan) continue;
    if (!best || def.attack > state.card(state.engagement_area[best->first].card).attack) best = {{j, *plan}};
  }
  if (!best) return Action::pass();
  return Action::attack(static_cast<std::uint8_t>(best->first), best->second.mask);
}

Action expert_planning(const GameState& state) {
  std::optional<Action> best;
  std::vector<DefId> cards;
  for (const CardId c : state.hand) cards.push_back(state.def_of(c));
  std::sort(cards.begin(), cards.end());
  cards.erase(std::unique(cards.begin(), cards.end()), cards.end());
  if (state.character_count() >= 64) return Action::end_planning();
  for (const DefId card : cards) {
    const auto& def = state.scenario->def(card);
    if (def.kind != CardKind::Ally) continue;
    const auto payment = canonical_payment(state, card);
    if (!payment) continue;
    if (best) {
      const auto& cur = state.scenario->def(best->card);
      if (std::tuple(-def.willpower, def.cost) >= std::tuple(-cur.willpower, cur.cost)) continue;
    }
    best = Action::play_card(card, *payment);
  }
  return best.value_or(Action::end_planning());
}

Action expert_travel(const GameState& state, std::span<const Action> actions) {
  const Action* best = nullptr;
  if (!state.active_location) {
    for (const auto& a : actions) {
      if (a.kind != ActionKind::TravelTo || a.card == kNoDef) continue;
      if (!best || state.scenario->def(a.card).threat > state.scenario->def(best->card).threat) best = &a;
    }
  }
  if (best) return *best;
  const auto stay = Action::travel(std::nullopt);
  return contains(actions, stay) ? stay : actions.front();
}

Action fallback(std::span<const Action> actions, const Action& preferred) {
  return contains(actions, preferred) ? preferred : actions.front();
}

}  // namespace

std::string_view to_string(PolicyKind p) { return p == PolicyKind::Random ? "random" : "expert"; }

Action random_choose(const GameState& state, std::span<const Action> actions, Rng& rng) {
  if (actions.empty()) throw InvariantViolation("random_choose: empty action list");
  if (actions.size() == 1) return actions.front();
  switch (state.stage) {
    case StageId::CommitCharacters: {
      const auto pick = sample_commit(state, rng, [&](std::uint64_t m) { return contains(actions, Action::commit(m)); });
      return fallback(actions, pick);
    }
    case StageId::DeclareDefenders: {
      const auto pick = Action::defend(sample_defenders(state, rng));
      if (contains(actions, pick)) return pick;
      return actions[uniform_index(actions.size(), rng)];
    }
    default:
      return actions[uniform_index(actions.size(), rng)];
  }
}

Action random_action(const GameState& state, Rng& rng) {
  switch (state.stage) {
    case StageId::CommitCharacters: {
      if (mask_willpower(state, state.ready_mask()) <= state.staging_threat()) return Action::commit(0);
      return sample_commit(state, rng, [&](std::uint64_t m) { return commit_is_legal(state, m); });
    }
    case StageId::DeclareDefenders: {
      if (state.ready_mask() == 0 || state.engagement_area.empty()) {
        return Action::defend(std::vector<std::int8_t>(state.engagement_area.size(), kUndefended));
      }
      return Action::defend(sample_defenders(state, rng));
    }
    case StageId::DeclareAttackers: {
      // Index into the canonical list: (enemy, subset) pairs in order, Pass last.
      const auto candidates = mask_members(state.ready_mask());
      const auto enemies = attackable_enemies(state);
      if (candidates.empty() || enemies.empty()) return Action::pass();
      if (candidates.size() > 56) return random_choose(state, legal_actions(state), rng);
      const std::uint64_t per_enemy = (std::uint64_t{1} << candidates.size()) - 1;
      const std::uint64_t count = per_enemy * enemies.size() + 1;
      const auto index = std::uniform_int_distribution<std::uint64_t>(0, count - 1)(rng);
      if (index == count - 1) return Action::pass();
      return Action::attack(static_cast<std::uint8_t>(enemies[index / per_enemy]),
                            expand_subset(index % per_enemy + 1, candidates));
    }
    default:
      return random_choose(state, legal_actions(state), rng);
  }
}

Action expert_choose(const GameState& state, std::span<const Action> actions) {
  if (actions.empty()) throw InvariantViolation("expert_choose: empty action list");
  if (actions.size() == 1) return actions.front();
  switch (state.stage) {
    case StageId::Planning: {
      const Action* best = nullptr;
      for (const auto& a : actions) {
        if (a.kind != ActionKind::PlayCard) continue;
        if (best) {
          const auto& d = state.scenario->def(a.card);
          const auto& cur = state.scenario->def(best->card);
          if (std::tuple(-d.willpower, d.cost, a.card) > std::tuple(-cur.willpower, cur.cost, best->card)) continue;
          if (a.card == best->card) {
            const auto canonical = canonical_payment(state, a.card);
            if (!canonical || a.payment != *canonical) continue;
          }
        }
        best = &a;
      }
      return best ? *best : fallback(actions, Action::end_planning());
    }
    case StageId::CommitCharacters: {
      const int threat = state.staging_threat();
      const int total = mask_willpower(state, state.ready_mask());
      if (total <= threat) return fallback(actions, Action::commit(0));
      const int target = commit_target(threat, total);
      const Action* best = nullptr;
      const Action* largest = nullptr;
      for (const auto& a : actions) {
        if (a.kind != ActionKind::CommitSubset || a.characters == 0) continue;
        const int sum = mask_willpower(state, a.characters);
        if (sum >= target && (!best || std::pair(sum, a.characters) < std::pair(mask_willpower(state, best->characters),
                                                                               best->characters))) {
          best = &a;
        }
        if (!largest || sum > mask_willpower(state, largest->characters)) largest = &a;
      }
      // Above the enumeration cap the list may lack the target subset.
      if (!best) best = largest;
      return best ? *best : fallback(actions, Action::commit(0));
    }
    case StageId::Travel:
      return expert_travel(state, actions);
    case StageId::DeclareDefenders: {
      const auto pick = Action::defend(expert_defenders(state));
      return fallback(actions, contains(actions, pick)
                                   ? pick
                                   : Action::defend(std::vector<std::int8_t>(state.engagement_area.size(), kUndefended)));
    }
    case StageId::DeclareAttackers: {
      const Action* best = nullptr;
      std::tuple<int, int, int, int, std::uint64_t> best_key{};
      for (const auto& a : actions) {
        if (a.kind != ActionKind::DeclareAttack) continue;
        const auto& e = state.engagement_area[a.enemy];
        const auto& def = state.card(e.card);
        const int sum = mask_attack(state, a.characters);
        if (sum - def.defense < hitpoints_left(state, e)) continue;
        const std::tuple key{-def.attack, int(a.enemy), std::popcount(a.characters), sum, a.characters};
        if (!best || key < best_key) {
          best = &a;
          best_key = key;
        }
      }
      return best ? *best : fallback(actions, Action::pass());
    }
    default:
      throw InvariantViolation("expert_choose at ruled stage " + std::string(to_string(state.stage)));
  }
}

Action expert_action(const GameState& state) {
  switch (state.stage) {
    case StageId::Planning: return expert_planning(state);
    case StageId::CommitCharacters:
      // Above the cap the listed commitments are the minimal ones only.
      if (std::popcount(state.ready_mask()) > kFullCommitEnumerationLimit) {
        return expert_choose(state, legal_actions(state));
      }
      return expert_commit(state);
    case StageId::Travel: return expert_travel(state, legal_actions(state));
    case StageId::DeclareDefenders: return Action::defend(expert_defenders(state));
    case StageId::DeclareAttackers: return expert_attack(state);
    default: throw InvariantViolation("expert_action at ruled stage " + std::string(to_string(state.stage)));
  }
}

}  // namespace lotr
