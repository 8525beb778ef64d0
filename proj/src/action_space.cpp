#include "lotr/action_space.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

#include "lotr/errors.hpp"

namespace lotr {

namespace {

constexpr int kMaxCharacters = 64;

std::vector<int> ready_candidates(const GameState& state) { return mask_members(state.ready_mask()); }

void planning_actions(const GameState& state, std::vector<Action>& out) {
  std::vector<DefId> cards;
  for (const CardId c : state.hand) cards.push_back(state.def_of(c));
  std::sort(cards.begin(), cards.end());
  cards.erase(std::unique(cards.begin(), cards.end()), cards.end());

  if (state.character_count() < kMaxCharacters) {
    for (const DefId card : cards) {
      const auto& def = state.scenario->def(card);
      if (def.kind != CardKind::Ally) continue;
      std::vector<int> payers;
      for (int h = 0; h < static_cast<int>(state.heroes.size()); ++h) {
        const auto& hero = state.heroes[h];
        if (state.alive(hero) && state.card(hero.card).sphere == def.sphere) payers.push_back(h);
      }
      std::array<std::uint8_t, 3> payment{};
      auto split = [&](auto&& self, std::size_t i, int remaining) -> void {
        if (i == payers.size()) {
          if (remaining == 0) out.push_back(Action::play_card(card, payment));
          return;
        }
        const int h = payers[i];
        const int most = std::min(remaining, state.heroes[h].resources);
        for (int take = 0; take <= most; ++take) {
          payment[h] = static_cast<std::uint8_t>(take);
          self(self, i + 1, remaining - take);
        }
        payment[h] = 0;
      };
      split(split, 0, def.cost);
    }
  }
  out.push_back(Action::end_planning());
}

// Minimal qualifying subsets via DFS over candidates in descending willpower:
// once a prefix qualifies, adding smaller members can only break minimality.
void minimal_commits(const GameState& state, const std::vector<int>& candidates, int threat,
                     std::vector<Action>& out) {
  std::vector<int> order;
  for (const int c : candidates) {
    if (state.character_def(c).willpower > 0) order.push_back(c);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return state.character_def(a).willpower > state.character_def(b).willpower;
  });
  std::vector<int> suffix(order.size() + 1, 0);
  for (int i = static_cast<int>(order.size()) - 1; i >= 0; --i) {
    suffix[i] = suffix[i + 1] + state.character_def(order[i]).willpower;
  }
  auto dfs = [&](auto&& self, std::size_t i, std::uint64_t mask, int sum, int smallest) -> void {
    if (sum > threat) {
      if (sum - smallest <= threat) out.push_back(Action::commit(mask));
      return;
    }
    if (i == order.size() || sum + suffix[i] <= threat) return;
    const int w = state.character_def(order[i]).willpower;
    self(self, i + 1, mask | std::uint64_t{1} << order[i], sum + w, w);
    self(self, i + 1, mask, sum, smallest);
  };
  dfs(dfs, 0, 0, 0, 0);
}

void commit_actions(const GameState& state, std::vector<Action>& out) {
  const auto candidates = ready_candidates(state);
  const int threat = state.staging_threat();
  out.push_back(Action::commit(0));
  if (static_cast<int>(candidates.size()) > kFullCommitEnumerationLimit) {
    minimal_commits(state, candidates, threat, out);
    return;
  }
  const std::uint64_t subsets = std::uint64_t{1} << candidates.size();
  for (std::uint64_t sub = 1; sub < subsets; ++sub) {
    const auto mask = expand_subset(sub, candidates);
    if (mask_willpower(state, mask) > threat) out.push_back(Action::commit(mask));
  }
}

void travel_actions(const GameState& state, std::vector<Action>& out) {
  out.push_back(Action::travel(std::nullopt));
  if (state.active_location) return;
  for (const CardId c : state.staging_area) {
    if (state.card(c).kind == CardKind::Location) out.push_back(Action::travel(state.def_of(c)));
  }
}

void defender_actions(const GameState& state, std::vector<Action>& out) {
  const auto candidates = ready_candidates(state);
  const std::size_t enemies = state.engagement_area.size();
  std::vector<std::int8_t> assignment(enemies, kUndefended);
  std::uint64_t used = 0;
  auto assign = [&](auto&& self, std::size_t j) -> void {
    if (j == enemies) {
      out.push_back(Action::defend(assignment));
      return;
    }
    assignment[j] = kUndefended;
    self(self, j + 1);
    for (const int c : candidates) {
      if (used >> c & 1) continue;
      used |= std::uint64_t{1} << c;
      assignment[j] = static_cast<std::int8_t>(c);
      self(self, j + 1);
      used &= ~(std::uint64_t{1} << c);
    }
    assignment[j] = kUndefended;
  };
  assign(assign, 0);
}

void attack_actions(const GameState& state, std::vector<Action>& out) {
  const auto candidates = ready_candidates(state);
  if (!candidates.empty()) {
    const std::uint64_t subsets = std::uint64_t{1} << candidates.size();
    for (std::size_t j = 0; j < state.engagement_area.size(); ++j) {
      const auto& enemy = state.engagement_area[j];
      if (enemy.targeted || !state.alive(enemy)) continue;
      for (std::uint64_t sub = 1; sub < subsets; ++sub) {
        out.push_back(Action::attack(static_cast<std::uint8_t>(j), expand_subset(sub, candidates)));
      }
    }
  }
  out.push_back(Action::pass());
}

}  // namespace

std::vector<int> mask_members(std::uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

std::uint64_t expand_subset(std::uint64_t compact, std::span<const int> candidates) {
  std::uint64_t mask = 0;
  for (std::size_t i = 0; compact; ++i, compact >>= 1) {
    if (compact & 1) mask |= std::uint64_t{1} << candidates[i];
  }
  return mask;
}

int mask_willpower(const GameState& state, std::uint64_t mask) {
  int sum = 0;
  for (; mask; mask &= mask - 1) sum += state.character_def(std::countr_zero(mask)).willpower;
  return sum;
}

int mask_attack(const GameState& state, std::uint64_t mask) {
  int sum = 0;
  for (; mask; mask &= mask - 1) sum += state.character_def(std::countr_zero(mask)).attack;
  return sum;
}

bool is_minimal_commit(const GameState& state, std::uint64_t mask) {
  if (mask == 0) return false;
  const int threat = state.staging_threat();
  const int sum = mask_willpower(state, mask);
  if (sum <= threat) return false;
  for (auto m = mask; m; m &= m - 1) {
    if (sum - state.character_def(std::countr_zero(m)).willpower > threat) return false;
  }
  return true;
}

bool commit_is_legal(const GameState& state, std::uint64_t mask) {
  if (mask == 0) return true;
  const auto ready = state.ready_mask();
  if ((mask & ~ready) != 0) return false;
  if (std::popcount(ready) > kFullCommitEnumerationLimit) return is_minimal_commit(state, mask);
  return mask_willpower(state, mask) > state.staging_threat();
}

std::optional<std::array<std::uint8_t, 3>> canonical_payment(const GameState& state, DefId card) {
  const auto& def = state.scenario->def(card);
  std::vector<int> payers;
  for (int h = 0; h < static_cast<int>(state.heroes.size()); ++h) {
    const auto& hero = state.heroes[h];
    if (state.alive(hero) && state.card(hero.card).sphere == def.sphere) payers.push_back(h);
  }
  std::stable_sort(payers.begin(), payers.end(),
                   [&](int a, int b) { return state.heroes[a].resources > state.heroes[b].resources; });
  std::array<std::uint8_t, 3> payment{};
  int remaining = def.cost;
  for (const int h : payers) {
    const int take = std::min(remaining, state.heroes[h].resources);
    payment[h] = static_cast<std::uint8_t>(take);
    remaining -= take;
  }
  if (remaining > 0) return std::nullopt;
  return payment;
}

bool survives_hit(const GameState& state, int character, int attack) {
  const auto& c = state.character(character);
  return resolve_attack(attack, state.card(c.card).defense) < state.remaining_hp(c);
}

bool defense_is_sound(const GameState& state, const Action& assignment) {
  const auto target = undefended_target(state);
  for (std::size_t j = 0; j < assignment.defenders.size(); ++j) {
    const auto d = assignment.defenders[j];
    if (d == kUndefended) continue;
    const int attack = state.card(state.engagement_area[j].card).attack;
    if (survives_hit(state, d, attack)) continue;
    const bool hit_kills_hero = target && attack >= state.remaining_hp(state.heroes[*target]);
    if (!hit_kills_hero) return false;
  }
  return true;
}

std::vector<Action> legal_actions(const GameState& state) {
  std::vector<Action> out;
  switch (state.stage) {
    case StageId::Planning: planning_actions(state, out); break;
    case StageId::CommitCharacters: commit_actions(state, out); break;
    case StageId::Travel: travel_actions(state, out); break;
    case StageId::DeclareDefenders: defender_actions(state, out); break;
    case StageId::DeclareAttackers: attack_actions(state, out); break;
    default:
      throw InvariantViolation("legal_actions called at ruled stage " + std::string(to_string(state.stage)));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Action> expert_expansion_filter(const GameState& state, std::span<const Action> actions) {
  if (actions.size() <= 1) return {actions.begin(), actions.end()};
  std::vector<Action> out;
  switch (state.stage) {
    case StageId::Planning: {
      for (std::size_t i = 0; i < actions.size(); ++i) {
        const auto& a = actions[i];
        if (a.kind != ActionKind::PlayCard) {
          out.push_back(a);
          continue;
        }
        const bool first_of_card = i == 0 || actions[i - 1].kind != ActionKind::PlayCard || actions[i - 1].card != a.card;
        if (!first_of_card) continue;
        // Keep the canonical split if listed, otherwise the first listed one.
        const auto canonical = canonical_payment(state, a.card);
        const Action* keep = &a;
        for (std::size_t k = i; k < actions.size() && actions[k].kind == ActionKind::PlayCard && actions[k].card == a.card; ++k) {
          if (canonical && actions[k].payment == *canonical) keep = &actions[k];
        }
        out.push_back(*keep);
      }
      break;
    }
    case StageId::CommitCharacters:
      for (const auto& a : actions) {
        if (a.characters == 0 || is_minimal_commit(state, a.characters)) out.push_back(a);
      }
      break;
    case StageId::DeclareDefenders:
      for (const auto& a : actions) {
        if (defense_is_sound(state, a)) out.push_back(a);
      }
      break;
    default:
      out.assign(actions.begin(), actions.end());
  }
  if (out.empty()) out.push_back(actions.front());
  return out;
}

std::string to_string(const Action& action, const BuiltScenario* scenario) {
  std::ostringstream out;
  const auto card_name = [&](DefId d) {
    return scenario && d < scenario->defs.size() ? scenario->def(d).id : "def" + std::to_string(d);
  };
  const auto members = [&](std::uint64_t mask) {
    std::string s = "{";
    for (const int i : mask_members(mask)) s += (s.size() > 1 ? "," : "") + std::to_string(i);
    return s + "}";
  };
  switch (action.kind) {
    case ActionKind::PlayCard:
      out << "PlayCard(" << card_name(action.card) << " pay " << int(action.payment[0]) << '/'
          << int(action.payment[1]) << '/' << int(action.payment[2]) << ')';
      break;
    case ActionKind::EndPlanning: out << "EndPlanning"; break;
    case ActionKind::CommitSubset: out << "Commit" << members(action.characters); break;
    case ActionKind::TravelTo:
      out << "TravelTo(" << (action.card == kNoDef ? std::string("None") : card_name(action.card)) << ')';
      break;
    case ActionKind::AssignDefenders:
      out << "AssignDefenders[";
      for (std::size_t j = 0; j < action.defenders.size(); ++j) {
        if (j) out << ',';
        if (action.defenders[j] == kUndefended) out << '-';
        else out << int(action.defenders[j]);
      }
      out << ']';
      break;
    case ActionKind::DeclareAttack:
      out << "DeclareAttack(enemy " << int(action.enemy) << ", " << members(action.characters) << ')';
      break;
    case ActionKind::Pass: out << "Pass"; break;
  }
  return out.str();
}

}  // namespace lotr
