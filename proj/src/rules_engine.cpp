#include "lotr/rules_engine.hpp"

#include <algorithm>
#include <sstream>

#include "lotr/action_space.hpp"
#include "lotr/errors.hpp"

namespace lotr {

namespace {

void expect_stage(const GameState& state, StageId expected, const char* op) {
  if (state.stage != expected) {
    throw InvariantViolation(std::string(op) + " called at stage " + std::string(to_string(state.stage)));
  }
}

void advance_stage(GameState& state) {
  state.stage = static_cast<StageId>(static_cast<int>(state.stage) + 1);
}

void shuffle(std::vector<CardId>& cards, Rng& rng) { std::shuffle(cards.begin(), cards.end(), rng); }

void draw_one(GameState& state) {
  if (state.player_deck.empty()) return;
  state.hand.push_back(state.player_deck.back());
  state.player_deck.pop_back();
}

void play_card(GameState& state, const Action& action) {
  const auto it = std::find_if(state.hand.begin(), state.hand.end(),
                               [&](CardId c) { return state.def_of(c) == action.card; });
  if (it == state.hand.end()) throw IllegalAction("PlayCard: card not in hand");
  const CardId card = *it;
  state.hand.erase(it);
  for (std::size_t h = 0; h < state.heroes.size(); ++h) {
    if (action.payment[h] > state.heroes[h].resources) throw IllegalAction("PlayCard: payment exceeds pool");
    state.heroes[h].resources -= action.payment[h];
  }
  state.allies.push_back(CharacterInPlay{card});
}

void tap_mask(GameState& state, std::uint64_t mask, bool commit) {
  for (int i = 0; i < state.character_count(); ++i) {
    if (!(mask >> i & 1)) continue;
    auto& c = state.character(i);
    if (c.tapped) throw IllegalAction("character " + std::to_string(i) + " is already tapped");
    c.tapped = true;
    c.committed = commit;
  }
}

bool any_attack_possible(const GameState& state) {
  if (state.ready_mask() == 0) return false;
  return std::any_of(state.engagement_area.begin(), state.engagement_area.end(),
                     [&](const EnemyInPlay& e) { return !e.targeted && state.alive(e); });
}

}  // namespace

std::string_view to_string(StageId s) {
  static constexpr std::array<std::string_view, 13> names = {
      "Resource",       "Draw",           "Planning",         "CommitCharacters",    "StagingReveal",
      "QuestResolution", "Travel",        "EncounterCheck",   "DeclareDefenders",    "ResolveEnemyAttacks",
      "DeclareAttackers", "ResolvePlayerAttacks", "Refresh"};
  return names[static_cast<int>(s)];
}

bool is_decision_stage(StageId s) {
  return s == StageId::Planning || s == StageId::CommitCharacters || s == StageId::Travel ||
         s == StageId::DeclareDefenders || s == StageId::DeclareAttackers;
}

std::string to_string(TerminalStatus status) {
  switch (status.kind) {
    case TerminalStatus::Kind::Ongoing: return "Ongoing";
    case TerminalStatus::Kind::Win: return "Win";
    case TerminalStatus::Kind::Loss:
      return status.reason == TerminalStatus::Reason::ThreatLimit ? "Loss(ThreatLimit)" : "Loss(HeroesDead)";
  }
  return "?";
}

std::uint64_t GameState::ready_mask() const {
  std::uint64_t mask = 0;
  for (int i = 0; i < character_count(); ++i) {
    const auto& c = character(i);
    if (!c.tapped && alive(c)) mask |= std::uint64_t{1} << i;
  }
  return mask;
}

int GameState::staging_threat() const {
  int total = 0;
  for (const CardId c : staging_area) total += card(c).threat;
  return total;
}

bool GameState::any_hero_alive() const {
  return std::any_of(heroes.begin(), heroes.end(), [&](const CharacterInPlay& h) { return alive(h); });
}

GameState init_game(const BuiltScenario& scenario, std::uint64_t seed) {
  GameState state;
  state.scenario = &scenario;
  state.rng.seed(seed);
  state.quest_target = scenario.quest_target;
  for (const CardId h : scenario.heroes) {
    state.heroes.push_back(CharacterInPlay{h});
    state.threat_level += scenario.card(h).threat_cost;
  }
  state.player_deck = scenario.player_deck;
  state.encounter_deck = scenario.encounter_deck;
  shuffle(state.player_deck, state.rng);
  shuffle(state.encounter_deck, state.rng);
  for (int i = 0; i < kOpeningHand; ++i) draw_one(state);
  state.staging_area = scenario.pre_staged;
  state.stage = StageId::Resource;
  state.round_number = 1;
  return state;
}

void resource_stage(GameState& state) {
  expect_stage(state, StageId::Resource, "resource_stage");
  for (auto& h : state.heroes) ++h.resources;
  advance_stage(state);
  draw_stage(state);
}

void draw_stage(GameState& state) {
  expect_stage(state, StageId::Draw, "draw_stage");
  draw_one(state);
  advance_stage(state);
}

void staging_reveal(GameState& state) {
  expect_stage(state, StageId::StagingReveal, "staging_reveal");
  if (state.encounter_deck.empty()) {
    state.encounter_deck.swap(state.encounter_discard);
    shuffle(state.encounter_deck, state.rng);
  }
  if (!state.encounter_deck.empty()) {
    state.staging_area.push_back(state.encounter_deck.back());
    state.encounter_deck.pop_back();
  }
  advance_stage(state);
}

void quest_resolution(GameState& state) {
  expect_stage(state, StageId::QuestResolution, "quest_resolution");
  int willpower = 0;
  for (int i = 0; i < state.character_count(); ++i) {
    const auto& c = state.character(i);
    if (c.committed) willpower += state.card(c.card).willpower;
  }
  int diff = willpower - state.staging_threat();
  if (diff < 0) {
    state.threat_level -= diff;
  } else if (diff > 0) {
    if (state.active_location) {
      auto& loc = *state.active_location;
      const int room = state.card(loc.card).quest_points - loc.progress;
      if (diff >= room) {
        diff -= room;
        state.encounter_discard.push_back(loc.card);
        state.active_location.reset();
      } else {
        loc.progress += diff;
        diff = 0;
      }
    }
    state.quest_progress = std::min(state.quest_target, state.quest_progress + diff);
  }
  advance_stage(state);
}

void travel_apply(GameState& state, std::optional<DefId> location) {
  expect_stage(state, StageId::Travel, "travel_apply");
  if (location) {
    if (state.active_location) throw IllegalAction("TravelTo: a location is already active");
    const auto it = std::find_if(state.staging_area.begin(), state.staging_area.end(), [&](CardId c) {
      return state.def_of(c) == *location && state.card(c).kind == CardKind::Location;
    });
    if (it == state.staging_area.end()) throw IllegalAction("TravelTo: location not in staging area");
    state.active_location = LocationInPlay{*it};
    state.staging_area.erase(it);
  }
  advance_stage(state);
}

void engagement_check(GameState& state) {
  expect_stage(state, StageId::EncounterCheck, "engagement_check");
  auto keep = state.staging_area.begin();
  for (const CardId c : state.staging_area) {
    const auto& def = state.card(c);
    if (def.kind == CardKind::Enemy && def.engagement_cost <= state.threat_level) {
      state.engagement_area.push_back(EnemyInPlay{c});
    } else {
      *keep++ = c;
    }
  }
  state.staging_area.erase(keep, state.staging_area.end());
  advance_stage(state);
}

int resolve_attack(int attack, std::optional<int> defense) {
  if (!defense) return attack;
  return std::max(0, attack - *defense);
}

std::optional<int> undefended_target(const GameState& state) {
  std::optional<int> best;
  for (int i = 0; i < static_cast<int>(state.heroes.size()); ++i) {
    const auto& h = state.heroes[i];
    if (!state.alive(h)) continue;
    if (!best || state.remaining_hp(h) > state.remaining_hp(state.heroes[*best])) best = i;
  }
  return best;
}

void resolve_enemy_attacks(GameState& state) {
  expect_stage(state, StageId::ResolveEnemyAttacks, "resolve_enemy_attacks");
  for (auto& enemy : state.engagement_area) {
    const int attack = state.card(enemy.card).attack;
    if (enemy.defender != kUndefended) {
      auto& defender = state.character(enemy.defender);
      defender.damage += resolve_attack(attack, state.card(defender.card).defense);
      continue;
    }
    // With every hero down the game is already lost; remaining hits have no target.
    const auto target = undefended_target(state);
    if (!target) break;
    state.heroes[*target].damage += resolve_attack(attack, std::nullopt);
  }
  advance_stage(state);
}

void resolve_player_attacks(GameState& state) {
  expect_stage(state, StageId::ResolvePlayerAttacks, "resolve_player_attacks");
  for (auto& enemy : state.engagement_area) {
    if (!enemy.targeted) continue;
    enemy.damage += resolve_attack(enemy.pending_attack, state.card(enemy.card).defense);
  }
  advance_stage(state);
}

void refresh(GameState& state) {
  expect_stage(state, StageId::Refresh, "refresh");
  auto sweep = [&](std::vector<CharacterInPlay>& group) {
    auto keep = group.begin();
    for (auto& c : group) {
      if (state.alive(c)) *keep++ = c;
      else state.player_discard.push_back(c.card);
    }
    group.erase(keep, group.end());
  };
  sweep(state.heroes);
  sweep(state.allies);
  auto keep = state.engagement_area.begin();
  for (auto& e : state.engagement_area) {
    if (state.alive(e)) *keep++ = e;
    else state.encounter_discard.push_back(e.card);
  }
  state.engagement_area.erase(keep, state.engagement_area.end());

  for (auto* group : {&state.heroes, &state.allies}) {
    for (auto& c : *group) {
      c.tapped = false;
      c.committed = false;
    }
  }
  for (auto& e : state.engagement_area) {
    e.defender = kUndefended;
    e.targeted = false;
    e.pending_attack = 0;
  }
  state.threat_level += 1;
  state.round_number += 1;
  state.stage = StageId::Resource;
}

TerminalStatus terminal_status(const GameState& state) {
  using K = TerminalStatus::Kind;
  using R = TerminalStatus::Reason;
  if (state.threat_level >= kThreatLimit) return {K::Loss, R::ThreatLimit};
  if (!state.any_hero_alive()) return {K::Loss, R::HeroesDead};
  if (state.quest_progress >= state.quest_target) return {K::Win, R::None};
  return {};
}

void apply_decision(GameState& state, const Action& action) {
  auto mismatch = [&] {
    return IllegalAction(to_string(action) + " at stage " + std::string(to_string(state.stage)));
  };
  switch (state.stage) {
    case StageId::Planning:
      if (action.kind == ActionKind::PlayCard) play_card(state, action);
      else if (action.kind == ActionKind::EndPlanning) advance_stage(state);
      else throw mismatch();
      return;
    case StageId::CommitCharacters:
      if (action.kind != ActionKind::CommitSubset) throw mismatch();
      tap_mask(state, action.characters, true);
      advance_stage(state);
      return;
    case StageId::Travel:
      if (action.kind != ActionKind::TravelTo) throw mismatch();
      travel_apply(state, action.card == kNoDef ? std::nullopt : std::optional<DefId>(action.card));
      return;
    case StageId::DeclareDefenders:
      if (action.kind != ActionKind::AssignDefenders ||
          action.defenders.size() != state.engagement_area.size()) {
        throw mismatch();
      }
      for (std::size_t j = 0; j < action.defenders.size(); ++j) {
        const auto d = action.defenders[j];
        state.engagement_area[j].defender = d;
        if (d != kUndefended) tap_mask(state, std::uint64_t{1} << d, false);
      }
      advance_stage(state);
      return;
    case StageId::DeclareAttackers: {
      if (action.kind == ActionKind::Pass) {
        advance_stage(state);
        return;
      }
      if (action.kind != ActionKind::DeclareAttack || action.enemy >= state.engagement_area.size() ||
          action.characters == 0) {
        throw mismatch();
      }
      auto& enemy = state.engagement_area[action.enemy];
      if (enemy.targeted) throw mismatch();
      tap_mask(state, action.characters, false);
      int attack = 0;
      for (int i = 0; i < state.character_count(); ++i) {
        if (action.characters >> i & 1) attack += state.character_def(i).attack;
      }
      enemy.targeted = true;
      enemy.pending_attack = attack;
      if (!any_attack_possible(state)) advance_stage(state);
      return;
    }
    default:
      throw mismatch();
  }
}

void step(GameState& state, const std::optional<Action>& action) {
  if (is_decision_stage(state.stage)) {
    if (!action) throw IllegalAction("MissingDecision at stage " + std::string(to_string(state.stage)));
    const auto legal = legal_actions(state);
    if (std::find(legal.begin(), legal.end(), *action) == legal.end()) {
      throw IllegalAction("illegal action " + to_string(*action, state.scenario) + " at stage " +
                          std::string(to_string(state.stage)));
    }
    apply_decision(state, *action);
    return;
  }
  if (action) {
    throw IllegalAction("UnexpectedAction " + to_string(*action, state.scenario) + " at ruled stage " +
                        std::string(to_string(state.stage)));
  }
  switch (state.stage) {
    case StageId::Resource: resource_stage(state); break;
    case StageId::Draw: draw_stage(state); break;
    case StageId::StagingReveal: staging_reveal(state); break;
    case StageId::QuestResolution: quest_resolution(state); break;
    case StageId::EncounterCheck: engagement_check(state); break;
    case StageId::ResolveEnemyAttacks: resolve_enemy_attacks(state); break;
    case StageId::ResolvePlayerAttacks: resolve_player_attacks(state); break;
    case StageId::Refresh: refresh(state); break;
    default: throw InvariantViolation("unreachable stage");
  }
}

void advance_to_decision(GameState& state) {
  while (!is_decision_stage(state.stage) && terminal_status(state).ongoing()) step(state);
}

std::vector<CardId> zone_census(const GameState& state) {
  std::vector<CardId> all;
  all.reserve(state.scenario->instance_count());
  for (const auto* group : {&state.heroes, &state.allies}) {
    for (const auto& c : *group) all.push_back(c.card);
  }
  for (const auto* zone : {&state.hand, &state.player_deck, &state.player_discard, &state.encounter_deck,
                           &state.encounter_discard, &state.staging_area}) {
    all.insert(all.end(), zone->begin(), zone->end());
  }
  for (const auto& e : state.engagement_area) all.push_back(e.card);
  if (state.active_location) all.push_back(state.active_location->card);
  std::sort(all.begin(), all.end());
  return all;
}

std::string render(const GameState& state) {
  std::ostringstream out;
  const auto name = [&](CardId c) { return state.card(c).id; };
  const auto list = [&](const std::vector<CardId>& zone) {
    std::string s;
    for (const CardId c : zone) s += (s.empty() ? "" : ", ") + name(c);
    return s.empty() ? std::string("-") : s;
  };
  out << "round " << state.round_number << " stage " << to_string(state.stage) << " threat " << state.threat_level
      << " quest " << state.quest_progress << '/' << state.quest_target << " [" << to_string(terminal_status(state))
      << "]\n";
  for (int i = 0; i < state.character_count(); ++i) {
    const auto& c = state.character(i);
    const auto& d = state.card(c.card);
    out << "  " << (i < static_cast<int>(state.heroes.size()) ? "hero " : "ally ") << '#' << i << ' ' << d.id
        << " wp" << d.willpower << " atk" << d.attack << " def" << d.defense << " hp" << d.hitpoints - c.damage << '/'
        << d.hitpoints;
    if (i < static_cast<int>(state.heroes.size())) out << " res" << c.resources;
    if (c.tapped) out << " tapped";
    if (c.committed) out << " committed";
    out << '\n';
  }
  out << "  hand: " << list(state.hand) << '\n';
  out << "  staging: " << list(state.staging_area) << " (threat " << state.staging_threat() << ")\n";
  out << "  engaged:";
  if (state.engagement_area.empty()) out << " -";
  for (const auto& e : state.engagement_area) {
    out << ' ' << name(e.card) << "(hp" << state.card(e.card).hitpoints - e.damage << ')';
  }
  out << '\n';
  out << "  active location: ";
  if (state.active_location) {
    out << name(state.active_location->card) << ' ' << state.active_location->progress << '/'
        << state.card(state.active_location->card).quest_points;
  } else {
    out << '-';
  }
  out << '\n';
  out << "  player deck " << state.player_deck.size() << ", discard " << list(state.player_discard) << '\n';
  out << "  encounter deck " << state.encounter_deck.size() << ", discard " << list(state.encounter_discard)
      << '\n';
  return out.str();
}

std::ostream& operator<<(std::ostream& os, const GameState& state) { return os << render(state); }

}  // namespace lotr
