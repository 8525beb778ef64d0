#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lotr/action.hpp"
#include "lotr/card_model.hpp"
#include "lotr/random.hpp"

namespace lotr {

inline constexpr int kThreatLimit = 50;
inline constexpr int kOpeningHand = 6;

/// The 13 stages of a round, in order. Refresh wraps to Resource.
enum class StageId : std::uint8_t {
  Resource,
  Draw,
  Planning,
  CommitCharacters,
  StagingReveal,
  QuestResolution,
  Travel,
  EncounterCheck,
  DeclareDefenders,
  ResolveEnemyAttacks,
  DeclareAttackers,
  ResolvePlayerAttacks,
  Refresh,
};
std::string_view to_string(StageId s);
bool is_decision_stage(StageId s);

struct CharacterInPlay {
  CardId card = 0;
  int damage = 0;
  int resources = 0;  // heroes only
  bool tapped = false;
  bool committed = false;
  bool operator==(const CharacterInPlay&) const = default;
};

struct EnemyInPlay {
  CardId card = 0;
  int damage = 0;
  // Per-round combat bookkeeping, cleared at Refresh.
  std::int8_t defender = kUndefended;
  bool targeted = false;
  int pending_attack = 0;
  bool operator==(const EnemyInPlay&) const = default;
};

struct LocationInPlay {
  CardId card = 0;
  int progress = 0;
  bool operator==(const LocationInPlay&) const = default;
};

enum class Outcome : std::uint8_t { Loss, Win };

struct TerminalStatus {
  enum class Kind : std::uint8_t { Ongoing, Win, Loss } kind = Kind::Ongoing;
  enum class Reason : std::uint8_t { None, ThreatLimit, HeroesDead } reason = Reason::None;

  bool ongoing() const { return kind == Kind::Ongoing; }
  bool operator==(const TerminalStatus&) const = default;
};
std::string to_string(TerminalStatus status);

/// Full snapshot of one solo game. Copies are independent, RNG position
/// included. `scenario` is non-owning and must outlive the state.
struct GameState {
  const BuiltScenario* scenario = nullptr;
  int round_number = 1;
  StageId stage = StageId::Resource;
  int threat_level = 0;
  std::vector<CharacterInPlay> heroes;
  std::vector<CharacterInPlay> allies;
  std::vector<CardId> hand;
  std::vector<CardId> player_deck;  // back = top
  std::vector<CardId> player_discard;
  std::vector<CardId> encounter_deck;  // back = top
  std::vector<CardId> encounter_discard;
  std::vector<CardId> staging_area;
  std::vector<EnemyInPlay> engagement_area;
  std::optional<LocationInPlay> active_location;
  int quest_progress = 0;
  int quest_target = 1;
  Rng rng;

  const CardDef& card(CardId c) const { return scenario->card(c); }
  DefId def_of(CardId c) const { return scenario->def_of(c); }

  int character_count() const { return static_cast<int>(heroes.size() + allies.size()); }
  CharacterInPlay& character(int i) { return i < static_cast<int>(heroes.size()) ? heroes[i] : allies[i - heroes.size()]; }
  const CharacterInPlay& character(int i) const {
    return i < static_cast<int>(heroes.size()) ? heroes[i] : allies[i - heroes.size()];
  }
  const CardDef& character_def(int i) const { return card(character(i).card); }

  bool alive(const CharacterInPlay& c) const { return c.damage < card(c.card).hitpoints; }
  bool alive(const EnemyInPlay& e) const { return e.damage < card(e.card).hitpoints; }
  int remaining_hp(const CharacterInPlay& c) const { return card(c.card).hitpoints - c.damage; }
  /// Alive, untapped characters as a bitmask over character indices.
  std::uint64_t ready_mask() const;
  int staging_threat() const;
  bool any_hero_alive() const;
};

GameState init_game(const BuiltScenario& scenario, std::uint64_t seed);

// Individual stage transitions. Each checks that `state.stage` matches and
// advances the stage cursor.
void resource_stage(GameState& state);  // also performs the Draw stage
void draw_stage(GameState& state);
void staging_reveal(GameState& state);
void quest_resolution(GameState& state);
void travel_apply(GameState& state, std::optional<DefId> location);
void engagement_check(GameState& state);
void resolve_enemy_attacks(GameState& state);
void resolve_player_attacks(GameState& state);
void refresh(GameState& state);

/// Damage dealt by one attack: max(0, attack - defense) when defended, the
/// full attack value when undefended.
int resolve_attack(int attack, std::optional<int> defense);

/// Hero index that takes an undefended attack: the living hero with the most
/// remaining hitpoints, lowest index on ties; nullopt when none is alive.
std::optional<int> undefended_target(const GameState& state);

/// Loss checks take precedence over the win check.
TerminalStatus terminal_status(const GameState& state);

/// Validated transition: ruled stages take no action, decision stages need a
/// member of legal_actions(state). Throws IllegalAction otherwise.
void step(GameState& state, const std::optional<Action>& action = std::nullopt);

/// Applies a decision without checking legality. Callers guarantee the action
/// came from legal_actions() (or an equivalent policy) for this state.
void apply_decision(GameState& state, const Action& action);

/// Runs ruled and random stages until a decision stage or a terminal state.
void advance_to_decision(GameState& state);

/// Every card instance across all zones, sorted. Equals 0..N-1 in a sound state.
std::vector<CardId> zone_census(const GameState& state);

/// Zone-by-zone text dump for logs and failure reports.
std::string render(const GameState& state);
std::ostream& operator<<(std::ostream& os, const GameState& state);

}  // namespace lotr
