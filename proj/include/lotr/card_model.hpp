#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lotr {

enum class Sphere : std::uint8_t { Spirit, Tactics, Lore, Leadership };
enum class CardKind : std::uint8_t { Hero, Ally, Enemy, Location };
enum class Difficulty : std::uint8_t { Easy, Medium, Hard };

std::string_view to_string(Sphere s);
std::string_view to_string(CardKind k);
std::string_view to_string(Difficulty d);
std::optional<Sphere> parse_sphere(std::string_view s);
std::optional<CardKind> parse_kind(std::string_view s);
// Accepts "Easy" as well as the CLI spelling "easy".
std::optional<Difficulty> parse_difficulty(std::string_view s);

/// Immutable statistics of one card type. Stats that do not apply to the
/// card's kind stay zero and are never read.
struct CardDef {
  std::string id;
  std::string name;
  CardKind kind = CardKind::Ally;
  std::optional<Sphere> sphere;
  int cost = 0;
  int threat_cost = 0;
  int willpower = 0;
  int attack = 0;
  int defense = 0;
  int hitpoints = 0;
  int engagement_cost = 0;
  int threat = 0;
  int quest_points = 0;

  bool is_character() const { return kind == CardKind::Hero || kind == CardKind::Ally; }
  bool operator==(const CardDef&) const = default;
};

/// Stat keys that a record of the given kind must carry (besides id/kind/name).
const std::vector<std::string_view>& applicable_stats(CardKind kind);

/// Card definitions keyed by id, kept in load order.
class CardLibrary {
 public:
  CardLibrary() = default;
  explicit CardLibrary(std::vector<CardDef> cards);  // throws ConfigError on duplicate ids

  const CardDef* find(std::string_view id) const;
  const CardDef& at(std::string_view id) const;  // throws ConfigError
  const std::vector<CardDef>& cards() const { return cards_; }
  std::size_t size() const { return cards_.size(); }
  bool empty() const { return cards_.empty(); }

  bool operator==(const CardLibrary& other) const { return cards_ == other.cards_; }

 private:
  std::vector<CardDef> cards_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Parses the `key=value` record format (records separated by blank lines,
/// `#` lines are comments). Errors name the offending record id.
CardLibrary load_card_library(std::string_view text);
CardLibrary load_card_library_file(const std::string& path);
/// Inverse of load_card_library.
std::string emit_card_library(const CardLibrary& library);

struct DeckEntry {
  std::string card_id;
  int copies = 1;
  bool operator==(const DeckEntry&) const = default;
};

struct DeckSpec {
  std::vector<DeckEntry> entries;
  int declared_size = 0;  // player deck only; encounter sizes are fixed per difficulty
  int total_copies() const;
  bool operator==(const DeckSpec&) const = default;
};

struct ScenarioConfig {
  std::string name;
  Difficulty difficulty = Difficulty::Easy;
  std::vector<std::string> heroes;
  std::vector<std::string> pre_staged;
  int quest_target = 8;
  DeckSpec player_deck;
  DeckSpec encounter_deck;
  bool operator==(const ScenarioConfig&) const = default;
};

struct EncounterShape {
  int cards;
  int types;
};
/// Encounter deck card count and distinct-type count for each difficulty.
EncounterShape encounter_shape(Difficulty d);

/// Parses a scenario document with `[scenario]`, `[player_deck]` and
/// `[encounter_deck]` sections; deck lines read `card_id xN`.
ScenarioConfig load_scenario(std::string_view text);
ScenarioConfig load_scenario_file(const std::string& path);
std::string emit_scenario(const ScenarioConfig& config);

enum class ViolationCode : std::uint8_t {
  UnknownCard,
  WrongCardKind,
  HeroCountViolation,
  DuplicateHero,
  InvalidCopyCount,
  DuplicateDeckEntry,
  DeckSizeMismatch,
  EncounterDeckShape,
  ScenarioSetupViolation,
  InvalidQuestTarget,
};
std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string subject;  // card id or field name
  std::string message;
};

std::vector<Violation> validate_scenario(const ScenarioConfig& config, const CardLibrary& library);

using DefId = std::uint16_t;   // index into BuiltScenario::defs
using CardId = std::uint16_t;  // one physical card instance
inline constexpr DefId kNoDef = 0xFFFF;

/// A scenario materialized into card instances. Decks are unshuffled; the
/// engine shuffles them with the game seed. `defs` is sorted by card id so
/// DefId order equals id order.
struct BuiltScenario {
  std::string name;
  Difficulty difficulty = Difficulty::Easy;
  int quest_target = 8;
  std::vector<CardDef> defs;
  std::vector<DefId> instance_def;  // CardId -> DefId
  std::vector<CardId> player_deck;
  std::vector<CardId> encounter_deck;
  std::vector<CardId> pre_staged;
  std::array<CardId, 3> heroes{};

  const CardDef& def(DefId d) const { return defs[d]; }
  const CardDef& card(CardId c) const { return defs[instance_def[c]]; }
  DefId def_of(CardId c) const { return instance_def[c]; }
  std::size_t instance_count() const { return instance_def.size(); }
  std::optional<DefId> find_def(std::string_view id) const;
};

/// Throws ConfigError listing every violation when the config is invalid.
BuiltScenario build_scenario(const ScenarioConfig& config, const CardLibrary& library);

// Reference data compiled into the binary (synthetic stats, see data/).
std::string_view bundled_card_text();
std::string_view bundled_scenario_text(Difficulty d);
const CardLibrary& bundled_library();
ScenarioConfig bundled_scenario(Difficulty d);

}  // namespace lotr
