#include "lotr/card_model.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "lotr/errors.hpp"

namespace lotr {

namespace {

constexpr std::array<std::string_view, 4> kSphereNames = {"Spirit", "Tactics", "Lore", "Leadership"};
constexpr std::array<std::string_view, 4> kKindNames = {"Hero", "Ally", "Enemy", "Location"};
constexpr std::array<std::string_view, 3> kDifficultyNames = {"Easy", "Medium", "Hard"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    lines.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::optional<long long> parse_int(std::string_view s) {
  s = trim(s);
  long long value = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (s.empty() || ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int* stat_slot(CardDef& def, std::string_view key) {
  if (key == "cost") return &def.cost;
  if (key == "threat_cost") return &def.threat_cost;
  if (key == "willpower") return &def.willpower;
  if (key == "attack") return &def.attack;
  if (key == "defense") return &def.defense;
  if (key == "hitpoints") return &def.hitpoints;
  if (key == "engagement_cost") return &def.engagement_cost;
  if (key == "threat") return &def.threat;
  if (key == "quest_points") return &def.quest_points;
  return nullptr;
}

int stat_value(const CardDef& def, std::string_view key) {
  return *stat_slot(const_cast<CardDef&>(def), key);
}

CardDef parse_record(const std::vector<std::pair<std::string_view, std::string_view>>& fields,
                     std::size_t record_no) {
  std::string label = "record #" + std::to_string(record_no);
  for (const auto& [k, v] : fields) {
    if (k == "id") label = std::string(v);
  }
  auto fail = [&](const std::string& what) -> ConfigError {
    return ConfigError("card " + label + ": " + what);
  };

  std::map<std::string_view, std::string_view> seen;
  for (const auto& [k, v] : fields) {
    if (!seen.emplace(k, v).second) throw fail("duplicate key '" + std::string(k) + "'");
  }
  if (!seen.contains("id") || seen["id"].empty()) throw fail("missing id");
  if (!seen.contains("kind")) throw fail("missing kind");

  CardDef def;
  def.id = std::string(seen["id"]);
  const auto kind = parse_kind(seen["kind"]);
  if (!kind) throw fail("unknown kind '" + std::string(seen["kind"]) + "'");
  def.kind = *kind;
  def.name = seen.contains("name") ? std::string(seen["name"]) : def.id;

  const auto& allowed = applicable_stats(def.kind);
  const bool wants_sphere = def.is_character();
  for (const auto& [k, v] : seen) {
    if (k == "id" || k == "kind" || k == "name") continue;
    if (k == "sphere") {
      if (!wants_sphere) throw fail("field 'sphere' does not apply to " + std::string(to_string(def.kind)));
      const auto sphere = parse_sphere(v);
      if (!sphere) throw fail("unknown sphere '" + std::string(v) + "'");
      def.sphere = sphere;
      continue;
    }
    if (stat_slot(def, k) == nullptr) throw fail("unknown key '" + std::string(k) + "'");
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw fail("field '" + std::string(k) + "' does not apply to " + std::string(to_string(def.kind)));
    }
    const auto value = parse_int(v);
    if (!value) throw fail("field '" + std::string(k) + "' is not an integer");
    if (*value < 0) throw fail("negative value for '" + std::string(k) + "'");
    if (*value > 1'000'000) throw fail("value for '" + std::string(k) + "' out of range");
    *stat_slot(def, k) = static_cast<int>(*value);
  }
  if (wants_sphere && !def.sphere) throw fail("missing field 'sphere'");
  for (const auto key : allowed) {
    if (!seen.contains(key)) throw fail("missing field '" + std::string(key) + "'");
  }
  if (def.kind != CardKind::Location && def.hitpoints < 1) throw fail("hitpoints must be at least 1");
  if (def.kind == CardKind::Location && def.quest_points < 1) throw fail("quest_points must be at least 1");
  return def;
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  value = trim(value);
  if (value.empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = value.find(',', pos);
    const auto item = trim(value.substr(pos, comma == std::string_view::npos ? value.npos : comma - pos));
    out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

}  // namespace

std::string_view to_string(Sphere s) { return kSphereNames[static_cast<int>(s)]; }
std::string_view to_string(CardKind k) { return kKindNames[static_cast<int>(k)]; }
std::string_view to_string(Difficulty d) { return kDifficultyNames[static_cast<int>(d)]; }

std::optional<Sphere> parse_sphere(std::string_view s) {
  for (std::size_t i = 0; i < kSphereNames.size(); ++i) {
    if (kSphereNames[i] == s) return static_cast<Sphere>(i);
  }
  return std::nullopt;
}

std::optional<CardKind> parse_kind(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == s) return static_cast<CardKind>(i);
  }
  return std::nullopt;
}

std::optional<Difficulty> parse_difficulty(std::string_view s) {
  if (s == "Easy" || s == "easy") return Difficulty::Easy;
  if (s == "Medium" || s == "medium") return Difficulty::Medium;
  if (s == "Hard" || s == "hard") return Difficulty::Hard;
  return std::nullopt;
}

const std::vector<std::string_view>& applicable_stats(CardKind kind) {
  static const std::vector<std::string_view> hero = {"threat_cost", "willpower", "attack", "defense",
                                                     "hitpoints"};
  static const std::vector<std::string_view> ally = {"cost", "willpower", "attack", "defense", "hitpoints"};
  static const std::vector<std::string_view> enemy = {"engagement_cost", "threat", "attack", "defense",
                                                      "hitpoints"};
  static const std::vector<std::string_view> location = {"threat", "quest_points"};
  switch (kind) {
    case CardKind::Hero: return hero;
    case CardKind::Ally: return ally;
    case CardKind::Enemy: return enemy;
    case CardKind::Location: return location;
  }
  return location;
}

CardLibrary::CardLibrary(std::vector<CardDef> cards) : cards_(std::move(cards)) {
  for (std::size_t i = 0; i < cards_.size(); ++i) {
    if (!index_.emplace(cards_[i].id, i).second) throw ConfigError("card " + cards_[i].id + ": duplicate id");
  }
}

const CardDef* CardLibrary::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &cards_[it->second];
}

const CardDef& CardLibrary::at(std::string_view id) const {
  const auto* def = find(id);
  if (!def) throw ConfigError("unknown card id " + std::string(id));
  return *def;
}

CardLibrary load_card_library(std::string_view text) {
  std::vector<CardDef> cards;
  std::vector<std::pair<std::string_view, std::string_view>> fields;
  std::size_t record_no = 0;
  auto flush = [&] {
    if (fields.empty()) return;
    ++record_no;
    cards.push_back(parse_record(fields, record_no));
    fields.clear();
  };
  for (const auto raw : split_lines(text)) {
    const auto line = trim(raw);
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      std::string label = "record #" + std::to_string(record_no + 1);
      for (const auto& [k, v] : fields) {
        if (k == "id") label = std::string(v);
      }
      throw ConfigError("card " + label + ": malformed line '" + std::string(line) + "'");
    }
    fields.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  flush();
  return CardLibrary(std::move(cards));
}

CardLibrary load_card_library_file(const std::string& path) { return load_card_library(read_file(path)); }

std::string emit_card_library(const CardLibrary& library) {
  std::ostringstream out;
  bool first = true;
  for (const auto& def : library.cards()) {
    if (!first) out << '\n';
    first = false;
    out << "id=" << def.id << '\n' << "name=" << def.name << '\n' << "kind=" << to_string(def.kind) << '\n';
    if (def.sphere) out << "sphere=" << to_string(*def.sphere) << '\n';
    for (const auto key : applicable_stats(def.kind)) out << key << '=' << stat_value(def, key) << '\n';
  }
  return out.str();
}

int DeckSpec::total_copies() const {
  int total = 0;
  for (const auto& e : entries) total += e.copies;
  return total;
}

EncounterShape encounter_shape(Difficulty d) {
  return d == Difficulty::Easy ? EncounterShape{28, 7} : EncounterShape{29, 15};
}

ScenarioConfig load_scenario(std::string_view text) {
  ScenarioConfig config;
  enum class Section { None, Scenario, Player, Encounter } section = Section::None;
  bool have_difficulty = false, have_heroes = false, have_size = false;
  int line_no = 0;
  for (const auto raw : split_lines(text)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    auto fail = [&](const std::string& what) {
      return ConfigError("scenario line " + std::to_string(line_no) + ": " + what);
    };
    if (line.front() == '[') {
      if (line == "[scenario]") section = Section::Scenario;
      else if (line == "[player_deck]") section = Section::Player;
      else if (line == "[encounter_deck]") section = Section::Encounter;
      else throw fail("unknown section " + std::string(line));
      continue;
    }
    if (section == Section::None) throw fail("content before the first section");
    if (section == Section::Scenario) {
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) throw fail("expected key=value");
      const auto key = trim(line.substr(0, eq));
      const auto value = trim(line.substr(eq + 1));
      if (key == "name") {
        config.name = std::string(value);
      } else if (key == "difficulty") {
        const auto d = parse_difficulty(value);
        if (!d) throw fail("unknown difficulty '" + std::string(value) + "'");
        config.difficulty = *d;
        have_difficulty = true;
      } else if (key == "heroes") {
        config.heroes = split_list(value);
        have_heroes = true;
      } else if (key == "pre_staged") {
        config.pre_staged = split_list(value);
      } else if (key == "quest_target" || key == "player_deck_size") {
        const auto n = parse_int(value);
        if (!n || *n < -1'000'000 || *n > 1'000'000) throw fail("'" + std::string(key) + "' is not an integer");
        if (key == "quest_target") config.quest_target = static_cast<int>(*n);
        else {
          config.player_deck.declared_size = static_cast<int>(*n);
          have_size = true;
        }
      } else {
        throw fail("unknown key '" + std::string(key) + "'");
      }
      continue;
    }
    const auto space = line.find_first_of(" \t");
    if (space == std::string_view::npos) throw fail("expected 'card_id xN'");
    const auto id = line.substr(0, space);
    const auto count = trim(line.substr(space));
    if (count.empty() || count.front() != 'x') throw fail("expected 'card_id xN'");
    const auto n = parse_int(count.substr(1));
    if (!n || *n < -1'000'000 || *n > 1'000'000) throw fail("bad copy count '" + std::string(count) + "'");
    auto& deck = section == Section::Player ? config.player_deck : config.encounter_deck;
    deck.entries.push_back({std::string(id), static_cast<int>(*n)});
  }
  if (!have_difficulty) throw ConfigError("scenario: missing 'difficulty'");
  if (!have_heroes) throw ConfigError("scenario: missing 'heroes'");
  if (!have_size) throw ConfigError("scenario: missing 'player_deck_size'");
  config.encounter_deck.declared_size = encounter_shape(config.difficulty).cards;
  return config;
}

ScenarioConfig load_scenario_file(const std::string& path) { return load_scenario(read_file(path)); }

std::string emit_scenario(const ScenarioConfig& config) {
  std::ostringstream out;
  out << "[scenario]\n";
  if (!config.name.empty()) out << "name=" << config.name << '\n';
  out << "difficulty=" << to_string(config.difficulty) << '\n'
      << "heroes=" << join(config.heroes) << '\n'
      << "pre_staged=" << join(config.pre_staged) << '\n'
      << "quest_target=" << config.quest_target << '\n'
      << "player_deck_size=" << config.player_deck.declared_size << '\n';
  out << "\n[player_deck]\n";
  for (const auto& e : config.player_deck.entries) out << e.card_id << " x" << e.copies << '\n';
  out << "\n[encounter_deck]\n";
  for (const auto& e : config.encounter_deck.entries) out << e.card_id << " x" << e.copies << '\n';
  return out.str();
}

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::UnknownCard: return "UnknownCard";
    case ViolationCode::WrongCardKind: return "WrongCardKind";
    case ViolationCode::HeroCountViolation: return "HeroCountViolation";
    case ViolationCode::DuplicateHero: return "DuplicateHero";
    case ViolationCode::InvalidCopyCount: return "InvalidCopyCount";
    case ViolationCode::DuplicateDeckEntry: return "DuplicateDeckEntry";
    case ViolationCode::DeckSizeMismatch: return "DeckSizeMismatch";
    case ViolationCode::EncounterDeckShape: return "EncounterDeckShape";
    case ViolationCode::ScenarioSetupViolation: return "ScenarioSetupViolation";
    case ViolationCode::InvalidQuestTarget: return "InvalidQuestTarget";
  }
  return "?";
}

// Derived checks (deck totals, encounter shape) run only when every entry of
// the deck is well formed, so one bad field reports one violation.
std::vector<Violation> validate_scenario(const ScenarioConfig& config, const CardLibrary& library) {
  std::vector<Violation> out;
  auto add = [&](ViolationCode code, std::string subject, std::string message) {
    out.push_back({code, std::move(subject), std::move(message)});
  };

  if (config.quest_target < 1) add(ViolationCode::InvalidQuestTarget, "quest_target", "quest_target must be positive");

  if (config.heroes.size() != 3) {
    add(ViolationCode::HeroCountViolation, "heroes",
        "expected 3 heroes, got " + std::to_string(config.heroes.size()));
  }
  std::set<std::string> hero_seen;
  for (const auto& id : config.heroes) {
    const auto* def = library.find(id);
    if (!def) add(ViolationCode::UnknownCard, id, "hero " + id + " not in library");
    else if (def->kind != CardKind::Hero) add(ViolationCode::WrongCardKind, id, id + " is not a Hero");
    else if (!hero_seen.insert(id).second) add(ViolationCode::DuplicateHero, id, "hero " + id + " listed twice");
  }

  auto check_entries = [&](const DeckSpec& deck, std::string_view deck_name, auto kind_ok) {
    bool well_formed = true;
    std::set<std::string> seen;
    for (const auto& e : deck.entries) {
      const auto* def = library.find(e.card_id);
      if (!def) {
        add(ViolationCode::UnknownCard, e.card_id, std::string(deck_name) + ": " + e.card_id + " not in library");
        well_formed = false;
      } else if (!kind_ok(def->kind)) {
        add(ViolationCode::WrongCardKind, e.card_id,
            std::string(deck_name) + ": " + e.card_id + " has kind " + std::string(to_string(def->kind)));
        well_formed = false;
      } else if (e.copies < 1) {
        add(ViolationCode::InvalidCopyCount, e.card_id, std::string(deck_name) + ": copy count must be >= 1");
        well_formed = false;
      } else if (!seen.insert(e.card_id).second) {
        add(ViolationCode::DuplicateDeckEntry, e.card_id, std::string(deck_name) + ": " + e.card_id + " listed twice");
        well_formed = false;
      }
    }
    return well_formed;
  };

  const auto is_ally = [](CardKind k) { return k == CardKind::Ally; };
  const auto is_encounter = [](CardKind k) { return k == CardKind::Enemy || k == CardKind::Location; };

  if (check_entries(config.player_deck, "player_deck", is_ally) &&
      config.player_deck.total_copies() != config.player_deck.declared_size) {
    add(ViolationCode::DeckSizeMismatch, "player_deck_size",
        "player deck has " + std::to_string(config.player_deck.total_copies()) + " cards, declared " +
            std::to_string(config.player_deck.declared_size));
  }

  const auto shape = encounter_shape(config.difficulty);
  if (check_entries(config.encounter_deck, "encounter_deck", is_encounter)) {
    const int cards = config.encounter_deck.total_copies();
    const int types = static_cast<int>(config.encounter_deck.entries.size());
    if (cards != shape.cards || types != shape.types) {
      add(ViolationCode::EncounterDeckShape, "encounter_deck",
          std::string(to_string(config.difficulty)) + " needs " + std::to_string(shape.cards) + " cards of " +
              std::to_string(shape.types) + " types, got " + std::to_string(cards) + " of " +
              std::to_string(types));
    }
  }

  for (const auto& id : config.pre_staged) {
    const auto* def = library.find(id);
    if (!def) add(ViolationCode::UnknownCard, id, "pre_staged: " + id + " not in library");
    else if (!is_encounter(def->kind)) add(ViolationCode::WrongCardKind, id, "pre_staged: " + id + " is not an encounter card");
  }
  const bool hard = config.difficulty == Difficulty::Hard;
  if (hard && config.pre_staged.empty()) {
    add(ViolationCode::ScenarioSetupViolation, "pre_staged", "Hard scenarios need pre-staged cards");
  } else if (!hard && !config.pre_staged.empty()) {
    add(ViolationCode::ScenarioSetupViolation, "pre_staged",
        std::string(to_string(config.difficulty)) + " scenarios have no pre-staged cards");
  }
  return out;
}

std::optional<DefId> BuiltScenario::find_def(std::string_view id) const {
  const auto it = std::lower_bound(defs.begin(), defs.end(), id,
                                   [](const CardDef& d, std::string_view key) { return d.id < key; });
  if (it == defs.end() || it->id != id) return std::nullopt;
  return static_cast<DefId>(it - defs.begin());
}

BuiltScenario build_scenario(const ScenarioConfig& config, const CardLibrary& library) {
  const auto violations = validate_scenario(config, library);
  if (!violations.empty()) {
    std::string msg = "invalid scenario '" + config.name + "':";
    for (const auto& v : violations) msg += "\n  " + std::string(to_string(v.code)) + " (" + v.subject + "): " + v.message;
    throw ConfigError(msg);
  }

  BuiltScenario built;
  built.name = config.name;
  built.difficulty = config.difficulty;
  built.quest_target = config.quest_target;

  std::set<std::string> used(config.heroes.begin(), config.heroes.end());
  for (const auto& e : config.player_deck.entries) used.insert(e.card_id);
  for (const auto& e : config.encounter_deck.entries) used.insert(e.card_id);
  used.insert(config.pre_staged.begin(), config.pre_staged.end());
  if (used.size() >= kNoDef) throw ConfigError("too many card types");
  for (const auto& id : used) built.defs.push_back(library.at(id));

  auto make = [&](const std::string& id) {
    const auto c = static_cast<CardId>(built.instance_def.size());
    built.instance_def.push_back(*built.find_def(id));
    return c;
  };
  for (std::size_t i = 0; i < 3; ++i) built.heroes[i] = make(config.heroes[i]);
  for (const auto& e : config.player_deck.entries) {
    for (int k = 0; k < e.copies; ++k) built.player_deck.push_back(make(e.card_id));
  }
  for (const auto& e : config.encounter_deck.entries) {
    for (int k = 0; k < e.copies; ++k) built.encounter_deck.push_back(make(e.card_id));
  }
  for (const auto& id : config.pre_staged) built.pre_staged.push_back(make(id));
  if (built.instance_def.size() > 4000) throw ConfigError("too many card instances");
  return built;
}

const CardLibrary& bundled_library() {
  static const CardLibrary library = load_card_library(bundled_card_text());
  return library;
}

ScenarioConfig bundled_scenario(Difficulty d) { return load_scenario(bundled_scenario_text(d)); }

}  // namespace lotr
