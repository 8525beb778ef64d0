#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "fixtures.hpp"
#include "lotr/card_model.hpp"
#include "lotr/errors.hpp"
#include "lotr/random.hpp"

namespace lotr {
namespace {

using test::lab;
using test::lab_library;

TEST(CardLibrary, LoadsHeroRecord) {
  const auto lib = load_card_library(
      "id=eowyn\nkind=Hero\nsphere=Spirit\nthreat_cost=9\nwillpower=4\nattack=1\ndefense=1\nhitpoints=3\n");
  ASSERT_EQ(lib.size(), 1u);
  const auto& e = lib.at("eowyn");
  EXPECT_EQ(e.kind, CardKind::Hero);
  EXPECT_EQ(e.sphere, Sphere::Spirit);
  EXPECT_EQ(e.threat_cost, 9);
  EXPECT_EQ(e.willpower, 4);
  EXPECT_EQ(e.attack, 1);
  EXPECT_EQ(e.defense, 1);
  EXPECT_EQ(e.hitpoints, 3);
  EXPECT_EQ(e.name, "eowyn");
}

TEST(CardLibrary, EmptyDocumentIsEmptyLibrary) {
  EXPECT_TRUE(load_card_library("").empty());
  EXPECT_TRUE(load_card_library("# only a comment\n\n").empty());
}

void expect_error_naming(std::string_view text, std::string_view needle) {
  try {
    load_card_library(text);
    FAIL() << "expected ConfigError for:\n" << text;
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
  }
}

TEST(CardLibrary, RejectsSphereOnEnemy) {
  expect_error_naming(
      "id=spider\nkind=Enemy\nsphere=Spirit\nengagement_cost=1\nthreat=1\nattack=1\ndefense=1\nhitpoints=1\n",
      "spider");
}

TEST(CardLibrary, ErrorsNameTheRecord) {
  expect_error_naming("id=a\nkind=Ally\nsphere=Lore\ncost=1\nwillpower=1\nattack=1\ndefense=1\nhitpoints=1\n\n"
                      "id=a\nkind=Ally\nsphere=Lore\ncost=1\nwillpower=1\nattack=1\ndefense=1\nhitpoints=1\n",
                      "a");
  expect_error_naming("id=b\nkind=Ally\nsphere=Lore\ncost=1\nwillpower=1\nattack=1\ndefense=1\n", "b");
  expect_error_naming("id=c\nkind=Ally\nsphere=Lore\ncost=-1\nwillpower=1\nattack=1\ndefense=1\nhitpoints=1\n", "c");
  expect_error_naming("id=d\nkind=Dragon\n", "d");
  expect_error_naming("id=e\nkind=Ally\nsphere=Shadow\ncost=1\nwillpower=1\nattack=1\ndefense=1\nhitpoints=1\n", "e");
  expect_error_naming("id=f\nkind=Location\nthreat=1\nquest_points=0\n", "f");
  expect_error_naming("id=g\nkind=Location\nthreat=1\nquest_points=2\nattack=3\n", "g");
  expect_error_naming("id=h\nkind=Location\nthreat=x\nquest_points=2\n", "h");
  expect_error_naming("id=i\nkind=Ally\nsphere=lore\ncost=1\nwillpower=1\nattack=1\ndefense=1\nhitpoints=1\n", "i");
}

TEST(CardLibrary, RoundTripsThroughEmit) {
  const auto& lib = lab_library();
  EXPECT_EQ(load_card_library(emit_card_library(lib)), lib);
  const auto& bundled = bundled_library();
  EXPECT_EQ(load_card_library(emit_card_library(bundled)), bundled);
}

TEST(Scenario, RoundTripsThroughEmit) {
  for (auto d : {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard}) {
    const auto config = bundled_scenario(d);
    EXPECT_EQ(load_scenario(emit_scenario(config)), config);
  }
}

TEST(BundledData, EowynCarriesHerPrintedStats) {
  const auto& e = bundled_library().at("eowyn");
  EXPECT_EQ(e.threat_cost, 9);
  EXPECT_EQ(e.willpower, 4);
  EXPECT_EQ(e.attack, 1);
  EXPECT_EQ(e.defense, 1);
}

int distinct_types(const BuiltScenario& s, const std::vector<CardId>& cards) {
  std::set<DefId> types;
  for (auto c : cards) types.insert(s.def_of(c));
  return static_cast<int>(types.size());
}

TEST(BundledData, EncounterDecksMatchDifficultyShape) {
  const auto& lib = bundled_library();
  const auto easy = build_scenario(bundled_scenario(Difficulty::Easy), lib);
  EXPECT_EQ(easy.encounter_deck.size(), 28u);
  EXPECT_EQ(distinct_types(easy, easy.encounter_deck), 7);
  EXPECT_TRUE(easy.pre_staged.empty());

  const auto medium = build_scenario(bundled_scenario(Difficulty::Medium), lib);
  EXPECT_EQ(medium.encounter_deck.size(), 29u);
  EXPECT_EQ(distinct_types(medium, medium.encounter_deck), 15);
  EXPECT_TRUE(medium.pre_staged.empty());

  const auto hard = build_scenario(bundled_scenario(Difficulty::Hard), lib);
  EXPECT_EQ(hard.encounter_deck.size(), 29u);
  EXPECT_EQ(distinct_types(hard, hard.encounter_deck), 15);
  ASSERT_EQ(hard.pre_staged.size(), 2u);
  std::multiset<CardKind> kinds;
  for (auto c : hard.pre_staged) kinds.insert(hard.card(c).kind);
  EXPECT_EQ(kinds, (std::multiset<CardKind>{CardKind::Enemy, CardKind::Location}));
  EXPECT_EQ(hard.card(hard.pre_staged[0]).id, "forest_spider");
  EXPECT_EQ(hard.card(hard.pre_staged[1]).id, "old_forest_road");
}

TEST(BuildScenario, DeckSizesEqualCopyTotals) {
  for (auto d : {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard}) {
    const auto config = bundled_scenario(d);
    const auto built = build_scenario(config, bundled_library());
    EXPECT_EQ(static_cast<int>(built.player_deck.size()), config.player_deck.total_copies());
    EXPECT_EQ(static_cast<int>(built.encounter_deck.size()), config.encounter_deck.total_copies());
    EXPECT_EQ(built.instance_count(),
              3 + built.player_deck.size() + built.encounter_deck.size() + built.pre_staged.size());
  }
}

TEST(BuildScenario, DefsSortedById) {
  const auto& s = lab();
  EXPECT_TRUE(std::is_sorted(s.defs.begin(), s.defs.end(), [](const auto& a, const auto& b) { return a.id < b.id; }));
  EXPECT_EQ(s.def(*s.find_def("h_spirit")).willpower, 4);
  EXPECT_FALSE(s.find_def("nope").has_value());
}

TEST(Validate, WellFormedConfigsHaveNoViolations) {
  for (auto d : {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard}) {
    EXPECT_TRUE(validate_scenario(bundled_scenario(d), bundled_library()).empty()) << to_string(d);
  }
  EXPECT_TRUE(validate_scenario(load_scenario(test::kLabScenario), lab_library()).empty());
}

TEST(Validate, TwoHeroes) {
  auto config = bundled_scenario(Difficulty::Medium);
  config.heroes.pop_back();
  const auto v = validate_scenario(config, bundled_library());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, ViolationCode::HeroCountViolation);
}

TEST(Validate, HardWithoutSetup) {
  auto config = bundled_scenario(Difficulty::Hard);
  config.pre_staged.clear();
  const auto v = validate_scenario(config, bundled_library());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].code, ViolationCode::ScenarioSetupViolation);
}

struct Corruption {
  std::string name;
  std::function<void(ScenarioConfig&)> apply;
};

// Every single-field corruption of a valid config reachable from the fields
// of the config itself.
std::vector<Corruption> corruptions(const ScenarioConfig& base, const CardLibrary& lib) {
  std::vector<Corruption> out;
  std::string an_ally, an_enemy, a_hero_outside;
  for (const auto& c : lib.cards()) {
    if (c.kind == CardKind::Ally && an_ally.empty()) an_ally = c.id;
    if (c.kind == CardKind::Enemy && an_enemy.empty()) an_enemy = c.id;
  }
  out.push_back({"quest_target=0", [](auto& c) { c.quest_target = 0; }});
  out.push_back({"drop hero", [](auto& c) { c.heroes.pop_back(); }});
  for (std::size_t i = 0; i < base.heroes.size(); ++i) {
    out.push_back({"hero unknown " + std::to_string(i), [i](auto& c) { c.heroes[i] = "nobody"; }});
    out.push_back({"hero is ally " + std::to_string(i), [i, an_ally](auto& c) { c.heroes[i] = an_ally; }});
    out.push_back({"hero duplicated " + std::to_string(i),
                   [i](auto& c) { c.heroes[i] = c.heroes[(i + 1) % c.heroes.size()]; }});
  }
  out.push_back({"player size", [](auto& c) { c.player_deck.declared_size += 1; }});
  for (std::size_t i = 0; i < base.player_deck.entries.size(); ++i) {
    out.push_back({"player copies+1 " + std::to_string(i), [i](auto& c) { c.player_deck.entries[i].copies += 1; }});
    out.push_back({"player copies=0 " + std::to_string(i), [i](auto& c) { c.player_deck.entries[i].copies = 0; }});
    out.push_back({"player unknown " + std::to_string(i), [i](auto& c) { c.player_deck.entries[i].card_id = "nobody"; }});
    out.push_back({"player wrong kind " + std::to_string(i),
                   [i, an_enemy](auto& c) { c.player_deck.entries[i].card_id = an_enemy; }});
    out.push_back({"player duplicate " + std::to_string(i), [i](auto& c) {
                     auto& e = c.player_deck.entries;
                     e[i].card_id = e[(i + 1) % e.size()].card_id;
                   }});
  }
  for (std::size_t i = 0; i < base.encounter_deck.entries.size(); ++i) {
    out.push_back({"encounter copies+1 " + std::to_string(i), [i](auto& c) { c.encounter_deck.entries[i].copies += 1; }});
    out.push_back({"encounter copies=0 " + std::to_string(i), [i](auto& c) { c.encounter_deck.entries[i].copies = 0; }});
    out.push_back({"encounter unknown " + std::to_string(i),
                   [i](auto& c) { c.encounter_deck.entries[i].card_id = "nobody"; }});
    out.push_back({"encounter wrong kind " + std::to_string(i),
                   [i, an_ally](auto& c) { c.encounter_deck.entries[i].card_id = an_ally; }});
    out.push_back({"encounter duplicate " + std::to_string(i), [i](auto& c) {
                     auto& e = c.encounter_deck.entries;
                     e[i].card_id = e[(i + 1) % e.size()].card_id;
                   }});
  }
  if (base.pre_staged.empty()) {
    out.push_back({"add pre_staged", [an_enemy](auto& c) { c.pre_staged.push_back(an_enemy); }});
  } else {
    out.push_back({"clear pre_staged", [](auto& c) { c.pre_staged.clear(); }});
    out.push_back({"pre_staged unknown", [](auto& c) { c.pre_staged[0] = "nobody"; }});
    out.push_back({"pre_staged ally", [an_ally](auto& c) { c.pre_staged[0] = an_ally; }});
  }
  // Adjacent difficulties only: Easy <-> Hard changes both shape and setup.
  if (base.difficulty == Difficulty::Medium) {
    out.push_back({"medium->easy", [](auto& c) { c.difficulty = Difficulty::Easy; }});
    out.push_back({"medium->hard", [](auto& c) { c.difficulty = Difficulty::Hard; }});
  } else {
    out.push_back({"->medium", [](auto& c) { c.difficulty = Difficulty::Medium; }});
  }
  return out;
}

TEST(Validate, EverySingleCorruptionYieldsExactlyOneViolation) {
  const auto& lib = bundled_library();
  int checked = 0;
  for (auto d : {Difficulty::Easy, Difficulty::Medium, Difficulty::Hard}) {
    const auto base = bundled_scenario(d);
    for (const auto& c : corruptions(base, lib)) {
      auto config = base;
      c.apply(config);
      const auto v = validate_scenario(config, lib);
      EXPECT_EQ(v.size(), 1u) << to_string(d) << ": " << c.name;
      // validate == [] iff build succeeds
      EXPECT_THROW(build_scenario(config, lib), ConfigError) << c.name;
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(Validate, BuildSucceedsIffNoViolations) {
  const auto& lib = bundled_library();
  const auto base = bundled_scenario(Difficulty::Medium);
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    auto config = base;
    // one or two random copy-count nudges; some cancel out
    for (int k = 0; k < 2; ++k) {
      auto& deck = rng() % 2 ? config.player_deck : config.encounter_deck;
      auto& e = deck.entries[rng() % deck.entries.size()];
      e.copies += static_cast<int>(rng() % 3) - 1;
    }
    const bool valid = validate_scenario(config, lib).empty();
    bool built = true;
    try {
      build_scenario(config, lib);
    } catch (const ConfigError&) {
      built = false;
    }
    EXPECT_EQ(valid, built);
  }
}

TEST(ScenarioFile, MissingKeysAndBadLinesAreConfigErrors) {
  EXPECT_THROW(load_scenario("[scenario]\nheroes=a,b,c\nplayer_deck_size=1\n"), ConfigError);
  EXPECT_THROW(load_scenario("[scenario]\ndifficulty=Easy\nheroes=a,b,c\nplayer_deck_size=1\n[player_deck]\nfoo 3\n"),
               ConfigError);
  EXPECT_THROW(load_scenario("[nonsense]\n"), ConfigError);
  EXPECT_THROW(load_scenario("[scenario]\ndifficulty=Impossible\n"), ConfigError);
}

}  // namespace
}  // namespace lotr
