#pragma once

// Small hand-made card set for unit tests, independent of the bundled data.

#include <ostream>
#include <string_view>

#include "lotr/action.hpp"
#include "lotr/card_model.hpp"
#include "lotr/rules_engine.hpp"

namespace lotr {

// Readable gtest failure messages.
inline void PrintTo(const Action& a, std::ostream* os) { *os << to_string(a); }

}  // namespace lotr

namespace lotr::test {

inline constexpr std::string_view kLabCards = R"(# lab cards
id=h_spirit
kind=Hero
sphere=Spirit
threat_cost=9
willpower=4
attack=1
defense=1
hitpoints=3

id=h_tactics
kind=Hero
sphere=Tactics
threat_cost=10
willpower=1
attack=3
defense=2
hitpoints=5

id=h_lore
kind=Hero
sphere=Lore
threat_cost=11
willpower=2
attack=1
defense=2
hitpoints=4

id=a_scout
kind=Ally
sphere=Spirit
cost=1
willpower=2
attack=0
defense=0
hitpoints=1

id=a_rider
kind=Ally
sphere=Spirit
cost=2
willpower=3
attack=1
defense=1
hitpoints=2

id=a_guard
kind=Ally
sphere=Tactics
cost=2
willpower=0
attack=2
defense=3
hitpoints=3

id=a_sage
kind=Ally
sphere=Lore
cost=3
willpower=1
attack=1
defense=1
hitpoints=2

id=e_rat
kind=Enemy
engagement_cost=10
threat=1
attack=1
defense=0
hitpoints=1

id=e_wolf
kind=Enemy
engagement_cost=25
threat=2
attack=3
defense=1
hitpoints=3

id=e_troll
kind=Enemy
engagement_cost=40
threat=3
attack=5
defense=2
hitpoints=6

id=e_bat
kind=Enemy
engagement_cost=33
threat=1
attack=2
defense=0
hitpoints=2

id=l_road
kind=Location
threat=1
quest_points=3

id=l_ford
kind=Location
threat=2
quest_points=2

id=l_tower
kind=Location
threat=3
quest_points=4
)";

inline constexpr std::string_view kLabScenario = R"([scenario]
name=lab
difficulty=Easy
heroes=h_spirit,h_tactics,h_lore
quest_target=8
player_deck_size=12

[player_deck]
a_scout x3
a_rider x3
a_guard x3
a_sage x3

[encounter_deck]
e_rat x4
e_wolf x4
e_troll x4
e_bat x4
l_road x4
l_ford x4
l_tower x4
)";

inline const CardLibrary& lab_library() {
  static const CardLibrary lib = load_card_library(kLabCards);
  return lib;
}

inline const BuiltScenario& lab() {
  static const BuiltScenario built = build_scenario(load_scenario(kLabScenario), lab_library());
  return built;
}

/// The nth instance (in CardId order) of card `id`.
inline CardId instance(const BuiltScenario& s, std::string_view id, int nth = 0) {
  const auto def = s.find_def(id).value();
  for (CardId c = 0; c < s.instance_count(); ++c) {
    if (s.def_of(c) == def && nth-- == 0) return c;
  }
  throw std::out_of_range("no such instance");
}

/// A state with the three lab heroes and nothing else in play. Zones are
/// empty, so zone conservation does not hold; arithmetic tests only.
inline GameState bare_state(StageId stage, const BuiltScenario& s = lab()) {
  GameState g;
  g.scenario = &s;
  g.stage = stage;
  g.threat_level = 30;
  g.quest_target = s.quest_target;
  for (const auto h : s.heroes) g.heroes.push_back({h});
  return g;
}

inline void add_ally(GameState& g, std::string_view id, int nth = 0) {
  g.allies.push_back({instance(*g.scenario, id, nth)});
}

inline void add_enemy(GameState& g, std::string_view id, int nth = 0) {
  g.engagement_area.push_back({instance(*g.scenario, id, nth)});
}

inline void stage_card(GameState& g, std::string_view id, int nth = 0) {
  g.staging_area.push_back(instance(*g.scenario, id, nth));
}

}  // namespace lotr::test
