#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lotr/card_model.hpp"

namespace lotr {

enum class ActionKind : std::uint8_t {
  PlayCard,
  EndPlanning,
  CommitSubset,
  TravelTo,
  AssignDefenders,
  DeclareAttack,
  Pass,
};

inline constexpr std::int8_t kUndefended = -1;

/// One decision. Characters are addressed by their index in the combined
/// hero+ally list of the state the action was generated for (heroes first).
///
/// The defaulted ordering (kind, card, enemy, character mask, payment,
/// defenders) is the canonical enumeration order of legal actions.
struct Action {
  ActionKind kind = ActionKind::Pass;
  DefId card = kNoDef;                   // PlayCard / TravelTo (kNoDef = stay put)
  std::uint8_t enemy = 0;                // DeclareAttack: engagement-area index
  std::uint64_t characters = 0;          // CommitSubset / DeclareAttack
  std::array<std::uint8_t, 3> payment{}; // PlayCard: resources taken from each hero
  std::vector<std::int8_t> defenders;    // AssignDefenders: one entry per engaged enemy

  static Action play_card(DefId card, std::array<std::uint8_t, 3> payment) {
    Action a;
    a.kind = ActionKind::PlayCard;
    a.card = card;
    a.payment = payment;
    return a;
  }
  static Action end_planning() {
    Action a;
    a.kind = ActionKind::EndPlanning;
    return a;
  }
  static Action commit(std::uint64_t mask) {
    Action a;
    a.kind = ActionKind::CommitSubset;
    a.characters = mask;
    return a;
  }
  static Action travel(std::optional<DefId> location) {
    Action a;
    a.kind = ActionKind::TravelTo;
    a.card = location.value_or(kNoDef);
    return a;
  }
  static Action defend(std::vector<std::int8_t> assignment) {
    Action a;
    a.kind = ActionKind::AssignDefenders;
    a.defenders = std::move(assignment);
    return a;
  }
  static Action attack(std::uint8_t enemy, std::uint64_t mask) {
    Action a;
    a.kind = ActionKind::DeclareAttack;
    a.enemy = enemy;
    a.characters = mask;
    return a;
  }
  static Action pass() { return Action{}; }

  bool operator==(const Action&) const = default;
  auto operator<=>(const Action&) const = default;
};

std::string to_string(const Action& action, const BuiltScenario* scenario = nullptr);

}  // namespace lotr
