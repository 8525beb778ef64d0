#pragma once

#include <span>
#include <string_view>

#include "lotr/action.hpp"
#include "lotr/random.hpp"
#include "lotr/rules_engine.hpp"

namespace lotr {

/// Willpower the expert keeps in hand above the staging threat, since the
/// encounter reveal lands after commitment.
inline constexpr int kExpertQuestMargin = 2;

enum class PolicyKind : std::uint8_t { Random, Expert };
std::string_view to_string(PolicyKind p);

/// Draws before the random agent gives up on finding a qualifying commitment.
inline constexpr int kCommitRejectionCap = 32;

/// Agent 1. Constrained random choice among `actions`:
///  - CommitCharacters: rejection-sample uniform subsets of ready characters
///    until one beats the staging threat, at most kCommitRejectionCap draws,
///    then commit nobody;
///  - DeclareDefenders: one uniformly drawn, unused ready character per
///    engaged enemy, Undefended once characters run out;
///  - every other stage: uniform over `actions`.
/// A singleton list is returned without touching `rng`.
Action random_choose(const GameState& state, std::span<const Action> actions, Rng& rng);

/// Agent 2. Deterministic rule table, one rule per decision stage:
///  - Planning: buy the affordable ally with the highest willpower (then lower
///    cost, then card id); end planning when nothing is affordable.
///  - CommitCharacters: the subset with the smallest total willpower that
///    exceeds staging threat + kExpertQuestMargin (lowest mask on ties); when
///    no subset gets there, the one with the largest total; nobody if nothing
///    beats the staging threat.
///  - Travel: the staged location with the highest threat when no location is
///    active, otherwise stay.
///  - DeclareDefenders: enemies by descending attack each get the ready
///    character with the lowest defense that survives the hit, else Undefended.
///  - DeclareAttackers: against the highest-attack enemy that can be killed,
///    the smallest killing set (fewest members, then least attack, then lowest
///    mask); Pass when nothing can be killed.
Action expert_choose(const GameState& state, std::span<const Action> actions);

// Same decisions computed straight from the state without enumerating the
// action list; these drive playouts. random_action(s, rng) draws exactly what
// random_choose(s, legal_actions(s), rng) draws, and expert_action(s) equals
// expert_choose(s, legal_actions(s)).
Action random_action(const GameState& state, Rng& rng);
Action expert_action(const GameState& state);

inline Action policy_action(PolicyKind policy, const GameState& state, Rng& rng) {
  return policy == PolicyKind::Random ? random_action(state, rng) : expert_action(state);
}

}  // namespace lotr
