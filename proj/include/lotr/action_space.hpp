#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lotr/action.hpp"
#include "lotr/rules_engine.hpp"

namespace lotr {

/// Above this many ready characters, commitment enumeration lists only the
/// minimal qualifying subsets (plus the empty commitment).
inline constexpr int kFullCommitEnumerationLimit = 12;

/// Legal decisions at the current decision stage, sorted in canonical order.
/// Never empty; throws InvariantViolation at a ruled stage.
std::vector<Action> legal_actions(const GameState& state);

/// Expert-knowledge pruning applied at MCTS expansion. Returns a non-empty
/// subsequence of `actions` (which must be legal_actions(state)).
std::vector<Action> expert_expansion_filter(const GameState& state, std::span<const Action> actions);

// Shared rule helpers; agents and the filter use the same definitions.

int mask_willpower(const GameState& state, std::uint64_t mask);
int mask_attack(const GameState& state, std::uint64_t mask);

/// Non-empty, sum of willpower beats the staging threat, and dropping any
/// member breaks that.
bool is_minimal_commit(const GameState& state, std::uint64_t mask);

/// Whether CommitSubset(mask) is in legal_actions(state).
bool commit_is_legal(const GameState& state, std::uint64_t mask);

/// Payment that drains the matching hero with the largest pool first; nullopt
/// when the card is unaffordable.
std::optional<std::array<std::uint8_t, 3>> canonical_payment(const GameState& state, DefId card);

/// Whether character `character` survives defending against `attack`.
bool survives_hit(const GameState& state, int character, int attack);

/// Defender assignment rule of the expansion filter: every assigned defender
/// survives its hit, or the enemy's undefended hit would kill the hero it lands on.
bool defense_is_sound(const GameState& state, const Action& assignment);

/// Expands a compact subset index over `candidates` (bit i = candidates[i]) to a character mask.
std::uint64_t expand_subset(std::uint64_t compact, std::span<const int> candidates);
std::vector<int> mask_members(std::uint64_t mask);

}  // namespace lotr
