#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "pgsynth/decision_game.hpp"

namespace pgsynth {

// Ownership/edge view of a game used by the solver; decoupled from the
// decision-set machinery so random graphs can exercise it directly.
struct Arena {
  std::size_t num_states = 0;
  std::vector<Player> owner;
  std::vector<std::vector<std::size_t>> succ;
  std::set<std::size_t> initial;
  std::set<std::size_t> w0, w1;

  static Arena of(const GameGraph& gg);
};

struct SolveResult {
  std::set<std::size_t> p1_attractor;
  std::set<std::size_t> p0_winning;  // complement of the attractor
  std::map<std::size_t, std::size_t> p0_choice;  // winning P0 states -> successor
  std::set<std::size_t> winning_initials;
};

// Least set containing w1, closed under: Player-1 states with a successor in
// the set join, Player-0 states with every successor in the set join; w0
// states never join. Player 0 wins from everything else.
SolveResult solve(const Arena& a);

inline SolveResult solve(const GameGraph& gg) { return solve(Arena::of(gg)); }

// True iff some initial state is winning for Player 0.
bool realizable(const SolveResult& r);

}  // namespace pgsynth
