#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pgsynth/decision_game.hpp"
#include "pgsynth/net.hpp"
#include "pgsynth/solver.hpp"
#include "pgsynth/unfolding.hpp"

namespace pgsynth {

// A finite controller: safe net plus an initial homomorphism into the game's
// underlying net.
struct StrategyNet {
  PTNet net;
  std::map<std::string, std::string> labeling;  // strategy node -> base node

  const std::string& label_of(const std::string& node) const;
  Marking label_image(const Marking& m) const;
};

// Structural requirements on a strategy net: total labeling, initial
// homomorphism, injectivity on transitions with equal presets. Returns the
// violations (empty = structurally valid).
std::vector<std::string> validate_strategy_structure(const PetriGame& g,
                                                     const StrategyNet& s);

// Builds the finite winning strategy from a solved graph game, following the
// Player-0 choices and every environment move; revisited graph states merge,
// so the result may contain cycles.
StrategyNet extract_strategy(const PetriGame& g, const GameGraph& gg,
                             const SolveResult& sr);

struct StrategyWitness {
  std::vector<std::string> firing_sequence;  // from the initial marking
  Marking marking;
  std::vector<std::string> offenders;  // places/transitions involved
};

struct VerificationReport {
  bool s1_ok = false;
  bool s2_ok = false;
  bool deadlock_avoiding = false;
  bool winning = false;
  std::optional<StrategyWitness> s1_witness, s2_witness, deadlock_witness,
      winning_witness;

  bool all_ok() const { return s1_ok && s2_ok && deadlock_avoiding && winning; }
};

// Re-explores the strategy net and checks determinism at system places (S1),
// unrestricted local environment transitions (S2), deadlock avoidance, and
// bad-place avoidance. Independent of how the strategy was produced.
VerificationReport verify_strategy(const PetriGame& g, const StrategyNet& s,
                                   std::size_t state_limit);

// dec[C]: the decision set read off a cut of an unfolded strategy prefix.
// `types` maps each place of the cut to its classification.
DecisionSet decision_set_of_cut(const BranchingProcess& sp, const PetriGame& g,
                                const Cut& c, const std::map<std::string, int>& types);

struct PlayTrace {
  Marking initial;
  std::vector<std::pair<std::string, Marking>> steps;  // fired transition, marking after
  bool truncated = false;  // stopped by max_steps, not by termination
};

// Picks one of the enabled transitions (sorted ids) at each step.
using PlayChooser = std::function<std::size_t(const std::vector<std::string>& enabled)>;

PlayChooser make_seeded_chooser(std::uint64_t seed);

// Fires transitions of s until nothing is enabled or max_steps is reached.
PlayTrace simulate_play(const StrategyNet& s, const PlayChooser& chooser,
                        std::size_t max_steps);

}  // namespace pgsynth
