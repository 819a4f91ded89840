#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pgsynth/net.hpp"

namespace pgsynth {

// Transition set a token currently allows, or the pending-choice marker.
struct Commitment {
  bool top = false;
  std::set<std::string> transitions;  // empty when top

  static Commitment pending() { return Commitment{true, {}}; }
  static Commitment of(std::set<std::string> ts) { return Commitment{false, std::move(ts)}; }

  bool allows(const std::string& t) const { return !top && transitions.count(t) > 0; }
  std::string key() const;

  friend bool operator<(const Commitment& a, const Commitment& b) {
    if (a.top != b.top) return b.top;  // concrete sets sort before the marker
    return a.transitions < b.transitions;
  }
  friend bool operator==(const Commitment& a, const Commitment& b) {
    return a.top == b.top && a.transitions == b.transitions;
  }
};

// One token: its place, the claimed type, and the allowed transitions.
// Pending entries (top commitment) carry type 1 until Player 0 resolves them.
struct DecisionEntry {
  std::string place;
  int type_tag = 1;  // 1 or 2
  Commitment commit;

  std::string key() const;

  friend bool operator<(const DecisionEntry& a, const DecisionEntry& b) {
    if (a.place != b.place) return a.place < b.place;
    if (a.type_tag != b.type_tag) return a.type_tag < b.type_tag;
    return a.commit < b.commit;
  }
  friend bool operator==(const DecisionEntry& a, const DecisionEntry& b) {
    return a.place == b.place && a.type_tag == b.type_tag && a.commit == b.commit;
  }
};

// Multiset of decision entries; one state of the finite-graph game.
struct DecisionSet {
  std::map<DecisionEntry, std::int64_t> entries;

  void add(const DecisionEntry& e, std::int64_t n = 1);
  std::int64_t count(const DecisionEntry& e) const;
  std::int64_t cardinality() const;
  bool has_pending() const;  // any top commitment
  Marking induced_marking() const;
  std::string key() const;

  friend bool operator<(const DecisionSet& a, const DecisionSet& b) {
    return a.entries < b.entries;
  }
  friend bool operator==(const DecisionSet& a, const DecisionSet& b) {
    return a.entries == b.entries;
  }
};

// A move of the graph game: either firing an instantiated transition or
// Player 0 resolving every pending entry at once.
struct GameMove {
  enum class Kind { kFire, kResolve } kind = Kind::kFire;
  std::string transition;                          // kFire
  std::map<DecisionEntry, std::int64_t> consumed;  // kFire: entries used
  // kResolve: per pending entry value, the chosen replacements.
  std::map<DecisionEntry, std::map<DecisionEntry, std::int64_t>> resolutions;
  bool environment = false;  // kFire with an environment place in the preset

  std::string label() const;

  friend bool operator<(const GameMove& a, const GameMove& b);
};

enum class TerminalKind {
  kNonTerminal,
  kP0Termination,      // nothing enabled in the underlying net
  kP0Type2,            // validated type-2 claim carries the play forever
  kP1Deadlock,
  kP1Nondeterminism,
  kP1Bad,
};

enum class Player { kPlayer0, kPlayer1 };

struct GameEdge {
  std::size_t from;
  std::size_t to;
  GameMove move;
};

struct GameGraph {
  std::vector<DecisionSet> states;  // sorted by canonical key
  std::vector<Player> owner;
  std::vector<TerminalKind> terminal;
  std::set<std::size_t> initial;
  std::vector<GameEdge> edges;
  std::vector<std::vector<std::size_t>> out_edges;  // per state, edge indices
  std::set<std::size_t> w0, w1;
  std::map<std::string, std::size_t> index;  // canonical key -> state

  std::size_t index_of(const DecisionSet& ds) const;  // throws if absent
  bool contains(const DecisionSet& ds) const;
};

// ---------------------------------------------------------------------------
// State space of the reduction

// All combinations of type claims and transition selections for the system
// tokens of the initial marking; environment tokens always allow everything.
std::vector<DecisionSet> initial_states(const PetriGame& g);

// No pending choice, and every committed enabled type-1 instantiation
// involves an environment place (the state abstracts an mcut).
bool is_player1_state(const PetriGame& g, const DecisionSet& ds);

// Two overlapping committed enabled instantiations without environment
// participation.
bool detect_nondeterminism(const PetriGame& g, const DecisionSet& ds);

// Total classification of pending-free states; priority bad > nondeterminism
// > end-of-game. States with pending choices are never terminal.
TerminalKind classify_terminal(const PetriGame& g, const DecisionSet& ds);

// Game moves out of ds: resolutions when pending entries exist, otherwise
// type-1 instantiations (environment moves only from Player-1 states).
// Throws when called on a terminal state.
std::vector<std::pair<GameMove, DecisionSet>> successors(const PetriGame& g,
                                                         const DecisionSet& ds);

// A validation move of a type-2 claim: fire a transition instantiated from
// type-2 entries; the produced places stay in the type-2 future and are
// resolved immediately.
struct Type2Step {
  std::string transition;
  std::map<DecisionEntry, std::int64_t> consumed;
  std::vector<DecisionEntry> produced;  // one entry per produced token
  DecisionSet target;
};

// All validation moves out of ds, over every claim the produced places could
// make. Used to close the D universe and to extract type-2 continuations.
std::vector<Type2Step> type2_steps(const PetriGame& g, const DecisionSet& ds);

// Targets of type2_steps, deduplicated.
std::vector<DecisionSet> type2_successors(const PetriGame& g, const DecisionSet& ds);

// No committed enabled instantiation uses only type-2 entries.
bool is_type2_terminating(const PetriGame& g, const DecisionSet& ds);

// Greatest subset of `universe` whose members are type-2-terminating or can
// take a type-2 step to a surviving bad-free member. The universe should be
// closed under type2_successors.
std::set<DecisionSet> compute_D(const PetriGame& g,
                                const std::set<DecisionSet>& universe);

// Whether ds survives the D-fixpoint over its own type-2 closure; the check
// behind P0Type2 classification and strategy extraction.
bool type2_claim_valid(const PetriGame& g, const DecisionSet& ds);

// Full construction: exploration, D-restriction of the type-2 claims,
// ownership, and winning classification.
GameGraph build_game_graph(const PetriGame& g, std::size_t state_limit);

}  // namespace pgsynth
