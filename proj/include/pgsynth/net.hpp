#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pgsynth/multiset.hpp"

namespace pgsynth {

// Place/transition net. The flow relation is stored as the pre/post multisets
// of each transition; arc weights are the multiplicities.
struct PTNet {
  std::set<std::string> places;
  std::set<std::string> transitions;
  std::map<std::string, Multiset> pre;   // transition -> multiset over places
  std::map<std::string, Multiset> post;  // transition -> multiset over places
  Marking initial;

  const Multiset& pre_of(const std::string& t) const;
  const Multiset& post_of(const std::string& t) const;

  // Transitions that consume from p (p in pre(t)), sorted.
  std::vector<std::string> out_transitions(const std::string& p) const;
  // Transitions that produce into p, sorted.
  std::vector<std::string> in_transitions(const std::string& p) const;

  bool is_place(const std::string& id) const { return places.count(id) > 0; }
  bool is_transition(const std::string& id) const { return transitions.count(id) > 0; }

  // Checks the structural axioms: disjoint node sets, non-empty pre/post over
  // declared places, initial marking over declared places. Throws on failure.
  void check_well_formed() const;
};

struct PetriGame {
  PTNet net;
  std::set<std::string> system_places;
  std::set<std::string> environment_places;
  std::set<std::string> bad_places;
  std::int64_t bound = 1;

  bool is_system(const std::string& p) const { return system_places.count(p) > 0; }
  bool is_environment(const std::string& p) const {
    return environment_places.count(p) > 0;
  }
  bool is_bad(const std::string& p) const { return bad_places.count(p) > 0; }
};

// ---------------------------------------------------------------------------
// Firing semantics

// All transitions enabled at m (pre(t) <= m as multisets). Rejects markings
// that mention undeclared places.
std::set<std::string> enabled_transitions(const PTNet& net, const Marking& m);

// Successor marking m - pre(t) + post(t); t must be enabled at m.
Marking fire(const PTNet& net, const Marking& m, const std::string& t);

struct ReachEdge {
  std::size_t from;
  std::string transition;
  std::size_t to;
};

struct ReachabilityGraph {
  std::vector<Marking> markings;  // markings[0] is the initial marking
  std::vector<ReachEdge> edges;
  std::map<std::string, std::size_t> index;  // marking key -> position

  bool contains(const Marking& m) const { return index.count(m.key()) > 0; }
};

// Exhaustive forward exploration from the initial marking. Throws a
// limit-exceeded error when more than state_limit distinct markings appear.
ReachabilityGraph reachable_markings(const PTNet& net, std::size_t state_limit);

enum class BoundVerdict {
  kBounded,    // every reachable marking respects the bound
  kViolated,   // a reachable marking with m(p) > k was found
  kUnknown,    // state limit hit first; unbounded-suspect
};

BoundVerdict check_k_bounded(const PTNet& net, std::int64_t k, std::size_t state_limit);

// Restriction of the net to the given node set. Transitions whose pre or post
// becomes empty are dropped so the result is well formed.
PTNet restrict_to(const PTNet& net, const std::set<std::string>& nodes);

// |pre(t)| == |post(t)| as multiset cardinalities, for every transition.
bool is_concurrency_preserving(const PTNet& net);

// Componentwise union; nets synchronize on shared transition ids. Place sets
// must be pairwise disjoint.
PTNet parallel_compose(const std::vector<PTNet>& nets);

// ---------------------------------------------------------------------------
// Game validation

struct GameReport {
  bool partition_ok = false;     // system/environment partition the places
  bool env_token_ok = false;     // one env token, preserved by every transition
  bool bad_ok = false;           // bad places are declared places
  BoundVerdict bound_verdict = BoundVerdict::kUnknown;
  std::vector<std::string> issues;

  bool synthesizable() const {
    return partition_ok && env_token_ok && bad_ok &&
           bound_verdict == BoundVerdict::kBounded;
  }
};

GameReport validate_game(const PetriGame& g, std::size_t state_limit);

}  // namespace pgsynth
