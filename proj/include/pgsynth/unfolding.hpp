#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pgsynth/net.hpp"

namespace pgsynth {

// Occurrence net labeled into a base net. Node ids are content addressed:
// a node's id is a pure function of its base-net label and the ids of its
// predecessors, so re-unfolding the same net reproduces identical ids.
struct BranchingProcess {
  PTNet occ;                                 // the occurrence net
  std::map<std::string, std::string> label;  // occ node -> base node
  PTNet base;

  const std::string& label_of(const std::string& node) const;
  Multiset label_image(const std::set<std::string>& nodes) const;

  // Causal relations. x <= y iff x F* y.
  bool causal_leq(const std::string& x, const std::string& y) const;
  bool in_conflict(const std::string& x, const std::string& y) const;
  bool concurrent(const std::string& x, const std::string& y) const;

  std::set<std::string> past(const std::string& node) const;

  // Nodes in a fixed topological order; handy for pairwise sweeps in tests.
  const std::vector<std::string>& node_order() const { return order_; }
  bool flow_well_founded() const { return well_founded_; }

  // Builds the causal tables; must be called after occ/label/base are set.
  void finalize();

 private:
  std::size_t ix(const std::string& node) const;
  bool leq_ix(std::size_t x, std::size_t y) const;
  bool conflict_ix(std::size_t x, std::size_t y) const;

  std::vector<std::string> order_;
  std::map<std::string, std::size_t> node_ix_;
  std::vector<std::vector<std::uint64_t>> past_;       // bitset per node, incl. self
  std::vector<bool> is_place_ix_;
  std::vector<std::vector<std::size_t>> place_out_ix_;  // exiting transitions
  bool well_founded_ = true;
};

// Depth-limited prefix of the unfolding. Depth counts transition layers from
// the initial cut: a transition instance is included iff
// 1 + max(depth of its preset) <= depth.
BranchingProcess unfold_prefix(const PTNet& base, int depth);

// Wraps an externally supplied occurrence net (e.g. a loaded prefix fixture)
// with its labeling into a branching process. Axioms are not enforced here;
// run validate_branching_process for that.
BranchingProcess as_branching_process(const PTNet& occ,
                                      const std::map<std::string, std::string>& labeling,
                                      const PTNet& base);

struct Cut {
  std::set<std::string> places;

  friend bool operator==(const Cut& a, const Cut& b) { return a.places == b.places; }
  friend bool operator<(const Cut& a, const Cut& b) { return a.places < b.places; }
};

// All cuts of a finite branching process (= reachable markings of the
// occurrence net). Throws a limit error beyond `limit` cuts.
std::vector<Cut> enumerate_cuts(const BranchingProcess& bp, std::size_t limit);

// Net restricted to the causal future of C, started at C. Transitions that
// lost part of their preset (they can never fire from C) are removed.
PTNet future_restrict(const BranchingProcess& bp, const Cut& c);

enum class PlaceType { kType1, kType2, kNone };

// Classification of q within the p-cut C of a strategy prefix. p must be an
// environment place of the game. Type 2 (future independent of p) is checked
// first; a place with no reachable strategy future is type 2 vacuously.
PlaceType classify_type(const BranchingProcess& sp, const PetriGame& g, const Cut& c,
                        const std::string& p, const std::string& q);

// The <=-least p-cut whose places all classify as type 1 or type 2.
// Throws when the prefix contains no such cut or no least one.
Cut compute_mcut(const BranchingProcess& sp, const PetriGame& g, const std::string& p);

// Cut obtained by firing t (a strategy successor of p with environment
// participation) at mcut(p).
Cut compute_ecut(const BranchingProcess& sp, const PetriGame& g, const std::string& p,
                 const std::string& t);

struct BranchingProcessReport {
  bool ok = true;
  std::vector<std::string> issues;

  void fail(const std::string& msg) {
    ok = false;
    issues.push_back(msg);
  }
};

// Checks every occurrence-net and labeling axiom.
BranchingProcessReport validate_branching_process(const BranchingProcess& bp);

}  // namespace pgsynth
