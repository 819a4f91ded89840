#include "pgsynth/decision_game.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace pgsynth {

// ---------------------------------------------------------------------------
// Keys and small structure

std::string Commitment::key() const {
  if (top) return "TOP";
  std::string s = "{";
  bool first = true;
  for (const auto& t : transitions) {
    if (!first) s += ',';
    first = false;
    s += t;
  }
  return s + "}";
}

std::string DecisionEntry::key() const {
  return "(" + place + "," + std::to_string(type_tag) + "," + commit.key() + ")";
}

void DecisionSet::add(const DecisionEntry& e, std::int64_t n) {
  if (n == 0) return;
  auto& slot = entries[e];
  slot += n;
  if (slot < 0) throw invalid_input("decision entry count underflow: " + e.key());
  if (slot == 0) entries.erase(e);
}

std::int64_t DecisionSet::count(const DecisionEntry& e) const {
  auto it = entries.find(e);
  return it == entries.end() ? 0 : it->second;
}

std::int64_t DecisionSet::cardinality() const {
  std::int64_t n = 0;
  for (const auto& [e, c] : entries) n += c;
  return n;
}

bool DecisionSet::has_pending() const {
  for (const auto& [e, c] : entries)
    if (e.commit.top) return true;
  return false;
}

Marking DecisionSet::induced_marking() const {
  Marking m;
  for (const auto& [e, c] : entries) m.add(e.place, c);
  return m;
}

std::string DecisionSet::key() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [e, c] : entries) {
    if (!first) s += ',';
    first = false;
    s += e.key();
    if (c != 1) s += ':' + std::to_string(c);
  }
  return s + "}";
}

std::string GameMove::label() const {
  if (kind == Kind::kResolve) {
    std::string s = "resolve";
    for (const auto& [from, tos] : resolutions) {
      s += " " + from.place + "->[";
      bool first = true;
      for (const auto& [e, c] : tos) {
        if (!first) s += ',';
        first = false;
        s += e.key();
        if (c != 1) s += ':' + std::to_string(c);
      }
      s += "]";
    }
    return s;
  }
  std::string s = "fire " + transition + " @";
  for (const auto& [e, c] : consumed) {
    s += e.key();
    if (c != 1) s += ':' + std::to_string(c);
  }
  return s;
}

bool operator<(const GameMove& a, const GameMove& b) {
  if (a.kind != b.kind) return a.kind < b.kind;
  if (a.transition != b.transition) return a.transition < b.transition;
  if (a.consumed != b.consumed) return a.consumed < b.consumed;
  return a.resolutions < b.resolutions;
}

std::size_t GameGraph::index_of(const DecisionSet& ds) const {
  auto it = index.find(ds.key());
  if (it == index.end()) throw invalid_input("state not in game graph: " + ds.key());
  return it->second;
}

bool GameGraph::contains(const DecisionSet& ds) const {
  return index.count(ds.key()) > 0;
}

// ---------------------------------------------------------------------------
// Shared helpers

namespace {

using EntryCount = std::map<DecisionEntry, std::int64_t>;

std::set<std::string> committable(const PetriGame& g, const std::string& place) {
  std::set<std::string> out;
  for (const auto& t : g.net.transitions)
    if (g.net.pre_of(t).contains(place)) out.insert(t);
  return out;
}

bool has_env_pre(const PetriGame& g, const std::string& t) {
  for (const auto& [p, c] : g.net.pre_of(t))
    if (g.is_environment(p)) return true;
  return false;
}

// All sub-multisets of size `want` drawn from `avail` (value -> multiplicity).
template <typename V>
void multichoose(const std::vector<std::pair<V, std::int64_t>>& avail, std::int64_t want,
                 std::size_t from, std::map<V, std::int64_t>& acc,
                 std::vector<std::map<V, std::int64_t>>& out) {
  if (want == 0) {
    out.push_back(acc);
    return;
  }
  if (from >= avail.size()) return;
  std::int64_t most = std::min(want, avail[from].second);
  for (std::int64_t take = most; take >= 0; --take) {
    if (take > 0) acc[avail[from].first] = take;
    multichoose(avail, want - take, from + 1, acc, out);
    if (take > 0) acc.erase(avail[from].first);
  }
}

// Committed enabled instantiations of t: per place of pre(t), a sub-multiset
// of eligible entries committing t, covering the required multiplicity.
std::vector<EntryCount> instantiations(
    const PetriGame& g, const DecisionSet& ds, const std::string& t,
    const std::function<bool(const DecisionEntry&)>& eligible) {
  const Multiset& pre = g.net.pre_of(t);
  std::vector<EntryCount> partial{{}};
  for (const auto& [place, need] : pre.entries()) {
    std::vector<std::pair<DecisionEntry, std::int64_t>> avail;
    for (const auto& [e, c] : ds.entries)
      if (e.place == place && e.commit.allows(t) && eligible(e)) avail.emplace_back(e, c);
    std::vector<EntryCount> picks;
    EntryCount acc;
    multichoose(avail, need, 0, acc, picks);
    if (picks.empty()) return {};
    std::vector<EntryCount> next;
    for (const auto& base : partial)
      for (const auto& pick : picks) {
        EntryCount merged = base;
        for (const auto& [e, c] : pick) merged[e] += c;
        next.push_back(std::move(merged));
      }
    partial = std::move(next);
  }
  std::sort(partial.begin(), partial.end());
  partial.erase(std::unique(partial.begin(), partial.end()), partial.end());
  return partial;
}

bool type1_eligible(const DecisionEntry& e) { return !e.commit.top && e.type_tag == 1; }
bool type2_eligible(const DecisionEntry& e) { return !e.commit.top && e.type_tag == 2; }
bool any_eligible(const DecisionEntry& e) { return !e.commit.top; }

// Entries produced by firing t, before Player 0 resolves the new system
// places: environment places allow everything, system places are pending.
void produce_game_entries(const PetriGame& g, const std::string& t, DecisionSet& ds) {
  for (const auto& [q, c] : g.net.post_of(t)) {
    if (g.is_environment(q)) {
      ds.add(DecisionEntry{q, 1, Commitment::of(committable(g, q))}, c);
    } else {
      ds.add(DecisionEntry{q, 1, Commitment::pending()}, c);
    }
  }
}

bool marks_bad(const PetriGame& g, const DecisionSet& ds) {
  for (const auto& [e, c] : ds.entries)
    if (g.is_bad(e.place)) return true;
  return false;
}

// Existence check without enumerating every combination.
bool has_instantiation(const PetriGame& g, const DecisionSet& ds, const std::string& t,
                       const std::function<bool(const DecisionEntry&)>& eligible) {
  for (const auto& [place, need] : g.net.pre_of(t).entries()) {
    std::int64_t have = 0;
    for (const auto& [e, c] : ds.entries)
      if (e.place == place && e.commit.allows(t) && eligible(e)) have += c;
    if (have < need) return false;
  }
  return true;
}

bool has_type1_move(const PetriGame& g, const DecisionSet& ds) {
  for (const auto& t : g.net.transitions)
    if (has_instantiation(g, ds, t, type1_eligible)) return true;
  return false;
}

std::vector<std::set<std::string>> all_subsets(const std::set<std::string>& items) {
  std::vector<std::set<std::string>> subsets{{}};
  for (const auto& t : items) {
    std::size_t n = subsets.size();
    for (std::size_t i = 0; i < n; ++i) {
      auto s = subsets[i];
      s.insert(t);
      subsets.push_back(std::move(s));
    }
  }
  std::sort(subsets.begin(), subsets.end());
  return subsets;
}

}  // namespace

// ---------------------------------------------------------------------------
// Initial states

std::vector<DecisionSet> initial_states(const PetriGame& g) {
  DecisionSet env_part;
  std::vector<std::pair<std::string, std::int64_t>> system_tokens;
  for (const auto& [p, c] : g.net.initial) {
    if (g.is_environment(p))
      env_part.add(DecisionEntry{p, 1, Commitment::of(committable(g, p))}, c);
    else
      system_tokens.emplace_back(p, c);
  }

  std::vector<DecisionSet> states{env_part};
  for (const auto& [p, c] : system_tokens) {
    // Every (type, allowed set) claim a token on p can make.
    std::vector<std::pair<DecisionEntry, std::int64_t>> choices;
    for (int type : {1, 2})
      for (const auto& s : all_subsets(committable(g, p)))
        choices.emplace_back(DecisionEntry{p, type, Commitment::of(s)}, c);
    std::sort(choices.begin(), choices.end());

    std::vector<EntryCount> picks;
    EntryCount acc;
    multichoose(choices, c, 0, acc, picks);
    std::vector<DecisionSet> next;
    for (const auto& base : states)
      for (const auto& pick : picks) {
        DecisionSet ds = base;
        for (const auto& [e, n] : pick) ds.add(e, n);
        next.push_back(std::move(ds));
      }
    states = std::move(next);
  }
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  return states;
}

// ---------------------------------------------------------------------------
// State predicates

bool is_player1_state(const PetriGame& g, const DecisionSet& ds) {
  if (ds.has_pending()) return false;
  for (const auto& t : g.net.transitions)
    if (!has_env_pre(g, t) && has_instantiation(g, ds, t, type1_eligible)) return false;
  return true;
}

bool detect_nondeterminism(const PetriGame& g, const DecisionSet& ds) {
  // Collect committed enabled instantiations of transitions with no
  // environment participation; any two that can share a token witness
  // nondeterminism, as do two assignments of one instantiation.
  std::vector<std::pair<std::string, EntryCount>> insts;
  for (const auto& t : g.net.transitions) {
    if (has_env_pre(g, t)) continue;
    for (auto& inst : instantiations(g, ds, t, any_eligible))
      insts.emplace_back(t, std::move(inst));
  }
  for (std::size_t i = 0; i < insts.size(); ++i) {
    for (std::size_t j = i; j < insts.size(); ++j) {
      const auto& [t1, i1] = insts[i];
      const auto& [t2, i2] = insts[j];
      if (i == j) {
        std::int64_t total = 0;
        bool swappable = false;
        for (const auto& [e, c] : i1) {
          total += c;
          if (c < ds.count(e)) swappable = true;
        }
        if (total >= 2 && swappable) return true;
      } else {
        for (const auto& [e, c] : i1)
          if (i2.count(e)) return true;
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Type-2 claim validation

std::vector<Type2Step> type2_steps(const PetriGame& g, const DecisionSet& ds) {
  std::vector<Type2Step> steps;
  for (const auto& t : g.net.transitions) {
    for (const auto& inst : instantiations(g, ds, t, type2_eligible)) {
      DecisionSet after = ds;
      for (const auto& [e, c] : inst) after.add(e, -c);
      // New places stay inside the type-2 future; enumerate every claim the
      // continuation could make for them.
      std::vector<std::pair<std::vector<DecisionEntry>, DecisionSet>> variants;
      variants.emplace_back(std::vector<DecisionEntry>{}, after);
      for (const auto& [q, c] : g.net.post_of(t)) {
        if (g.is_environment(q))
          throw invalid_input("type-2 step produces environment token via '" + t + "'");
        std::vector<std::set<std::string>> subsets = all_subsets(committable(g, q));
        for (std::int64_t k = 0; k < c; ++k) {
          std::vector<std::pair<std::vector<DecisionEntry>, DecisionSet>> next;
          for (const auto& [prod, v] : variants)
            for (const auto& s : subsets) {
              DecisionEntry entry{q, 2, Commitment::of(s)};
              auto prod2 = prod;
              prod2.push_back(entry);
              DecisionSet v2 = v;
              v2.add(entry);
              next.emplace_back(std::move(prod2), std::move(v2));
            }
          variants = std::move(next);
        }
      }
      for (auto& [prod, target] : variants)
        steps.push_back(Type2Step{t, inst, std::move(prod), std::move(target)});
    }
  }
  std::sort(steps.begin(), steps.end(), [](const Type2Step& a, const Type2Step& b) {
    if (a.transition != b.transition) return a.transition < b.transition;
    if (a.consumed != b.consumed) return a.consumed < b.consumed;
    return a.target < b.target;
  });
  steps.erase(std::unique(steps.begin(), steps.end(),
                          [](const Type2Step& a, const Type2Step& b) {
                            return a.transition == b.transition &&
                                   a.consumed == b.consumed && a.target == b.target;
                          }),
              steps.end());
  return steps;
}

std::vector<DecisionSet> type2_successors(const PetriGame& g, const DecisionSet& ds) {
  std::vector<DecisionSet> result;
  for (auto& step : type2_steps(g, ds)) result.push_back(std::move(step.target));
  std::sort(result.begin(), result.end());
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

bool is_type2_terminating(const PetriGame& g, const DecisionSet& ds) {
  for (const auto& t : g.net.transitions)
    if (has_instantiation(g, ds, t, type2_eligible)) return false;
  return true;
}

std::set<DecisionSet> compute_D(const PetriGame& g, const std::set<DecisionSet>& universe) {
  std::set<DecisionSet> d = universe;
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<DecisionSet> doomed;
    for (const auto& s : d) {
      if (is_type2_terminating(g, s)) continue;
      bool survivor = false;
      for (const auto& succ : type2_successors(g, s)) {
        if (d.count(succ) && !marks_bad(g, succ)) {
          survivor = true;
          break;
        }
      }
      if (!survivor) doomed.push_back(s);
    }
    for (const auto& s : doomed) {
      d.erase(s);
      changed = true;
    }
  }
  return d;
}

// Valid type-2 claim: the state (and its type-2 closure) survives the
// D-fixpoint. Used standalone by classify_terminal and strategy extraction;
// build_game_graph batches the computation over its whole universe instead.
bool type2_claim_valid(const PetriGame& g, const DecisionSet& ds) {
  std::set<DecisionSet> universe;
  std::deque<DecisionSet> work{ds};
  universe.insert(ds);
  while (!work.empty()) {
    DecisionSet cur = work.front();
    work.pop_front();
    for (const auto& succ : type2_successors(g, cur))
      if (universe.insert(succ).second) work.push_back(succ);
    if (universe.size() > (std::size_t{1} << 20))
      throw limit_exceeded("type-2 validation universe exploded");
  }
  return compute_D(g, universe).count(ds) > 0;
}

namespace {

TerminalKind classify_with(const PetriGame& g, const DecisionSet& ds, bool type2_ok) {
  if (ds.has_pending())
    throw invalid_input("classify_terminal: state has pending choices");
  if (marks_bad(g, ds)) return TerminalKind::kP1Bad;
  if (detect_nondeterminism(g, ds)) return TerminalKind::kP1Nondeterminism;
  if (has_type1_move(g, ds)) return TerminalKind::kNonTerminal;
  // Game over: no type-1 move remains.
  bool net_enabled = !enabled_transitions(g.net, ds.induced_marking()).empty();
  if (!net_enabled) return TerminalKind::kP0Termination;
  if (!is_type2_terminating(g, ds) && type2_ok) return TerminalKind::kP0Type2;
  return TerminalKind::kP1Deadlock;
}

}  // namespace

TerminalKind classify_terminal(const PetriGame& g, const DecisionSet& ds) {
  bool needs_d = !ds.has_pending() && !marks_bad(g, ds) &&
                 !detect_nondeterminism(g, ds) && !has_type1_move(g, ds) &&
                 !is_type2_terminating(g, ds);
  return classify_with(g, ds, needs_d ? type2_claim_valid(g, ds) : false);
}

// ---------------------------------------------------------------------------
// Successors

std::vector<std::pair<GameMove, DecisionSet>> successors(const PetriGame& g,
                                                         const DecisionSet& ds) {
  std::vector<std::pair<GameMove, DecisionSet>> result;

  if (ds.has_pending()) {
    // Player 0 replaces every pending entry in one move.
    std::vector<std::pair<DecisionEntry, std::int64_t>> pending;
    for (const auto& [e, c] : ds.entries)
      if (e.commit.top) pending.emplace_back(e, c);

    DecisionSet settled;
    for (const auto& [e, c] : ds.entries)
      if (!e.commit.top) settled.add(e, c);

    std::vector<std::pair<GameMove, DecisionSet>> partial;
    partial.emplace_back(GameMove{GameMove::Kind::kResolve, "", {}, {}, false}, settled);
    for (const auto& [pe, c] : pending) {
      std::vector<std::pair<DecisionEntry, std::int64_t>> choices;
      for (int type : {1, 2})
        for (const auto& s : all_subsets(committable(g, pe.place)))
          choices.emplace_back(DecisionEntry{pe.place, type, Commitment::of(s)}, c);
      std::sort(choices.begin(), choices.end());
      std::vector<EntryCount> picks;
      EntryCount acc;
      multichoose(choices, c, 0, acc, picks);
      std::vector<std::pair<GameMove, DecisionSet>> next;
      for (const auto& [move, base] : partial)
        for (const auto& pick : picks) {
          GameMove m = move;
          m.resolutions[pe] = pick;
          DecisionSet v = base;
          for (const auto& [e, n] : pick) v.add(e, n);
          next.emplace_back(std::move(m), std::move(v));
        }
      partial = std::move(next);
    }
    result = std::move(partial);
  } else {
    if (classify_terminal(g, ds) != TerminalKind::kNonTerminal)
      throw invalid_input("successors: state is terminal");
    bool p1 = is_player1_state(g, ds);
    for (const auto& t : g.net.transitions) {
      bool env = has_env_pre(g, t);
      // Environment moves happen only at Player-1 states (mcuts); system
      // moves only at Player-0 states.
      if (env != p1) continue;
      for (const auto& inst : instantiations(g, ds, t, type1_eligible)) {
        DecisionSet after = ds;
        for (const auto& [e, c] : inst) after.add(e, -c);
        produce_game_entries(g, t, after);
        result.emplace_back(GameMove{GameMove::Kind::kFire, t, inst, {}, env},
                            std::move(after));
      }
    }
  }
  std::sort(result.begin(), result.end(),
            [](const auto& a, const auto& b) {
              if (a.first < b.first) return true;
              if (b.first < a.first) return false;
              return a.second < b.second;
            });
  return result;
}

// ---------------------------------------------------------------------------
// Graph construction

GameGraph build_game_graph(const PetriGame& g, std::size_t state_limit) {
  const std::int64_t cardinality_cap =
      static_cast<std::int64_t>(g.net.places.size()) * g.bound;

  struct Node {
    DecisionSet ds;
    bool game_state = false;
    bool expanded_validation = false;
  };
  std::vector<Node> nodes;
  std::map<std::string, std::size_t> index;
  std::deque<std::size_t> game_work;
  std::deque<std::size_t> validation_work;

  auto intern = [&](const DecisionSet& ds, bool as_game) {
    if (ds.cardinality() > cardinality_cap)
      throw invalid_input("decision set exceeds |P|*k = " +
                          std::to_string(cardinality_cap) +
                          "; validate the game first");
    auto [it, fresh] = index.emplace(ds.key(), nodes.size());
    if (fresh) {
      if (nodes.size() >= state_limit)
        throw limit_exceeded("decision-game exploration exceeded " +
                             std::to_string(state_limit) + " states");
      nodes.push_back(Node{ds, false, false});
      validation_work.push_back(it->second);
    }
    std::size_t ix = it->second;
    if (as_game && !nodes[ix].game_state) {
      nodes[ix].game_state = true;
      game_work.push_back(ix);
    }
    return ix;
  };

  std::vector<std::size_t> init_ix;
  for (const auto& ds : initial_states(g)) init_ix.push_back(intern(ds, true));

  struct RawEdge {
    std::size_t from, to;
    GameMove move;
  };
  std::vector<RawEdge> raw_edges;

  while (!game_work.empty() || !validation_work.empty()) {
    if (!game_work.empty()) {
      std::size_t cur = game_work.front();
      game_work.pop_front();
      DecisionSet ds = nodes[cur].ds;  // copy: nodes may reallocate
      bool expand;
      if (ds.has_pending()) {
        expand = true;
      } else {
        bool terminal = marks_bad(g, ds) || detect_nondeterminism(g, ds) ||
                        !has_type1_move(g, ds);
        expand = !terminal;
      }
      if (expand)
        for (const auto& [move, succ] : successors(g, ds))
          raw_edges.push_back({cur, intern(succ, true), move});
      continue;
    }
    std::size_t cur = validation_work.front();
    validation_work.pop_front();
    if (nodes[cur].expanded_validation) continue;
    nodes[cur].expanded_validation = true;
    DecisionSet ds = nodes[cur].ds;
    for (const auto& succ : type2_successors(g, ds)) intern(succ, false);
  }

  // D-fixpoint over everything explored; invalid type-2 claims disappear
  // from the game unless they are terminal anyway.
  std::set<DecisionSet> universe;
  for (const auto& n : nodes) universe.insert(n.ds);
  std::set<DecisionSet> d = compute_D(g, universe);

  std::vector<TerminalKind> kind(nodes.size(), TerminalKind::kNonTerminal);
  std::vector<bool> keep(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!nodes[i].game_state) continue;
    const DecisionSet& ds = nodes[i].ds;
    if (ds.has_pending())
      kind[i] = TerminalKind::kNonTerminal;
    else
      kind[i] = classify_with(g, ds, d.count(ds) > 0);
    keep[i] = kind[i] != TerminalKind::kNonTerminal || d.count(ds) > 0;
  }

  // Reachability trim from the surviving initial states.
  std::map<std::size_t, std::vector<std::pair<std::size_t, const GameMove*>>> adj;
  for (const auto& e : raw_edges)
    if (keep[e.from] && keep[e.to]) adj[e.from].emplace_back(e.to, &e.move);
  std::vector<bool> reach(nodes.size(), false);
  std::deque<std::size_t> bfs;
  for (std::size_t ix : init_ix)
    if (keep[ix] && !reach[ix]) {
      reach[ix] = true;
      bfs.push_back(ix);
    }
  while (!bfs.empty()) {
    std::size_t cur = bfs.front();
    bfs.pop_front();
    if (kind[cur] != TerminalKind::kNonTerminal) continue;  // winning states are sinks
    for (const auto& [to, move] : adj[cur])
      if (!reach[to]) {
        reach[to] = true;
        bfs.push_back(to);
      }
  }

  // Canonical numbering by state key.
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].game_state && keep[i] && reach[i]) kept.push_back(i);
  std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
    return nodes[a].ds.key() < nodes[b].ds.key();
  });
  std::map<std::size_t, std::size_t> remap;
  for (std::size_t i = 0; i < kept.size(); ++i) remap[kept[i]] = i;

  GameGraph gg;
  gg.states.reserve(kept.size());
  for (std::size_t old : kept) {
    std::size_t ix = gg.states.size();
    gg.states.push_back(nodes[old].ds);
    gg.index[nodes[old].ds.key()] = ix;
    gg.owner.push_back(is_player1_state(g, nodes[old].ds) ? Player::kPlayer1
                                                          : Player::kPlayer0);
    gg.terminal.push_back(kind[old]);
    switch (kind[old]) {
      case TerminalKind::kP0Termination:
      case TerminalKind::kP0Type2:
        gg.w0.insert(ix);
        break;
      case TerminalKind::kP1Deadlock:
      case TerminalKind::kP1Nondeterminism:
      case TerminalKind::kP1Bad:
        gg.w1.insert(ix);
        break;
      case TerminalKind::kNonTerminal:
        break;
    }
  }
  for (std::size_t ix : init_ix)
    if (remap.count(ix)) gg.initial.insert(remap[ix]);

  std::vector<GameEdge> edges;
  for (const auto& e : raw_edges) {
    if (!remap.count(e.from) || !remap.count(e.to)) continue;
    if (kind[e.from] != TerminalKind::kNonTerminal) continue;  // sinks keep no moves
    edges.push_back({remap[e.from], remap[e.to], e.move});
  }
  std::sort(edges.begin(), edges.end(), [](const GameEdge& a, const GameEdge& b) {
    if (a.from != b.from) return a.from < b.from;
    if (a.move < b.move) return true;
    if (b.move < a.move) return false;
    return a.to < b.to;
  });
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](const GameEdge& a, const GameEdge& b) {
                            return a.from == b.from && a.to == b.to &&
                                   !(a.move < b.move) && !(b.move < a.move);
                          }),
              edges.end());
  gg.edges = std::move(edges);
  gg.out_edges.assign(gg.states.size(), {});
  for (std::size_t i = 0; i < gg.edges.size(); ++i)
    gg.out_edges[gg.edges[i].from].push_back(i);
  return gg;
}

}  // namespace pgsynth
