#include "pgsynth/strategy.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <random>

namespace pgsynth {

const std::string& StrategyNet::label_of(const std::string& node) const {
  auto it = labeling.find(node);
  if (it == labeling.end()) throw invalid_input("strategy node '" + node + "' has no label");
  return it->second;
}

Marking StrategyNet::label_image(const Marking& m) const {
  Marking img;
  for (const auto& [p, c] : m) img.add(label_of(p), c);
  return img;
}

std::vector<std::string> validate_strategy_structure(const PetriGame& g,
                                                     const StrategyNet& s) {
  std::vector<std::string> issues;
  try {
    s.net.check_well_formed();
  } catch (const Error& e) {
    issues.push_back(e.what());
    return issues;
  }
  for (const auto& p : s.net.places) {
    auto it = s.labeling.find(p);
    if (it == s.labeling.end())
      issues.push_back("place '" + p + "' is unlabeled");
    else if (!g.net.is_place(it->second))
      issues.push_back("place '" + p + "' is labeled by non-place '" + it->second + "'");
  }
  for (const auto& t : s.net.transitions) {
    auto it = s.labeling.find(t);
    if (it == s.labeling.end()) {
      issues.push_back("transition '" + t + "' is unlabeled");
      continue;
    }
    if (!g.net.is_transition(it->second)) {
      issues.push_back("transition '" + t + "' is labeled by non-transition '" +
                       it->second + "'");
      continue;
    }
    if (s.label_image(s.net.pre_of(t)) != g.net.pre_of(it->second))
      issues.push_back("labeling breaks pre-image equality at '" + t + "'");
    if (s.label_image(s.net.post_of(t)) != g.net.post_of(it->second))
      issues.push_back("labeling breaks post-image equality at '" + t + "'");
  }
  if (issues.empty() && !(s.label_image(s.net.initial) == g.net.initial))
    issues.push_back("initial marking does not map onto the game's initial marking");
  std::map<std::string, std::string> by_preset_label;
  for (const auto& t : s.net.transitions) {
    auto it = s.labeling.find(t);
    if (it == s.labeling.end()) continue;
    std::string key = s.net.pre_of(t).key() + "->" + it->second;
    auto [slot, fresh] = by_preset_label.emplace(key, t);
    if (!fresh)
      issues.push_back("transitions '" + slot->second + "' and '" + t +
                       "' share preset and label");
  }
  return issues;
}

// ---------------------------------------------------------------------------
// Extraction

namespace {

using Token = std::pair<DecisionEntry, std::string>;  // entry value, place id

// Walks the winning region: Player-0 states follow the solved choice,
// Player-1 states branch over every environment move, and validated type-2
// claims continue on their own. Revisited states reuse their places, which
// folds the walk into a finite, possibly cyclic net.
struct Extractor {
  const PetriGame& g;
  const GameGraph& gg;
  const SolveResult& sr;
  StrategyNet out;
  std::size_t counter = 0;
  std::map<std::size_t, std::vector<Token>> visited;
  std::map<std::string, std::vector<Token>> visited_t2;

  std::string fresh_place(const std::string& base_place) {
    std::string id = base_place + "." + std::to_string(counter++);
    out.net.places.insert(id);
    out.labeling[id] = base_place;
    return id;
  }

  std::string fresh_transition(const std::string& base_transition) {
    std::string id = base_transition + "." + std::to_string(counter++);
    out.net.transitions.insert(id);
    out.labeling[id] = base_transition;
    return id;
  }

  // Align arriving tokens (empty id = freshly produced) with the state's
  // stored tokens; fresh ones adopt the stored places.
  std::vector<std::string> match_tokens(const std::vector<Token>& stored,
                                        std::vector<Token>& arriving) {
    std::map<DecisionEntry, std::deque<std::string>> pool;
    for (const auto& [e, id] : stored) pool[e].push_back(id);
    for (const auto& [e, id] : arriving) {
      if (id.empty()) continue;
      auto& q = pool[e];
      auto it = std::find(q.begin(), q.end(), id);
      if (it == q.end())
        throw Error(ErrorKind::kInternal,
                    "strategy extraction: carried token does not match merged state");
      q.erase(it);
    }
    std::vector<std::string> ids;
    ids.reserve(arriving.size());
    for (auto& [e, id] : arriving) {
      if (id.empty()) {
        auto& q = pool[e];
        if (q.empty())
          throw Error(ErrorKind::kInternal,
                      "strategy extraction: produced token has no slot in merged state");
        id = q.front();
        q.pop_front();
      }
      ids.push_back(id);
    }
    return ids;
  }

  std::vector<std::string> materialize(std::size_t six, std::vector<Token> arriving) {
    auto it = visited.find(six);
    if (it != visited.end()) return match_tokens(it->second, arriving);

    for (auto& [e, id] : arriving)
      if (id.empty()) id = fresh_place(e.place);
    std::vector<Token> tokens = arriving;
    std::sort(tokens.begin(), tokens.end());
    visited.emplace(six, tokens);
    expand(six, tokens);
    std::vector<std::string> ids;
    for (const auto& [e, id] : arriving) ids.push_back(id);
    return ids;
  }

  const GameEdge& edge_to(std::size_t six, std::size_t target) const {
    for (std::size_t ei : gg.out_edges[six])
      if (gg.edges[ei].to == target) return gg.edges[ei];
    throw Error(ErrorKind::kInternal, "strategy extraction: solved choice has no edge");
  }

  void expand(std::size_t six, const std::vector<Token>& tokens) {
    switch (gg.terminal[six]) {
      case TerminalKind::kP0Termination:
        return;
      case TerminalKind::kP0Type2:
        continue_type2(gg.states[six], tokens);
        return;
      case TerminalKind::kP1Deadlock:
      case TerminalKind::kP1Nondeterminism:
      case TerminalKind::kP1Bad:
        throw Error(ErrorKind::kInternal, "strategy extraction walked into a lost state");
      case TerminalKind::kNonTerminal:
        break;
    }
    if (gg.states[six].has_pending()) {
      follow_resolution(six, tokens);
      return;
    }
    if (gg.owner[six] == Player::kPlayer0) {
      fire_edge(six, tokens, edge_to(six, sr.p0_choice.at(six)));
    } else {
      for (std::size_t ei : gg.out_edges[six]) fire_edge(six, tokens, gg.edges[ei]);
    }
  }

  void follow_resolution(std::size_t six, const std::vector<Token>& tokens) {
    const GameEdge& e = edge_to(six, sr.p0_choice.at(six));
    std::vector<Token> arriving;
    std::map<DecisionEntry, std::deque<std::string>> pending_tokens;
    for (const auto& [entry, id] : tokens) {
      if (entry.commit.top)
        pending_tokens[entry].push_back(id);
      else
        arriving.emplace_back(entry, id);
    }
    // Pending tokens keep their place but adopt the resolved claims.
    for (const auto& [pe, picks] : e.move.resolutions) {
      auto& ids = pending_tokens[pe];
      for (const auto& [resolved, n] : picks) {
        for (std::int64_t k = 0; k < n; ++k) {
          if (ids.empty())
            throw Error(ErrorKind::kInternal, "resolution does not match pending tokens");
          arriving.emplace_back(resolved, ids.front());
          ids.pop_front();
        }
      }
    }
    materialize(e.to, std::move(arriving));
  }

  // Consume per the instantiation, append the produced tokens as fresh, and
  // let the target state assign their places.
  void fire_edge(std::size_t six, const std::vector<Token>& tokens, const GameEdge& e) {
    const GameMove& move = e.move;
    std::vector<Token> carried = tokens;
    std::vector<std::string> consumed_ids;
    for (const auto& [entry, n] : move.consumed) {
      std::int64_t left = n;
      for (auto it = carried.begin(); it != carried.end() && left > 0;) {
        if (it->first == entry) {
          consumed_ids.push_back(it->second);
          it = carried.erase(it);
          --left;
        } else {
          ++it;
        }
      }
      if (left != 0)
        throw Error(ErrorKind::kInternal, "instantiation does not match tokens");
    }
    std::string tau = fresh_transition(move.transition);
    for (const auto& id : consumed_ids) out.net.pre[tau].add(id);

    std::vector<Token> arriving = carried;
    std::size_t first_fresh = arriving.size();
    for (const auto& [q, c] : g.net.post_of(move.transition)) {
      DecisionEntry produced;
      if (g.is_environment(q)) {
        std::set<std::string> all;
        for (const auto& t : g.net.transitions)
          if (g.net.pre_of(t).contains(q)) all.insert(t);
        produced = DecisionEntry{q, 1, Commitment::of(all)};
      } else {
        produced = DecisionEntry{q, 1, Commitment::pending()};
      }
      for (std::int64_t k = 0; k < c; ++k) arriving.emplace_back(produced, "");
    }
    std::vector<std::string> ids = materialize(e.to, std::move(arriving));
    for (std::size_t i = first_fresh; i < ids.size(); ++i) out.net.post[tau].add(ids[i]);
  }

  // -- the validated type-2 continuation ----------------------------------

  void continue_type2(const DecisionSet& ds, const std::vector<Token>& tokens) {
    materialize_t2(ds, tokens);
  }

  std::vector<std::string> materialize_t2(const DecisionSet& ds,
                                          std::vector<Token> arriving) {
    std::string key = ds.key();
    auto it = visited_t2.find(key);
    if (it != visited_t2.end()) return match_tokens(it->second, arriving);

    for (auto& [e, id] : arriving)
      if (id.empty()) id = fresh_place(e.place);
    std::vector<Token> tokens = arriving;
    std::sort(tokens.begin(), tokens.end());
    visited_t2.emplace(key, tokens);

    std::vector<Type2Step> steps = type2_steps(g, ds);
    if (!steps.empty()) {
      const Type2Step* chosen = nullptr;
      for (bool want_det : {true, false}) {
        for (const auto& step : steps) {
          if (marks_bad_state(step.target)) continue;
          if (!type2_claim_valid(g, step.target)) continue;
          if (want_det && detect_nondeterminism(g, step.target)) continue;
          chosen = &step;
          break;
        }
        if (chosen) break;
      }
      if (!chosen)
        throw Error(ErrorKind::kInternal,
                    "type-2 continuation has no valid step from " + key);
      fire_t2(tokens, *chosen);
    }
    std::vector<std::string> ids;
    for (const auto& [e, id] : arriving) ids.push_back(id);
    return ids;
  }

  bool marks_bad_state(const DecisionSet& ds) const {
    for (const auto& [e, c] : ds.entries)
      if (g.is_bad(e.place)) return true;
    return false;
  }

  void fire_t2(const std::vector<Token>& tokens, const Type2Step& step) {
    std::vector<Token> carried = tokens;
    std::vector<std::string> consumed_ids;
    for (const auto& [entry, n] : step.consumed) {
      std::int64_t left = n;
      for (auto it = carried.begin(); it != carried.end() && left > 0;) {
        if (it->first == entry) {
          consumed_ids.push_back(it->second);
          it = carried.erase(it);
          --left;
        } else {
          ++it;
        }
      }
      if (left != 0)
        throw Error(ErrorKind::kInternal, "type-2 instantiation does not match tokens");
    }
    std::string tau = fresh_transition(step.transition);
    for (const auto& id : consumed_ids) out.net.pre[tau].add(id);
    std::vector<Token> arriving = carried;
    std::size_t first_fresh = arriving.size();
    for (const auto& e : step.produced) arriving.emplace_back(e, "");
    std::vector<std::string> ids = materialize_t2(step.target, std::move(arriving));
    for (std::size_t i = first_fresh; i < ids.size(); ++i) out.net.post[tau].add(ids[i]);
  }
};

}  // namespace

StrategyNet extract_strategy(const PetriGame& g, const GameGraph& gg,
                             const SolveResult& sr) {
  if (sr.winning_initials.empty())
    throw Error(ErrorKind::kUnrealizable, "no winning initial state to extract from");
  std::size_t start = *sr.winning_initials.begin();

  Extractor ex{g, gg, sr};
  std::vector<Token> arriving;
  for (const auto& [entry, c] : gg.states[start].entries)
    for (std::int64_t k = 0; k < c; ++k) arriving.emplace_back(entry, std::string{});
  for (auto& [e, id] : arriving) {
    id = ex.fresh_place(e.place);
    ex.out.net.initial.add(id);
  }
  std::vector<Token> tokens = arriving;
  std::sort(tokens.begin(), tokens.end());
  ex.visited.emplace(start, tokens);
  ex.expand(start, tokens);
  ex.out.net.check_well_formed();
  return std::move(ex.out);
}

// ---------------------------------------------------------------------------
// Verification

VerificationReport verify_strategy(const PetriGame& g, const StrategyNet& s,
                                   std::size_t state_limit) {
  std::vector<std::string> structure = validate_strategy_structure(g, s);
  if (!structure.empty())
    throw invalid_input("strategy net is not structurally valid: " + structure.front());

  VerificationReport rep;
  rep.s1_ok = rep.s2_ok = rep.deadlock_avoiding = rep.winning = true;

  struct NodeTrace {
    std::size_t parent;
    std::string transition;
  };
  std::vector<Marking> markings{s.net.initial};
  std::vector<NodeTrace> trace{{SIZE_MAX, ""}};
  std::map<std::string, std::size_t> seen{{s.net.initial.key(), 0}};

  auto sequence_to = [&](std::size_t ix) {
    std::vector<std::string> seq;
    while (trace[ix].parent != SIZE_MAX) {
      seq.push_back(trace[ix].transition);
      ix = trace[ix].parent;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
  };

  std::map<std::string, bool> s2_checked;  // per environment place

  for (std::size_t cur = 0; cur < markings.size(); ++cur) {
    const Marking m = markings[cur];
    for (const auto& [p, c] : m)
      if (c > 1)
        throw invalid_input("strategy net is not safe: place '" + p + "' holds " +
                            std::to_string(c) + " tokens");

    std::set<std::string> enabled = enabled_transitions(s.net, m);

    // Winning: no reachable bad-labeled place.
    if (rep.winning) {
      for (const auto& [p, c] : m) {
        if (g.is_bad(s.label_of(p))) {
          rep.winning = false;
          rep.winning_witness = StrategyWitness{sequence_to(cur), m, {p}};
          break;
        }
      }
    }

    // S1: at most one enabled strategy transition per marked system place.
    if (rep.s1_ok) {
      for (const auto& [p, c] : m) {
        if (!g.is_system(s.label_of(p))) continue;
        std::vector<std::string> local;
        for (const auto& t : enabled)
          if (s.net.pre_of(t).contains(p)) local.push_back(t);
        if (local.size() > 1) {
          rep.s1_ok = false;
          std::vector<std::string> offenders{p};
          offenders.insert(offenders.end(), local.begin(), local.end());
          rep.s1_witness = StrategyWitness{sequence_to(cur), m, offenders};
          break;
        }
      }
    }

    // S2: local environment transitions may not be restricted.
    if (rep.s2_ok) {
      for (const auto& [p, c] : m) {
        const std::string& base_p = s.label_of(p);
        if (!g.is_environment(base_p)) continue;
        if (s2_checked.count(p)) continue;
        s2_checked[p] = true;
        for (const auto& tb : g.net.transitions) {
          Multiset want;
          want.add(base_p);
          if (!(g.net.pre_of(tb) == want)) continue;  // only local transitions
          bool present = false;
          for (const auto& t : s.net.transitions) {
            Multiset local_pre;
            local_pre.add(p);
            if (s.label_of(t) == tb && s.net.pre_of(t) == local_pre) {
              present = true;
              break;
            }
          }
          if (!present) {
            rep.s2_ok = false;
            rep.s2_witness = StrategyWitness{sequence_to(cur), m, {p, tb}};
            break;
          }
        }
        if (!rep.s2_ok) break;
      }
    }

    // Deadlock avoidance: when the underlying net can move, so can the
    // strategy.
    if (rep.deadlock_avoiding && enabled.empty()) {
      std::set<std::string> base_enabled = enabled_transitions(g.net, s.label_image(m));
      if (!base_enabled.empty()) {
        rep.deadlock_avoiding = false;
        rep.deadlock_witness = StrategyWitness{
            sequence_to(cur), m,
            std::vector<std::string>(base_enabled.begin(), base_enabled.end())};
      }
    }

    for (const auto& t : enabled) {
      Marking next = fire(s.net, m, t);
      auto [it, fresh] = seen.emplace(next.key(), markings.size());
      if (fresh) {
        if (markings.size() >= state_limit)
          throw limit_exceeded("strategy verification exceeded " +
                               std::to_string(state_limit) + " markings");
        markings.push_back(next);
        trace.push_back({cur, t});
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Decision sets of cuts, play simulation

DecisionSet decision_set_of_cut(const BranchingProcess& sp, const PetriGame& g,
                                const Cut& c, const std::map<std::string, int>& types) {
  DecisionSet ds;
  for (const auto& p : c.places) {
    if (!sp.occ.is_place(p)) throw invalid_input("cut mentions unknown place '" + p + "'");
    auto it = types.find(p);
    if (it == types.end())
      throw invalid_input("type of '" + p + "' undeterminable within the prefix");
    std::set<std::string> commit;
    for (const auto& t : sp.occ.out_transitions(p)) commit.insert(sp.label_of(t));
    ds.add(DecisionEntry{sp.label_of(p), it->second, Commitment::of(commit)});
  }
  return ds;
}

PlayChooser make_seeded_chooser(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const std::vector<std::string>& enabled) {
    return static_cast<std::size_t>((*rng)() % enabled.size());
  };
}

PlayTrace simulate_play(const StrategyNet& s, const PlayChooser& chooser,
                        std::size_t max_steps) {
  PlayTrace trace;
  trace.initial = s.net.initial;
  Marking m = s.net.initial;
  for (std::size_t step = 0; step < max_steps; ++step) {
    std::set<std::string> enabled_set = enabled_transitions(s.net, m);
    if (enabled_set.empty()) return trace;
    std::vector<std::string> enabled(enabled_set.begin(), enabled_set.end());
    std::size_t pick = chooser(enabled);
    if (pick >= enabled.size()) throw invalid_input("chooser picked an invalid index");
    m = fire(s.net, m, enabled[pick]);
    trace.steps.emplace_back(enabled[pick], m);
  }
  trace.truncated = !enabled_transitions(s.net, m).empty();
  return trace;
}

}  // namespace pgsynth
