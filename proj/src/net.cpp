#include "pgsynth/net.hpp"

#include <algorithm>
#include <deque>

namespace pgsynth {

namespace {
const Multiset kEmpty;
}

const Multiset& PTNet::pre_of(const std::string& t) const {
  auto it = pre.find(t);
  return it == pre.end() ? kEmpty : it->second;
}

const Multiset& PTNet::post_of(const std::string& t) const {
  auto it = post.find(t);
  return it == post.end() ? kEmpty : it->second;
}

std::vector<std::string> PTNet::out_transitions(const std::string& p) const {
  std::vector<std::string> out;
  for (const auto& t : transitions)
    if (pre_of(t).contains(p)) out.push_back(t);
  return out;
}

std::vector<std::string> PTNet::in_transitions(const std::string& p) const {
  std::vector<std::string> in;
  for (const auto& t : transitions)
    if (post_of(t).contains(p)) in.push_back(t);
  return in;
}

void PTNet::check_well_formed() const {
  for (const auto& p : places)
    if (transitions.count(p))
      throw invalid_input("node '" + p + "' is both a place and a transition");
  for (const auto& t : transitions) {
    const Multiset& pr = pre_of(t);
    const Multiset& po = post_of(t);
    if (pr.empty()) throw invalid_input("transition '" + t + "' has empty precondition");
    if (po.empty()) throw invalid_input("transition '" + t + "' has empty postcondition");
    for (const auto& [p, c] : pr)
      if (!is_place(p))
        throw invalid_input("transition '" + t + "' consumes from unknown place '" + p + "'");
    for (const auto& [p, c] : po)
      if (!is_place(p))
        throw invalid_input("transition '" + t + "' produces into unknown place '" + p + "'");
  }
  for (const auto& [p, c] : initial)
    if (!is_place(p))
      throw invalid_input("initial marking mentions unknown place '" + p + "'");
  for (const auto& [t, ms] : pre)
    if (!is_transition(t))
      throw invalid_input("flow mentions unknown transition '" + t + "'");
  for (const auto& [t, ms] : post)
    if (!is_transition(t))
      throw invalid_input("flow mentions unknown transition '" + t + "'");
}

std::set<std::string> enabled_transitions(const PTNet& net, const Marking& m) {
  for (const auto& [p, c] : m)
    if (!net.is_place(p))
      throw invalid_input("marking mentions unknown place '" + p + "'");
  std::set<std::string> enabled;
  for (const auto& t : net.transitions)
    if (net.pre_of(t).subset_of(m)) enabled.insert(t);
  return enabled;
}

Marking fire(const PTNet& net, const Marking& m, const std::string& t) {
  if (!net.is_transition(t)) throw invalid_input("unknown transition '" + t + "'");
  if (!net.pre_of(t).subset_of(m))
    throw invalid_input("transition '" + t + "' is not enabled");
  return m.minus(net.pre_of(t)).plus(net.post_of(t));
}

ReachabilityGraph reachable_markings(const PTNet& net, std::size_t state_limit) {
  ReachabilityGraph rg;
  rg.markings.push_back(net.initial);
  rg.index.emplace(net.initial.key(), 0);
  std::deque<std::size_t> work{0};
  while (!work.empty()) {
    std::size_t cur = work.front();
    work.pop_front();
    Marking m = rg.markings[cur];
    for (const auto& t : enabled_transitions(net, m)) {
      Marking next = fire(net, m, t);
      std::string key = next.key();
      auto it = rg.index.find(key);
      std::size_t idx;
      if (it == rg.index.end()) {
        if (rg.markings.size() >= state_limit)
          throw limit_exceeded("reachability exploration exceeded " +
                               std::to_string(state_limit) + " markings");
        idx = rg.markings.size();
        rg.markings.push_back(next);
        rg.index.emplace(key, idx);
        work.push_back(idx);
      } else {
        idx = it->second;
      }
      rg.edges.push_back({cur, t, idx});
    }
  }
  return rg;
}

BoundVerdict check_k_bounded(const PTNet& net, std::int64_t k, std::size_t state_limit) {
  // Explores the full reachable set; a violating marking gives a definite
  // verdict, a blown limit only a suspicion (the net may be unbounded).
  std::map<std::string, bool> seen;
  std::deque<Marking> work{net.initial};
  seen.emplace(net.initial.key(), true);
  auto violates = [&](const Marking& m) {
    for (const auto& [p, c] : m)
      if (c > k) return true;
    return false;
  };
  if (violates(net.initial)) return BoundVerdict::kViolated;
  while (!work.empty()) {
    Marking m = work.front();
    work.pop_front();
    for (const auto& t : enabled_transitions(net, m)) {
      Marking next = fire(net, m, t);
      if (violates(next)) return BoundVerdict::kViolated;
      std::string key = next.key();
      if (seen.emplace(key, true).second) {
        if (seen.size() > state_limit) return BoundVerdict::kUnknown;
        work.push_back(next);
      }
    }
  }
  return BoundVerdict::kBounded;
}

PTNet restrict_to(const PTNet& net, const std::set<std::string>& nodes) {
  PTNet r;
  for (const auto& p : net.places)
    if (nodes.count(p)) r.places.insert(p);
  for (const auto& [p, c] : net.initial)
    if (nodes.count(p)) r.initial.add(p, c);
  for (const auto& t : net.transitions) {
    if (!nodes.count(t)) continue;
    Multiset pr, po;
    for (const auto& [p, c] : net.pre_of(t))
      if (nodes.count(p)) pr.add(p, c);
    for (const auto& [p, c] : net.post_of(t))
      if (nodes.count(p)) po.add(p, c);
    // Keep the net well formed: a transition that lost its whole pre or post
    // side is dropped.
    if (pr.empty() || po.empty()) continue;
    r.transitions.insert(t);
    r.pre.emplace(t, std::move(pr));
    r.post.emplace(t, std::move(po));
  }
  return r;
}

bool is_concurrency_preserving(const PTNet& net) {
  for (const auto& t : net.transitions)
    if (net.pre_of(t).cardinality() != net.post_of(t).cardinality()) return false;
  return true;
}

PTNet parallel_compose(const std::vector<PTNet>& nets) {
  PTNet r;
  for (const auto& n : nets) {
    for (const auto& p : n.places) {
      if (r.places.count(p))
        throw invalid_input("parallel composition: place '" + p +
                            "' appears in more than one component");
      r.places.insert(p);
    }
    for (const auto& [p, c] : n.initial) r.initial.add(p, c);
    for (const auto& t : n.transitions) {
      r.transitions.insert(t);
      // Shared transitions synchronize: their flow is merged componentwise.
      for (const auto& [p, c] : n.pre_of(t)) r.pre[t].add(p, c);
      for (const auto& [p, c] : n.post_of(t)) r.post[t].add(p, c);
    }
  }
  r.check_well_formed();
  return r;
}

GameReport validate_game(const PetriGame& g, std::size_t state_limit) {
  GameReport rep;
  g.net.check_well_formed();

  rep.partition_ok = true;
  for (const auto& p : g.net.places) {
    bool sys = g.is_system(p), env = g.is_environment(p);
    if (sys == env) {
      rep.partition_ok = false;
      rep.issues.push_back(sys ? "place '" + p + "' is in both partitions"
                               : "place '" + p + "' is in neither partition");
    }
  }
  for (const auto& p : g.system_places)
    if (!g.net.is_place(p)) {
      rep.partition_ok = false;
      rep.issues.push_back("system place '" + p + "' is not declared");
    }
  for (const auto& p : g.environment_places)
    if (!g.net.is_place(p)) {
      rep.partition_ok = false;
      rep.issues.push_back("environment place '" + p + "' is not declared");
    }

  rep.bad_ok = true;
  for (const auto& p : g.bad_places)
    if (!g.net.is_place(p)) {
      rep.bad_ok = false;
      rep.issues.push_back("bad place '" + p + "' is not declared");
    }

  // Exactly one environment token initially, and every transition preserves
  // the environment token count (which therefore stays <= 1).
  rep.env_token_ok = true;
  std::int64_t env_tokens = 0;
  for (const auto& [p, c] : g.net.initial)
    if (g.is_environment(p)) env_tokens += c;
  if (env_tokens != 1) {
    rep.env_token_ok = false;
    rep.issues.push_back("initial marking carries " + std::to_string(env_tokens) +
                         " environment tokens, expected 1");
  }
  for (const auto& t : g.net.transitions) {
    std::int64_t pre_env = 0, post_env = 0;
    for (const auto& [p, c] : g.net.pre_of(t))
      if (g.is_environment(p)) pre_env += c;
    for (const auto& [p, c] : g.net.post_of(t))
      if (g.is_environment(p)) post_env += c;
    if (pre_env != post_env || pre_env > 1) {
      rep.env_token_ok = false;
      rep.issues.push_back("transition '" + t + "' does not preserve the environment token");
    }
  }

  if (g.bound < 1) {
    rep.bound_verdict = BoundVerdict::kViolated;
    rep.issues.push_back("bound must be positive");
  } else {
    try {
      rep.bound_verdict = check_k_bounded(g.net, g.bound, state_limit);
    } catch (const Error&) {
      rep.bound_verdict = BoundVerdict::kUnknown;
    }
    if (rep.bound_verdict == BoundVerdict::kViolated)
      rep.issues.push_back("net is not " + std::to_string(g.bound) + "-bounded");
    else if (rep.bound_verdict == BoundVerdict::kUnknown)
      rep.issues.push_back("boundedness unknown within state limit (unbounded-suspect)");
  }
  return rep;
}

}  // namespace pgsynth
