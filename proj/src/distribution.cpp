#include "pgsynth/distribution.hpp"

#include <algorithm>
#include <functional>

namespace pgsynth {

PTNet reachable_part(const PTNet& net, std::size_t state_limit) {
  ReachabilityGraph rg = reachable_markings(net, state_limit);
  std::set<std::string> nodes;
  for (const auto& m : rg.markings)
    for (const auto& [p, c] : m) nodes.insert(p);
  for (const auto& e : rg.edges) nodes.insert(e.transition);
  // Keep post places of fired transitions even if they only show up inside
  // markings already collected; restrict_to handles the rest.
  return restrict_to(net, nodes);
}

// ---------------------------------------------------------------------------
// Slices

namespace {

struct UnionFind {
  std::map<std::string, std::string> parent;
  const std::string& find(const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end()) {
      parent[x] = x;
      return parent[x];
    }
    if (it->second == x) return it->second;
    it->second = find(it->second);
    return it->second;
  }
  void unite(const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb;
  }
};

std::vector<std::string> expand_support(const Multiset& m) {
  std::vector<std::string> out;
  for (const auto& [p, c] : m)
    for (std::int64_t k = 0; k < c; ++k) out.push_back(p);
  return out;
}

// All bijections between two equally sized vectors, as index permutations.
void permutations(std::size_t n, std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

std::vector<Slice> decompose_slices(const PTNet& net,
                                    const std::set<std::string>& system_places,
                                    const std::set<std::string>& environment_places) {
  net.check_well_formed();
  for (const auto& p : net.places)
    if (system_places.count(p) == environment_places.count(p))
      throw invalid_input("place '" + p + "' is not assigned to exactly one team");
  if (!is_concurrency_preserving(net))
    throw invalid_input("net is not concurrency preserving");
  if (check_k_bounded(net, 1, std::size_t{1} << 22) != BoundVerdict::kBounded)
    throw invalid_input("net is not safe");
  {
    PTNet r = reachable_part(net, std::size_t{1} << 22);
    if (r.places != net.places || r.transitions != net.transitions)
      throw invalid_input("net has unreachable nodes; trim it first");
  }

  auto team = [&](const std::string& p) { return system_places.count(p) > 0; };

  // Per transition, every team-respecting bijection from consumed to produced
  // tokens. Token flow through a transition is what glues a slice together.
  struct TransitionMatch {
    std::vector<std::pair<std::string, std::string>> pairs;
  };
  std::vector<std::vector<TransitionMatch>> options;
  std::vector<std::string> ordered_transitions(net.transitions.begin(),
                                               net.transitions.end());
  for (const auto& t : ordered_transitions) {
    std::vector<std::string> pre_sys, pre_env, post_sys, post_env;
    for (const auto& p : expand_support(net.pre_of(t)))
      (team(p) ? pre_sys : pre_env).push_back(p);
    for (const auto& p : expand_support(net.post_of(t)))
      (team(p) ? post_sys : post_env).push_back(p);
    if (pre_sys.size() != post_sys.size() || pre_env.size() != post_env.size())
      throw invalid_input("transition '" + t + "' moves tokens across teams");
    std::vector<TransitionMatch> ms;
    std::vector<std::vector<std::size_t>> perm_sys, perm_env;
    permutations(post_sys.size(), perm_sys);
    permutations(post_env.size(), perm_env);
    for (const auto& ps : perm_sys)
      for (const auto& pe : perm_env) {
        TransitionMatch m;
        for (std::size_t i = 0; i < pre_sys.size(); ++i)
          m.pairs.emplace_back(pre_sys[i], post_sys[ps[i]]);
        for (std::size_t i = 0; i < pre_env.size(); ++i)
          m.pairs.emplace_back(pre_env[i], post_env[pe[i]]);
        ms.push_back(std::move(m));
      }
    options.push_back(std::move(ms));
  }

  // Search for matchings whose components form legal slices.
  std::vector<std::size_t> choice(options.size(), 0);
  std::function<bool(std::size_t)> assemble;
  std::vector<Slice> result;

  auto validate = [&]() -> bool {
    UnionFind uf;
    for (const auto& p : net.places) uf.find(p);
    for (std::size_t i = 0; i < options.size(); ++i)
      for (const auto& [a, b] : options[i][choice[i]].pairs) uf.unite(a, b);
    std::map<std::string, std::set<std::string>> components;
    for (const auto& p : net.places) components[uf.find(p)].insert(p);
    for (const auto& [root, places] : components) {
      std::int64_t tokens = 0;
      for (const auto& p : places) tokens += net.initial.count(p);
      if (tokens != 1) return false;
    }
    // Locally one pre and one post place per touched transition.
    for (const auto& t : ordered_transitions) {
      std::map<std::string, std::int64_t> pre_in, post_in;
      for (const auto& [p, c] : net.pre_of(t)) pre_in[uf.find(p)] += c;
      for (const auto& [p, c] : net.post_of(t)) post_in[uf.find(p)] += c;
      for (const auto& [root, c] : pre_in)
        if (c != 1 || post_in[root] != 1) return false;
      for (const auto& [root, c] : post_in)
        if (c != 1 || pre_in[root] != 1) return false;
    }
    result.clear();
    for (const auto& [root, places] : components) {
      Slice s;
      s.system = team(*places.begin());
      for (const auto& p : places) s.net.places.insert(p);
      for (const auto& t : ordered_transitions) {
        bool touches = false;
        for (const auto& [p, c] : net.pre_of(t))
          if (places.count(p)) touches = true;
        if (!touches) continue;
        s.net.transitions.insert(t);
        for (const auto& [p, c] : net.pre_of(t))
          if (places.count(p)) s.net.pre[t].add(p, c);
        for (const auto& [p, c] : net.post_of(t))
          if (places.count(p)) s.net.post[t].add(p, c);
      }
      for (const auto& [p, c] : net.initial)
        if (places.count(p)) s.net.initial.add(p, c);
      result.push_back(std::move(s));
    }
    std::sort(result.begin(), result.end(), [](const Slice& a, const Slice& b) {
      return a.net.initial.key() < b.net.initial.key();
    });
    return true;
  };

  assemble = [&](std::size_t ti) -> bool {
    if (ti == options.size()) return validate();
    for (std::size_t k = 0; k < options[ti].size(); ++k) {
      choice[ti] = k;
      if (assemble(ti + 1)) return true;
    }
    return false;
  };
  if (!assemble(0))
    throw invalid_input("net admits no slice decomposition");
  return result;
}

std::vector<LocalController> to_local_controllers(const PetriGame& g,
                                                  const StrategyNet& s) {
  std::set<std::string> sys, env;
  for (const auto& p : s.net.places)
    (g.is_system(s.label_of(p)) ? sys : env).insert(p);
  std::vector<LocalController> out;
  for (auto& slice : decompose_slices(s.net, sys, env)) {
    LocalController c;
    c.system = slice.system;
    c.net = std::move(slice.net);
    for (const auto& p : c.net.places) c.weak_labeling[p] = s.label_of(p);
    for (const auto& t : c.net.transitions) c.weak_labeling[t] = s.label_of(t);
    // The weak homomorphism maps local pre/post INTO the base transition's
    // pre/post; a slice sees one place of a joint transition.
    for (const auto& t : c.net.transitions) {
      const std::string& bt = c.weak_labeling.at(t);
      Multiset pre_img, post_img;
      for (const auto& [p, n] : c.net.pre_of(t)) pre_img.add(c.weak_labeling.at(p), n);
      for (const auto& [p, n] : c.net.post_of(t)) post_img.add(c.weak_labeling.at(p), n);
      if (!pre_img.subset_of(g.net.pre_of(bt)) || !post_img.subset_of(g.net.post_of(bt)))
        throw Error(ErrorKind::kInternal,
                    "controller labeling is not a weak homomorphism at '" + t + "'");
    }
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Isomorphism search

std::optional<std::map<std::string, std::string>> find_isomorphism(
    const PTNet& a, const std::map<std::string, std::string>& label_a, const PTNet& b,
    const std::map<std::string, std::string>& label_b) {
  auto lbl = [](const std::map<std::string, std::string>& m, const std::string& n) {
    auto it = m.find(n);
    return it == m.end() ? std::string{} : it->second;
  };

  // Signature: kind, label, initial tokens, labeled in/out flows.
  auto signature = [&](const PTNet& net, const std::map<std::string, std::string>& labels,
                       const std::string& n) {
    std::string sig = net.is_place(n) ? "p|" : "t|";
    sig += lbl(labels, n);
    if (net.is_place(n)) {
      sig += "|" + std::to_string(net.initial.count(n)) + "|";
      Multiset in, out;
      for (const auto& t : net.transitions) {
        if (net.post_of(t).contains(n)) in.add(lbl(labels, t), net.post_of(t).count(n));
        if (net.pre_of(t).contains(n)) out.add(lbl(labels, t), net.pre_of(t).count(n));
      }
      sig += in.key() + "|" + out.key();
    } else {
      Multiset in, out;
      for (const auto& [p, c] : net.pre_of(n)) in.add(lbl(labels, p), c);
      for (const auto& [p, c] : net.post_of(n)) out.add(lbl(labels, p), c);
      sig += "|" + in.key() + "|" + out.key();
    }
    return sig;
  };

  std::vector<std::string> nodes_a;
  for (const auto& p : a.places) nodes_a.push_back(p);
  for (const auto& t : a.transitions) nodes_a.push_back(t);
  std::vector<std::string> nodes_b;
  for (const auto& p : b.places) nodes_b.push_back(p);
  for (const auto& t : b.transitions) nodes_b.push_back(t);
  if (nodes_a.size() != nodes_b.size() || a.places.size() != b.places.size())
    return std::nullopt;

  std::map<std::string, std::vector<std::string>> pool;  // signature -> b nodes
  for (const auto& n : nodes_b) pool[signature(b, label_b, n)].push_back(n);
  std::map<std::string, std::vector<std::string>> cands;
  for (const auto& n : nodes_a) {
    auto it = pool.find(signature(a, label_a, n));
    if (it == pool.end()) return std::nullopt;
    cands[n] = it->second;
  }
  std::sort(nodes_a.begin(), nodes_a.end(), [&](const auto& x, const auto& y) {
    if (cands[x].size() != cands[y].size()) return cands[x].size() < cands[y].size();
    return x < y;
  });

  std::map<std::string, std::string> phi;
  std::set<std::string> used;

  auto weight_a = [&](const std::string& x, const std::string& y) -> std::int64_t {
    if (a.is_place(x)) return a.pre_of(y).count(x);
    return a.post_of(x).count(y);
  };
  auto weight_b = [&](const std::string& x, const std::string& y) -> std::int64_t {
    if (b.is_place(x)) return b.pre_of(y).count(x);
    return b.post_of(x).count(y);
  };

  std::function<bool(std::size_t)> dfs = [&](std::size_t i) -> bool {
    if (i == nodes_a.size()) {
      // Full flow and initial-marking verification.
      for (const auto& t : a.transitions) {
        for (const auto& [p, c] : a.pre_of(t))
          if (b.pre_of(phi[t]).count(phi[p]) != c) return false;
        for (const auto& [p, c] : a.post_of(t))
          if (b.post_of(phi[t]).count(phi[p]) != c) return false;
        if (a.pre_of(t).cardinality() != b.pre_of(phi[t]).cardinality()) return false;
        if (a.post_of(t).cardinality() != b.post_of(phi[t]).cardinality()) return false;
      }
      for (const auto& [p, c] : a.initial)
        if (b.initial.count(phi[p]) != c) return false;
      if (a.initial.cardinality() != b.initial.cardinality()) return false;
      return true;
    }
    const std::string& n = nodes_a[i];
    for (const auto& m : cands[n]) {
      if (used.count(m)) continue;
      bool ok = true;
      for (const auto& [x, y] : phi) {
        if (weight_a(n, x) != weight_b(m, y) || weight_a(x, n) != weight_b(y, m)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      phi[n] = m;
      used.insert(m);
      if (dfs(i + 1)) return true;
      phi.erase(n);
      used.erase(m);
    }
    return false;
  };
  if (dfs(0)) return phi;
  return std::nullopt;
}

DistributionCheck check_distribution(const PetriGame& g, const StrategyNet& s,
                                     const std::vector<LocalController>& controllers) {
  DistributionCheck res;
  std::vector<PTNet> nets;
  std::map<std::string, std::string> labels;
  for (const auto& c : controllers) {
    nets.push_back(c.net);
    for (const auto& [n, l] : c.weak_labeling) {
      auto [it, fresh] = labels.emplace(n, l);
      if (!fresh && it->second != l) {
        res.failure = "controllers disagree on the label of '" + n + "'";
        return res;
      }
    }
  }
  PTNet composed = parallel_compose(nets);
  PTNet composed_r = reachable_part(composed, std::size_t{1} << 22);
  PTNet strategy_r = reachable_part(s.net, std::size_t{1} << 22);

  auto iso = find_isomorphism(composed_r, labels, strategy_r, s.labeling);
  if (!iso) {
    res.failure = "reachable part of the composition is not isomorphic to the strategy";
    return res;
  }
  res.ok = true;
  res.witness = *iso;
  return res;
}

}  // namespace pgsynth
