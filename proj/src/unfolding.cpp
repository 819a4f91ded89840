#include "pgsynth/unfolding.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace pgsynth {

namespace {

// Stable 64-bit FNV-1a; node ids must not depend on the platform.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string short_hash(const std::string& s) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a(s);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string initial_place_id(const std::string& label, std::int64_t copy) {
  return label + "~" + short_hash("init|" + label + "|" + std::to_string(copy));
}

std::string instance_transition_id(const std::string& label,
                                   const std::set<std::string>& preset) {
  std::string body = "t|" + label;
  for (const auto& p : preset) body += "|" + p;
  return label + "~" + short_hash(body);
}

std::string produced_place_id(const std::string& label, const std::string& producer,
                              std::int64_t copy) {
  return label + "~" +
         short_hash("p|" + label + "|" + producer + "|" + std::to_string(copy));
}

void bitset_set(std::vector<std::uint64_t>& w, std::size_t i) {
  if (i / 64 >= w.size()) w.resize(i / 64 + 1, 0);
  w[i / 64] |= 1ull << (i % 64);
}

bool bitset_test(const std::vector<std::uint64_t>& w, std::size_t i) {
  return i / 64 < w.size() && ((w[i / 64] >> (i % 64)) & 1);
}

void bitset_merge(std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] |= b[i];
}

// Shared causal logic: past bitsets plus the place->exiting-transition lists,
// enough to answer leq/conflict/concurrent queries.
struct CausalTables {
  std::vector<std::vector<std::uint64_t>> past;
  std::vector<bool> is_place;
  std::vector<std::vector<std::size_t>> place_out;

  std::size_t add(bool place, const std::vector<std::size_t>& preds) {
    std::size_t ix = past.size();
    std::vector<std::uint64_t> b;
    for (std::size_t p : preds) bitset_merge(b, past[p]);
    bitset_set(b, ix);
    past.push_back(std::move(b));
    is_place.push_back(place);
    place_out.emplace_back();
    return ix;
  }

  bool leq(std::size_t x, std::size_t y) const { return bitset_test(past[y], x); }

  bool conflict(std::size_t x, std::size_t y) const {
    const auto& a = past[x];
    const auto& b = past[y];
    std::size_t words = std::min(a.size(), b.size());
    for (std::size_t wi = 0; wi < words; ++wi) {
      std::uint64_t common = a[wi] & b[wi];
      while (common) {
        std::size_t bit = wi * 64 + static_cast<std::size_t>(__builtin_ctzll(common));
        common &= common - 1;
        if (!is_place[bit]) continue;
        // A shared past place whose postset reaches x and y through different
        // arcs witnesses the conflict.
        std::size_t toward_x = SIZE_MAX, toward_y = SIZE_MAX;
        bool two_x = false, two_y = false;
        for (std::size_t t : place_out[bit]) {
          if (leq(t, x)) {
            if (toward_x != SIZE_MAX && toward_x != t) two_x = true;
            toward_x = t;
          }
          if (leq(t, y)) {
            if (toward_y != SIZE_MAX && toward_y != t) two_y = true;
            toward_y = t;
          }
        }
        if (toward_x == SIZE_MAX || toward_y == SIZE_MAX) continue;
        if (two_x || two_y || toward_x != toward_y) return true;
      }
    }
    return false;
  }

  bool concurrent(std::size_t x, std::size_t y) const {
    return !leq(x, y) && !leq(y, x) && !conflict(x, y);
  }
};

}  // namespace

const std::string& BranchingProcess::label_of(const std::string& node) const {
  auto it = label.find(node);
  if (it == label.end()) throw invalid_input("node '" + node + "' has no label");
  return it->second;
}

Multiset BranchingProcess::label_image(const std::set<std::string>& nodes) const {
  Multiset m;
  for (const auto& n : nodes) m.add(label_of(n));
  return m;
}

std::size_t BranchingProcess::ix(const std::string& node) const {
  auto it = node_ix_.find(node);
  if (it == node_ix_.end()) throw invalid_input("unknown node '" + node + "'");
  return it->second;
}

bool BranchingProcess::leq_ix(std::size_t x, std::size_t y) const {
  return bitset_test(past_[y], x);
}

bool BranchingProcess::conflict_ix(std::size_t x, std::size_t y) const {
  const auto& a = past_[x];
  const auto& b = past_[y];
  std::size_t words = std::min(a.size(), b.size());
  for (std::size_t wi = 0; wi < words; ++wi) {
    std::uint64_t common = a[wi] & b[wi];
    while (common) {
      std::size_t bit = wi * 64 + static_cast<std::size_t>(__builtin_ctzll(common));
      common &= common - 1;
      if (!is_place_ix_[bit]) continue;
      std::size_t toward_x = SIZE_MAX, toward_y = SIZE_MAX;
      bool two_x = false, two_y = false;
      for (std::size_t tt : place_out_ix_[bit]) {
        if (leq_ix(tt, x)) {
          if (toward_x != SIZE_MAX && toward_x != tt) two_x = true;
          toward_x = tt;
        }
        if (leq_ix(tt, y)) {
          if (toward_y != SIZE_MAX && toward_y != tt) two_y = true;
          toward_y = tt;
        }
      }
      if (toward_x == SIZE_MAX || toward_y == SIZE_MAX) continue;
      if (two_x || two_y || toward_x != toward_y) return true;
    }
  }
  return false;
}

bool BranchingProcess::causal_leq(const std::string& x, const std::string& y) const {
  return leq_ix(ix(x), ix(y));
}

bool BranchingProcess::in_conflict(const std::string& x, const std::string& y) const {
  return conflict_ix(ix(x), ix(y));
}

bool BranchingProcess::concurrent(const std::string& x, const std::string& y) const {
  std::size_t a = ix(x), b = ix(y);
  return !leq_ix(a, b) && !leq_ix(b, a) && !conflict_ix(a, b);
}

std::set<std::string> BranchingProcess::past(const std::string& node) const {
  std::size_t y = ix(node);
  std::set<std::string> result;
  for (std::size_t i = 0; i < order_.size(); ++i)
    if (bitset_test(past_[y], i)) result.insert(order_[i]);
  return result;
}

void BranchingProcess::finalize() {
  order_.clear();
  node_ix_.clear();
  past_.clear();
  is_place_ix_.clear();
  place_out_ix_.clear();

  std::map<std::string, std::vector<std::string>> preds, succs;
  std::map<std::string, std::size_t> indeg;
  std::vector<std::string> all;
  for (const auto& p : occ.places) all.push_back(p);
  for (const auto& t : occ.transitions) all.push_back(t);
  std::sort(all.begin(), all.end());
  for (const auto& n : all) indeg[n] = 0;
  for (const auto& t : occ.transitions) {
    for (const auto& [p, c] : occ.pre_of(t)) {
      preds[t].push_back(p);
      succs[p].push_back(t);
      indeg[t]++;
    }
    for (const auto& [p, c] : occ.post_of(t)) {
      preds[p].push_back(t);
      succs[t].push_back(p);
      indeg[p]++;
    }
  }
  std::deque<std::string> ready;
  for (const auto& n : all)
    if (indeg[n] == 0) ready.push_back(n);
  while (!ready.empty()) {
    std::string n = ready.front();
    ready.pop_front();
    order_.push_back(n);
    for (const auto& s : succs[n])
      if (--indeg[s] == 0) ready.push_back(s);
  }
  well_founded_ = order_.size() == all.size();
  if (!well_founded_) {
    // Cyclic flow; append leftovers so queries stay total. Validation reports
    // the violation separately.
    std::set<std::string> placed(order_.begin(), order_.end());
    for (const auto& n : all)
      if (!placed.count(n)) order_.push_back(n);
  }

  CausalTables tables;
  for (std::size_t i = 0; i < order_.size(); ++i) node_ix_[order_[i]] = i;
  for (const auto& n : order_) {
    std::vector<std::size_t> pix;
    auto it = preds.find(n);
    if (it != preds.end())
      for (const auto& p : it->second)
        if (node_ix_[p] < tables.past.size()) pix.push_back(node_ix_[p]);
    tables.add(occ.is_place(n), pix);
  }
  past_ = std::move(tables.past);
  is_place_ix_.assign(order_.size(), false);
  for (std::size_t i = 0; i < order_.size(); ++i)
    is_place_ix_[i] = occ.is_place(order_[i]);
  place_out_ix_.assign(order_.size(), {});
  for (const auto& t : occ.transitions)
    for (const auto& [p, c] : occ.pre_of(t))
      place_out_ix_[node_ix_[p]].push_back(node_ix_[t]);
}

// ---------------------------------------------------------------------------
// Prefix construction

BranchingProcess unfold_prefix(const PTNet& base, int depth) {
  base.check_well_formed();
  if (depth < 0) throw invalid_input("negative unfolding depth");

  BranchingProcess bp;
  bp.base = base;

  CausalTables tables;
  std::vector<std::string> node_of_ix;
  std::map<std::string, std::size_t> ix_of;
  std::map<std::string, int> node_depth;
  // Occurrence places grouped by base label, in creation order.
  std::map<std::string, std::vector<std::size_t>> places_by_label;

  auto add_place = [&](const std::string& id, const std::string& lbl, int d,
                       const std::vector<std::size_t>& preds) {
    if (ix_of.count(id)) throw Error(ErrorKind::kInternal, "node id collision: " + id);
    std::size_t ix = tables.add(true, preds);
    ix_of[id] = ix;
    node_of_ix.push_back(id);
    bp.occ.places.insert(id);
    bp.label[id] = lbl;
    node_depth[id] = d;
    places_by_label[lbl].push_back(ix);
    return ix;
  };

  for (const auto& [p, c] : base.initial) {
    for (std::int64_t k = 0; k < c; ++k) {
      std::string id = initial_place_id(p, k);
      add_place(id, p, 0, {});
      bp.occ.initial.add(id);
    }
  }

  // Fixpoint over layers: each pass may enable further co-sets.
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& t : base.transitions) {
      const Multiset& pre = base.pre_of(t);
      // Flatten the precondition into (label, needed-count) groups.
      std::vector<std::pair<std::string, std::int64_t>> groups(pre.begin(), pre.end());

      // Backtracking enumeration of concurrent co-sets matching the groups.
      std::vector<std::size_t> chosen;
      std::vector<std::set<std::string>> found;
      std::vector<std::size_t> group_start;  // enforce ascending order per group

      std::function<void(std::size_t, std::int64_t, std::size_t)> recurse =
          [&](std::size_t gi, std::int64_t need, std::size_t from) {
            if (need == 0) {
              ++gi;
              if (gi == groups.size()) {
                std::set<std::string> coset;
                for (std::size_t ix : chosen) coset.insert(node_of_ix[ix]);
                found.push_back(std::move(coset));
                return;
              }
              recurse(gi, groups[gi].second, 0);
              return;
            }
            const auto& cands = places_by_label[groups[gi].first];
            for (std::size_t ci = from; ci < cands.size(); ++ci) {
              std::size_t cand = cands[ci];
              bool ok = true;
              for (std::size_t prev : chosen)
                if (!tables.concurrent(prev, cand)) {
                  ok = false;
                  break;
                }
              if (!ok) continue;
              chosen.push_back(cand);
              recurse(gi, need - 1, ci + 1);
              chosen.pop_back();
            }
          };
      if (!groups.empty()) recurse(0, groups[0].second, 0);

      for (const auto& coset : found) {
        int max_depth = 0;
        for (const auto& p : coset) max_depth = std::max(max_depth, node_depth[p]);
        int layer = max_depth + 1;
        if (layer > depth) continue;
        std::string tid = instance_transition_id(t, coset);
        if (ix_of.count(tid)) continue;

        std::vector<std::size_t> preds;
        for (const auto& p : coset) preds.push_back(ix_of[p]);
        std::size_t tix = tables.add(false, preds);
        ix_of[tid] = tix;
        node_of_ix.push_back(tid);
        bp.occ.transitions.insert(tid);
        bp.label[tid] = t;
        node_depth[tid] = layer;
        for (const auto& p : coset) {
          bp.occ.pre[tid].add(p);
          tables.place_out[ix_of[p]].push_back(tix);
        }
        for (const auto& [q, c] : base.post_of(t)) {
          for (std::int64_t k = 0; k < c; ++k) {
            std::string pid = produced_place_id(q, tid, k);
            add_place(pid, q, layer, {tix});
            bp.occ.post[tid].add(pid);
          }
        }
        grew = true;
      }
    }
  }

  bp.finalize();
  return bp;
}

BranchingProcess as_branching_process(const PTNet& occ,
                                      const std::map<std::string, std::string>& labeling,
                                      const PTNet& base) {
  BranchingProcess bp;
  bp.occ = occ;
  bp.label = labeling;
  bp.base = base;
  bp.finalize();
  return bp;
}

// ---------------------------------------------------------------------------
// Cuts

std::vector<Cut> enumerate_cuts(const BranchingProcess& bp, std::size_t limit) {
  // The cuts of a finite occurrence net are exactly its reachable markings.
  ReachabilityGraph rg;
  try {
    rg = reachable_markings(bp.occ, limit);
  } catch (const Error& e) {
    throw limit_exceeded(std::string("cut enumeration: ") + e.what());
  }
  std::vector<Cut> cuts;
  cuts.reserve(rg.markings.size());
  for (const auto& m : rg.markings) {
    Cut c;
    for (const auto& [p, n] : m) {
      if (n != 1)
        throw invalid_input("occurrence net is not safe at place '" + p + "'");
      c.places.insert(p);
    }
    cuts.push_back(std::move(c));
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

PTNet future_restrict(const BranchingProcess& bp, const Cut& c) {
  for (const auto& p : c.places)
    if (!bp.occ.is_place(p)) throw invalid_input("cut mentions unknown place '" + p + "'");

  std::set<std::string> future;
  for (const auto& n : bp.node_order()) {
    for (const auto& s : c.places)
      if (bp.causal_leq(s, n)) {
        future.insert(n);
        break;
      }
  }
  PTNet r;
  for (const auto& n : future)
    if (bp.occ.is_place(n)) r.places.insert(n);
  for (const auto& n : future) {
    if (!bp.occ.is_transition(n)) continue;
    // Transitions that lost part of their preset can never fire from C.
    bool full_pre = true;
    for (const auto& [p, cnt] : bp.occ.pre_of(n))
      if (!future.count(p)) {
        full_pre = false;
        break;
      }
    if (!full_pre) continue;
    r.transitions.insert(n);
    r.pre[n] = bp.occ.pre_of(n);
    r.post[n] = bp.occ.post_of(n);
  }
  for (const auto& p : c.places) r.initial.add(p);
  return r;
}

namespace {

// Transitions fireable from C inside the future-restricted prefix.
std::set<std::string> reachable_transitions(const BranchingProcess& bp, const Cut& c) {
  PTNet restricted = future_restrict(bp, c);
  ReachabilityGraph rg = reachable_markings(restricted, std::size_t{1} << 22);
  std::set<std::string> fired;
  for (const auto& e : rg.edges) fired.insert(e.transition);
  return fired;
}

}  // namespace

PlaceType classify_type(const BranchingProcess& sp, const PetriGame& g, const Cut& c,
                        const std::string& p, const std::string& q) {
  if (!c.places.count(p) || !c.places.count(q))
    throw invalid_input("classify_type: p and q must belong to the cut");
  if (!g.is_environment(sp.label_of(p)))
    throw invalid_input("classify_type: '" + p + "' is not an environment place");

  std::set<std::string> fireable = reachable_transitions(sp, c);

  bool type2 = true;
  for (const auto& t : sp.occ.transitions) {
    if (!sp.causal_leq(q, t)) continue;  // t not in fut(q)
    if (fireable.count(t) && sp.causal_leq(p, t)) {
      type2 = false;
      break;
    }
  }
  if (type2) return PlaceType::kType2;

  bool type1 = true;
  for (const auto& t : sp.occ.out_transitions(q)) {
    if (fireable.count(t) && !sp.causal_leq(p, t)) {
      type1 = false;
      break;
    }
  }
  return type1 ? PlaceType::kType1 : PlaceType::kNone;
}

namespace {

// C <= C' : every place of C has a successor (or itself) in C'.
bool cut_leq(const BranchingProcess& bp, const Cut& a, const Cut& b) {
  for (const auto& x : a.places) {
    bool covered = false;
    for (const auto& y : b.places)
      if (bp.causal_leq(x, y)) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

}  // namespace

Cut compute_mcut(const BranchingProcess& sp, const PetriGame& g, const std::string& p) {
  if (!sp.occ.is_place(p)) throw invalid_input("unknown place '" + p + "'");
  if (!g.is_environment(sp.label_of(p)))
    throw invalid_input("mcut: '" + p + "' is not an environment place");

  std::vector<Cut> candidates;
  for (const auto& c : enumerate_cuts(sp, std::size_t{1} << 22)) {
    if (!c.places.count(p)) continue;
    bool all_typed = true;
    for (const auto& q : c.places)
      if (classify_type(sp, g, c, p, q) == PlaceType::kNone) {
        all_typed = false;
        break;
      }
    if (all_typed) candidates.push_back(c);
  }
  for (const auto& c : candidates) {
    bool least = true;
    for (const auto& other : candidates)
      if (!cut_leq(sp, c, other)) {
        least = false;
        break;
      }
    if (least) return c;
  }
  throw invalid_input("mcut(" + p + ") not determined: prefix too shallow");
}

Cut compute_ecut(const BranchingProcess& sp, const PetriGame& g, const std::string& p,
                 const std::string& t) {
  if (!sp.occ.is_transition(t)) throw invalid_input("unknown transition '" + t + "'");
  if (!sp.occ.pre_of(t).contains(p))
    throw invalid_input("ecut: '" + t + "' is not a strategy successor of '" + p + "'");
  bool env_participation = false;
  for (const auto& [q, c] : sp.occ.pre_of(t))
    if (g.is_environment(sp.label_of(q))) env_participation = true;
  if (!env_participation)
    throw invalid_input("ecut: '" + t + "' has no environment participation");

  Cut m = compute_mcut(sp, g, p);
  Marking marking;
  for (const auto& q : m.places) marking.add(q);
  if (!sp.occ.pre_of(t).subset_of(marking))
    throw invalid_input("ecut: '" + t + "' is not enabled at mcut(" + p + ")");
  Marking next = fire(sp.occ, marking, t);
  Cut e;
  for (const auto& [q, c] : next) e.places.insert(q);
  return e;
}

// ---------------------------------------------------------------------------
// Validation

BranchingProcessReport validate_branching_process(const BranchingProcess& bp) {
  BranchingProcessReport rep;
  try {
    bp.occ.check_well_formed();
  } catch (const Error& e) {
    rep.fail(e.what());
    return rep;
  }
  if (!bp.flow_well_founded()) rep.fail("flow relation is not well-founded");

  for (const auto& t : bp.occ.transitions) {
    for (const auto& [p, c] : bp.occ.pre_of(t))
      if (c != 1) rep.fail("pre(" + t + ") is not a set");
    for (const auto& [p, c] : bp.occ.post_of(t))
      if (c != 1) rep.fail("post(" + t + ") is not a set");
  }

  for (const auto& p : bp.occ.places) {
    std::int64_t producers = 0;
    for (const auto& t : bp.occ.transitions) producers += bp.occ.post_of(t).count(p);
    if (producers > 1) rep.fail("place '" + p + "' has " + std::to_string(producers) +
                                " incoming transitions");
  }

  if (bp.flow_well_founded())
    for (const auto& t : bp.occ.transitions)
      if (bp.in_conflict(t, t)) rep.fail("transition '" + t + "' is in self-conflict");

  // Labeling: a homomorphism into the base, injective on equal presets.
  for (const auto& n : bp.node_order()) {
    auto it = bp.label.find(n);
    if (it == bp.label.end()) {
      rep.fail("node '" + n + "' is unlabeled");
      continue;
    }
    if (bp.occ.is_place(n) && !bp.base.is_place(it->second))
      rep.fail("place '" + n + "' is labeled by non-place '" + it->second + "'");
    if (bp.occ.is_transition(n) && !bp.base.is_transition(it->second))
      rep.fail("transition '" + n + "' is labeled by non-transition '" + it->second + "'");
  }
  auto image = [&](const Multiset& nodes) {
    Multiset m;
    for (const auto& [n, c] : nodes) {
      auto it = bp.label.find(n);
      if (it != bp.label.end()) m.add(it->second, c);
    }
    return m;
  };
  for (const auto& t : bp.occ.transitions) {
    auto it = bp.label.find(t);
    if (it == bp.label.end()) continue;
    if (image(bp.occ.pre_of(t)) != bp.base.pre_of(it->second))
      rep.fail("labeling breaks pre-image equality at '" + t + "'");
    if (image(bp.occ.post_of(t)) != bp.base.post_of(it->second))
      rep.fail("labeling breaks post-image equality at '" + t + "'");
  }
  std::map<std::string, std::string> by_preset_label;
  for (const auto& t : bp.occ.transitions) {
    auto it = bp.label.find(t);
    if (it == bp.label.end()) continue;
    std::string key = bp.occ.pre_of(t).key() + "->" + it->second;
    auto [slot, fresh] = by_preset_label.emplace(key, t);
    if (!fresh)
      rep.fail("transitions '" + slot->second + "' and '" + t +
               "' share preset and label");
  }

  // Initial marking = places without incoming transitions, one token each.
  Marking minimal;
  for (const auto& p : bp.occ.places) {
    bool has_producer = false;
    for (const auto& t : bp.occ.transitions)
      if (bp.occ.post_of(t).contains(p)) {
        has_producer = true;
        break;
      }
    if (!has_producer) minimal.add(p);
  }
  if (!(minimal == bp.occ.initial))
    rep.fail("initial marking differs from the minimal places");

  return rep;
}

}  // namespace pgsynth
