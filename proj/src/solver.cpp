#include "pgsynth/solver.hpp"

#include <algorithm>
#include <deque>

namespace pgsynth {

Arena Arena::of(const GameGraph& gg) {
  Arena a;
  a.num_states = gg.states.size();
  a.owner = gg.owner;
  a.succ.assign(a.num_states, {});
  for (const auto& e : gg.edges) a.succ[e.from].push_back(e.to);
  for (auto& s : a.succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  a.initial = gg.initial;
  a.w0 = gg.w0;
  a.w1 = gg.w1;
  return a;
}

SolveResult solve(const Arena& a) {
  if (a.owner.size() != a.num_states || a.succ.size() != a.num_states)
    throw invalid_input("solver: malformed arena");
  for (std::size_t s : a.w0)
    if (a.w1.count(s)) throw invalid_input("solver: w0 and w1 overlap");

  std::vector<std::vector<std::size_t>> pred(a.num_states);
  std::vector<std::size_t> degree(a.num_states, 0);
  for (std::size_t v = 0; v < a.num_states; ++v) {
    degree[v] = a.succ[v].size();
    for (std::size_t w : a.succ[v]) pred[w].push_back(v);
  }

  std::vector<bool> in_attr(a.num_states, false);
  std::deque<std::size_t> work;
  for (std::size_t s : a.w1) {
    in_attr[s] = true;
    work.push_back(s);
  }
  while (!work.empty()) {
    std::size_t v = work.front();
    work.pop_front();
    for (std::size_t u : pred[v]) {
      if (in_attr[u] || a.w0.count(u)) continue;  // Player-0 wins are absorbing
      if (a.owner[u] == Player::kPlayer1) {
        in_attr[u] = true;
        work.push_back(u);
      } else if (--degree[u] == 0) {
        in_attr[u] = true;
        work.push_back(u);
      }
    }
  }

  SolveResult r;
  for (std::size_t v = 0; v < a.num_states; ++v) {
    if (in_attr[v])
      r.p1_attractor.insert(v);
    else
      r.p0_winning.insert(v);
  }
  for (std::size_t v : r.p0_winning) {
    if (a.owner[v] != Player::kPlayer0 || a.succ[v].empty()) continue;
    for (std::size_t w : a.succ[v]) {
      if (!in_attr[w]) {
        r.p0_choice[v] = w;  // successors are sorted: smallest winning one
        break;
      }
    }
  }
  for (std::size_t v : a.initial)
    if (!in_attr[v]) r.winning_initials.insert(v);
  return r;
}

bool realizable(const SolveResult& r) { return !r.winning_initials.empty(); }

}  // namespace pgsynth
