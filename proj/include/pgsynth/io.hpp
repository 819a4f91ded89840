#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "pgsynth/decision_game.hpp"
#include "pgsynth/distribution.hpp"
#include "pgsynth/net.hpp"
#include "pgsynth/strategy.hpp"
#include "pgsynth/unfolding.hpp"

namespace pgsynth {

// One JSON document family for games, strategies/prefixes, and controllers,
// distinguished by a "kind" field. Serialization is canonical: fixed key
// order, nodes sorted by id, two-space indent, trailing newline.

std::string document_kind(const std::string& text);  // "game", "strategy", ...

PetriGame parse_game(const std::string& text);
std::string serialize_game(const PetriGame& g);

StrategyNet parse_strategy(const std::string& text);  // kinds strategy/prefix
std::string serialize_strategy(const StrategyNet& s);
std::string serialize_prefix(const BranchingProcess& bp);

std::vector<LocalController> parse_controllers(const std::string& text);
std::string serialize_controllers(const std::vector<LocalController>& cs);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// ---------------------------------------------------------------------------
// DOT rendering. All output is deterministic.

std::string export_dot_net(const PTNet& net);
std::string export_dot_game(const PetriGame& g);
// Labeled nets (strategies, prefixes, controllers) show their labels; the
// partition/bad classification is pulled through the labeling.
std::string export_dot_strategy(const PetriGame& g, const StrategyNet& s);
std::string export_dot_branching_process(const PetriGame& g, const BranchingProcess& bp);
std::string export_dot_controllers(const PetriGame& g,
                                   const std::vector<LocalController>& cs);
// Player-1 states as diamonds, Player 0 as rectangles; doubled borders for
// Player-0 wins, bold for Player-1 wins.
std::string export_dot_game_graph(const GameGraph& gg);

// ---------------------------------------------------------------------------
// Command-line driver. Returns the process exit code:
//   0 success / realizable / verified
//   1 unrealizable / verification or distribution failure
//   2 invalid input
//   3 resource limit exceeded
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgsynth
