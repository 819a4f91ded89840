#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pgsynth/net.hpp"
#include "pgsynth/strategy.hpp"

namespace pgsynth {

// The course of one token through a concurrency-preserving net: one initial
// token, and locally one pre and one post place per transition. Its
// transition set keeps the host ids, so composed slices synchronize.
struct Slice {
  PTNet net;
  bool system = false;  // all places system, or all environment
};

// One-token safe net with a weak labeling into the game net: the image of a
// local pre/post is contained in the labeled transition's pre/post.
struct LocalController {
  PTNet net;
  std::map<std::string, std::string> weak_labeling;
  bool system = false;
};

// Splits a safe, reachable, concurrency-preserving net into slices whose
// place sets partition the net's places.
std::vector<Slice> decompose_slices(const PTNet& net,
                                    const std::set<std::string>& system_places,
                                    const std::set<std::string>& environment_places);

// One controller per slice of the verified strategy; weak labelings are the
// strategy labeling restricted to each slice.
std::vector<LocalController> to_local_controllers(const PetriGame& g,
                                                  const StrategyNet& s);

struct DistributionCheck {
  bool ok = false;
  // On success: composed-net node -> strategy node.
  std::map<std::string, std::string> witness;
  std::string failure;  // on mismatch: what could not be matched
};

// Composes the controllers, trims to the reachable part, and searches for a
// label-preserving initial isomorphism onto the strategy's reachable part.
DistributionCheck check_distribution(const PetriGame& g, const StrategyNet& s,
                                     const std::vector<LocalController>& controllers);

// Label-preserving initial isomorphism between two labeled nets; exposed for
// tests (composition laws, strategy shape checks).
std::optional<std::map<std::string, std::string>> find_isomorphism(
    const PTNet& a, const std::map<std::string, std::string>& label_a, const PTNet& b,
    const std::map<std::string, std::string>& label_b);

// Nodes of the net that occur in some reachable marking or firing.
PTNet reachable_part(const PTNet& net, std::size_t state_limit);

}  // namespace pgsynth
