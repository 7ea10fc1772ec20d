#pragma once

#include <array>
#include <optional>
#include <vector>

#include "tudof/network.hpp"
#include "tudof/paths.hpp"

namespace tudof {

// A node off the target path with an edge into it and a feeder path from the opposite source.
struct InterfererWitness {
  NodeIndex interferer = 0;
  NodeIndex target = 0;  // head of the interfering edge, on the target path
  Path feeder;           // opposite source ⇝ interferer, avoiding the target path
  bool direct = false;   // interferer lies on the companion path
};

struct InterferenceProfile {
  NodeSet subset;
  // Index 0: interference on the first pair's path; index 1: on the second pair's path.
  std::array<std::vector<InterfererWitness>, 2> witnesses;

  int count(Pair p) const { return static_cast<int>(witnesses[static_cast<std::size_t>(p)].size()); }
  int direct_count(Pair p) const;
};

InterferenceProfile interference_profile(const LayeredNetwork& net, const NodeSet& subset, const Path& p11,
                                         const Path& p22);
// Counts only, for search loops. Index 0 is interference on p11.
std::array<int, 2> interference_counts(const LayeredNetwork& net, const NodeSet& subset, const NodeSet& p11,
                                       const NodeSet& p22);
// Nodes of `companion` with an edge into `target`.
int direct_interference(const LayeredNetwork& net, const Path& companion, const Path& target);
// Checks membership, edge, feeder disjointness and the direct flag from scratch.
bool witness_valid(const LayeredNetwork& net, const NodeSet& subset, const Path& target, const Path& companion,
                   const InterfererWitness& w);

enum class ManageMode { both, first_only, second_only };

struct SubsetSearch {
  std::optional<NodeSet> subset;
  bool exhaustive = true;
};

inline constexpr std::size_t kExhaustiveComplementLimit = 18;

// Smallest S ⊇ p11 ∪ p22 (ties broken lexicographically) whose interference counts avoid 1.
SubsetSearch find_manageable_subset(const LayeredNetwork& net, const Path& p11, const Path& p22, ManageMode mode);
bool counts_manageable(const std::array<int, 2>& counts, ManageMode mode);

struct KeyNode {
  NodeIndex node = 0;
  Pair pair = Pair::first;
  int input_layer = 0;
};

// First node of `path` whose removal from G[subset] cuts the opposite source from the path's destination.
std::optional<KeyNode> find_key_node(const LayeredNetwork& net, const NodeSet& subset, const Path& path, Pair pair);

struct KeyNodeWitness {
  PathPair meeting_paths;                 // s1 ⇝ key and s2 ⇝ key, sharing only the key node
  std::vector<NodeIndex> reached_inputs;  // inputs of the key node reachable from the opposite source
};

// Throws InvariantViolation when the witnesses cannot be found.
KeyNodeWitness key_node_witnesses(const LayeredNetwork& net, const NodeSet& subset, const KeyNode& key);

}  // namespace tudof
