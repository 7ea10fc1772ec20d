#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tudof/network.hpp"
#include "tudof/paths.hpp"

// Reference computations for tests. Everything here is plain enumeration written without the
// library's search code, so agreement is evidence rather than tautology.
namespace oracle {

using tudof::LayeredNetwork;
using tudof::NodeIndex;
using tudof::NodeSet;
using NodeList = std::vector<NodeIndex>;

std::string data_path(const std::string& name);
LayeredNetwork fixture(const std::string& name);

std::vector<NodeList> paths(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within);
bool reach(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within);
NodeSet mask(const NodeList& p);

// Vertex-disjoint a0 ⇝ b0 and a1 ⇝ b1 inside `within`.
bool disjoint_pair_exists(const LayeredNetwork& net, NodeIndex a0, NodeIndex b0, NodeIndex a1, NodeIndex b1,
                          const NodeSet& within);
// Up to `limit` disjoint (s1 ⇝ d1, s2 ⇝ d2) pairs from plain enumeration.
std::vector<tudof::PathPair> disjoint_path_pairs(const LayeredNetwork& net, std::size_t limit);
// Largest number of pairwise vertex-disjoint paths from {a0,a1} to {b0,b1} with any pairing (0, 1 or 2).
int disjoint_count(const LayeredNetwork& net, NodeIndex a0, NodeIndex a1, NodeIndex b0, NodeIndex b1);

// Nodes of `subset` off `target` with an edge into it and a path from `source` avoiding `target`.
int interferers(const LayeredNetwork& net, const NodeSet& subset, const NodeSet& target, NodeIndex source);

// Size of the smallest S ⊇ p11 ∪ p22 meeting the mode (0 both, 1 first only, 2 second only).
std::optional<std::size_t> smallest_manageable(const LayeredNetwork& net, const NodeSet& p11, const NodeSet& p22,
                                               int mode);

// Σ over u ⇝ v paths with interior in `forwarders` of the gain product.
double path_sum_gain(const LayeredNetwork& net, const NodeSet& forwarders, NodeIndex u, NodeIndex v);
// Entry (u, v) of the product of per-layer gain matrices, every node forwarding.
double layer_product_gain(const LayeredNetwork& net, NodeIndex u, NodeIndex v);

// Removal of one node (or, for A′, an edge's endpoints) separating a destination from both sources
// and the opposite source from both destinations.
bool has_case_a(const LayeredNetwork& net, const NodeSet& within);

// Direct checks of the butterfly and grail definitions on explicit node lists.
bool butterfly_holds(const LayeredNetwork& net, const NodeList& shared, const NodeList& p11, const NodeList& p22,
                     const NodeList& p12, const NodeList& p21);
bool grail_holds(const LayeredNetwork& net, const NodeList& p12, const NodeList& p21, NodeIndex wa, NodeIndex wb,
                 bool mirrored);

// Random networks with at most `max_nodes` nodes.
std::vector<LayeredNetwork> suite(std::size_t count, std::uint64_t first_seed, std::size_t max_nodes,
                                  double edge_probability);

NodeList to_list(std::span<const NodeIndex> nodes);

}  // namespace oracle
