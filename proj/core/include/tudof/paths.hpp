#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tudof/network.hpp"

namespace tudof {

// Node sequence joined by stored edges with strictly increasing layers.
class Path {
 public:
  Path() = default;
  // Throws ValidationError unless consecutive nodes are joined by edges of `net`.
  Path(const LayeredNetwork& net, std::vector<NodeIndex> nodes);
  static Path from_ids(const LayeredNetwork& net, std::span<const std::string> ids);

  std::span<const NodeIndex> nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  NodeIndex front() const { return nodes_.front(); }
  NodeIndex back() const { return nodes_.back(); }
  NodeIndex operator[](std::size_t k) const { return nodes_[k]; }
  bool contains(NodeIndex v) const { return mask_.contains(v); }
  const NodeSet& mask() const { return mask_; }
  std::optional<std::size_t> position(NodeIndex v) const;
  // Node of the path in the given layer, if any.
  std::optional<NodeIndex> at_layer(const LayeredNetwork& net, int layer) const;

  friend bool operator==(const Path& a, const Path& b) { return a.nodes_ == b.nodes_; }

 private:
  std::vector<NodeIndex> nodes_;
  NodeSet mask_;
};

// P[from, to]; both bounds must lie on p in order.
Path slice(const LayeredNetwork& net, const Path& p, NodeIndex from, NodeIndex to);
// p ⊕ q; the last node of p must equal the first node of q.
Path concat(const LayeredNetwork& net, const Path& p, const Path& q);
std::string path_to_string(const LayeredNetwork& net, const Path& p);

// All paths u ⇝ v through nodes of `within`, at most `limit` of them, in lexicographic index order.
std::vector<Path> enumerate_paths(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within,
                                  std::size_t limit = SIZE_MAX);
// Number of u ⇝ v paths inside `within`, saturating at UINT64_MAX.
std::uint64_t count_paths(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within);
// One u ⇝ v path inside `within` (smallest indices first), if any.
std::optional<Path> find_path(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within);

// Maximum number of vertex-disjoint paths from `sources` to `sinks` inside `within` (node-split max-flow).
int vertex_disjoint_flow(const LayeredNetwork& net, const NodeSet& sources, const NodeSet& sinks,
                         const NodeSet& within);
// Maximum number of edge-disjoint paths from `sources` to `sinks` (unit edge capacities).
int edge_disjoint_flow(const LayeredNetwork& net, const NodeSet& sources, const NodeSet& sinks);

using PathPair = std::pair<Path, Path>;

// Vertex-disjoint paths src.first ⇝ dst.first and src.second ⇝ dst.second inside `within`.
std::optional<PathPair> find_disjoint_paths(const LayeredNetwork& net, std::pair<NodeIndex, NodeIndex> src,
                                            std::pair<NodeIndex, NodeIndex> dst, const NodeSet& within);
std::optional<PathPair> find_disjoint_paths(const LayeredNetwork& net, std::pair<NodeIndex, NodeIndex> src,
                                            std::pair<NodeIndex, NodeIndex> dst);
// As above but either pairing of the destinations is accepted; the first path starts at src.first.
std::optional<PathPair> find_disjoint_paths_any_pairing(const LayeredNetwork& net,
                                                        std::pair<NodeIndex, NodeIndex> src,
                                                        std::pair<NodeIndex, NodeIndex> dst, const NodeSet& within);
// Disjoint s1 ⇝ d1 and s2 ⇝ d2 inside `within`.
std::optional<PathPair> find_unicast_pair(const LayeredNetwork& net, const NodeSet& within);

struct ExtendedNetwork {
  LayeredNetwork net;
  std::vector<NodeIndex> origin;  // extended node -> original node
};

// Layer doubling: every v gets a copy v' one layer later joined by a unit edge,
// and original edges leave from the copies.
ExtendedNetwork extend_network(const LayeredNetwork& net);

}  // namespace tudof
