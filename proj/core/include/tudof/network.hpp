#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tudof {

inline constexpr std::size_t kMaxNodes = 256;

using NodeIndex = int;

// Which unicast session a terminal or path belongs to.
enum class Pair : int { first = 0, second = 1 };

constexpr Pair other(Pair p) noexcept { return p == Pair::first ? Pair::second : Pair::first; }
constexpr int number(Pair p) noexcept { return static_cast<int>(p) + 1; }

class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<NodeIndex> nodes) {
    for (NodeIndex v : nodes) insert(v);
  }
  static NodeSet first_n(std::size_t n) {
    NodeSet s;
    for (std::size_t i = 0; i < n; ++i) s.bits_.set(i);
    return s;
  }

  void insert(NodeIndex v) { bits_.set(static_cast<std::size_t>(v)); }
  void erase(NodeIndex v) { bits_.reset(static_cast<std::size_t>(v)); }
  bool contains(NodeIndex v) const { return v >= 0 && bits_.test(static_cast<std::size_t>(v)); }
  bool contains_all(const NodeSet& other) const { return (other.bits_ & ~bits_).none(); }
  bool intersects(const NodeSet& other) const { return (bits_ & other.bits_).any(); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }

  NodeSet& operator|=(const NodeSet& o) { bits_ |= o.bits_; return *this; }
  NodeSet& operator&=(const NodeSet& o) { bits_ &= o.bits_; return *this; }
  NodeSet& operator-=(const NodeSet& o) { bits_ &= ~o.bits_; return *this; }
  friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
  friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  friend NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }
  friend bool operator==(const NodeSet&, const NodeSet&) = default;

  std::vector<NodeIndex> to_vector() const {
    std::vector<NodeIndex> out;
    for (std::size_t i = bits_._Find_first(); i < kMaxNodes; i = bits_._Find_next(i))
      out.push_back(static_cast<NodeIndex>(i));
    return out;
  }
  const std::bitset<kMaxNodes>& bits() const { return bits_; }

 private:
  std::bitset<kMaxNodes> bits_;
};

struct NodeInfo {
  std::string id;
  int layer = 0;
};

struct Edge {
  NodeIndex tail = 0;
  NodeIndex head = 0;
  double gain = 0.0;
};

struct Terminals {
  NodeIndex s1 = 0, d1 = 0, s2 = 0, d2 = 0;
};

class LayeredNetwork;

// Mutable description of a network; build() checks it and produces the immutable form.
class NetworkBuilder {
 public:
  struct RawEdge {
    std::string tail, head;
    double gain = 0.0;
  };

  NetworkBuilder& layers(int r) { layers_ = r; return *this; }
  NetworkBuilder& node(std::string id, int layer);
  NetworkBuilder& edge(std::string tail, std::string head, double gain);
  NetworkBuilder& pairs(std::string s1, std::string d1, std::string s2, std::string d2);
  NetworkBuilder& remove_edge(std::string_view tail, std::string_view head);
  NetworkBuilder& remove_node(std::string_view id);

  int layer_count() const { return layers_; }
  const std::vector<NodeInfo>& nodes() const { return nodes_; }
  const std::vector<RawEdge>& edges() const { return edges_; }
  const std::optional<std::array<std::string, 4>>& terminal_ids() const { return pairs_; }

  // Messages for edges that do not join consecutive layers; empty when layering is sound.
  std::vector<std::string> layering_violations() const;

  // Throws ValidationError on any structural defect, including layering violations.
  LayeredNetwork build() const;

 private:
  int layers_ = 0;
  std::vector<NodeInfo> nodes_;
  std::vector<RawEdge> edges_;
  std::optional<std::array<std::string, 4>> pairs_;
};

// Directed layered graph with real gains and two source/destination pairs.
// Node indices follow layer order, so index order is a topological order.
class LayeredNetwork {
 public:
  std::size_t size() const { return nodes_.size(); }
  int layer_count() const { return layers_; }
  const NodeInfo& node(NodeIndex v) const { return nodes_[static_cast<std::size_t>(v)]; }
  const std::string& id(NodeIndex v) const { return node(v).id; }
  int layer(NodeIndex v) const { return node(v).layer; }
  std::span<const NodeIndex> layer_nodes(int layer) const { return layer_nodes_[static_cast<std::size_t>(layer)]; }

  NodeIndex index(std::string_view id) const;  // throws ValidationError for unknown ids
  std::optional<NodeIndex> find(std::string_view id) const;

  double gain(NodeIndex tail, NodeIndex head) const { return gains_[offset(tail, head)]; }
  bool has_edge(NodeIndex tail, NodeIndex head) const { return gain(tail, head) != 0.0; }
  std::span<const NodeIndex> inputs(NodeIndex v) const { return in_[static_cast<std::size_t>(v)]; }
  std::span<const NodeIndex> outputs(NodeIndex v) const { return out_[static_cast<std::size_t>(v)]; }
  const NodeSet& input_mask(NodeIndex v) const { return in_mask_[static_cast<std::size_t>(v)]; }
  const NodeSet& output_mask(NodeIndex v) const { return out_mask_[static_cast<std::size_t>(v)]; }
  const std::vector<Edge>& edges() const { return edges_; }

  const Terminals& terminals() const { return terminals_; }
  NodeIndex source(Pair p) const { return p == Pair::first ? terminals_.s1 : terminals_.s2; }
  NodeIndex destination(Pair p) const { return p == Pair::first ? terminals_.d1 : terminals_.d2; }
  NodeSet terminal_set() const { return {terminals_.s1, terminals_.s2, terminals_.d1, terminals_.d2}; }
  bool is_terminal(NodeIndex v) const { return terminal_set().contains(v); }
  NodeSet all() const { return NodeSet::first_n(size()); }

  NodeSet mask_of(std::span<const std::string> ids) const;
  std::vector<std::string> ids_of(const NodeSet& s) const;

  // Same topology and ids, with gains replaced.
  LayeredNetwork with_gains(std::span<const double> edge_gains) const;
  NetworkBuilder to_builder() const;

 private:
  friend class NetworkBuilder;
  std::size_t offset(NodeIndex tail, NodeIndex head) const {
    return static_cast<std::size_t>(tail) * nodes_.size() + static_cast<std::size_t>(head);
  }

  int layers_ = 0;
  std::vector<NodeInfo> nodes_;
  std::vector<std::vector<NodeIndex>> layer_nodes_;
  std::unordered_map<std::string, NodeIndex> index_;
  std::vector<double> gains_;
  std::vector<std::vector<NodeIndex>> in_, out_;
  std::vector<NodeSet> in_mask_, out_mask_;
  std::vector<Edge> edges_;
  Terminals terminals_;
};

// Reachability restricted to the nodes of `within`. Starting nodes outside `within` are ignored.
NodeSet reach_forward(const LayeredNetwork& net, const NodeSet& from, const NodeSet& within);
NodeSet reach_backward(const LayeredNetwork& net, const NodeSet& to, const NodeSet& within);
bool reachable(const LayeredNetwork& net, NodeIndex u, NodeIndex v);
bool reachable_within(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within);

// Nodes lying on at least one path from a source to a destination.
NodeSet on_path_nodes(const LayeredNetwork& net);

LayeredNetwork induced_subnetwork(const LayeredNetwork& net, const NodeSet& subset);
LayeredNetwork prune(const LayeredNetwork& net);
// Exchanges the roles of (s1,d1) and (s2,d2); node ids are kept.
LayeredNetwork swap_pairs(const LayeredNetwork& net);

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::vector<std::string> pruned;
  bool first_pair_connected = false;
  bool second_pair_connected = false;
  std::optional<LayeredNetwork> network;  // pruned network when there are no errors

  bool ok() const { return errors.empty(); }
};

// Duplicate ids and dangling edges throw; layering problems, off-path nodes and
// missing connectivity are reported.
ValidationReport validate(const NetworkBuilder& draft);
ValidationReport validate(const LayeredNetwork& net);

// Uniform magnitude in [0.5, 2] with a random sign.
double generic_gain(std::mt19937_64& rng);
LayeredNetwork redraw_gains(const LayeredNetwork& net, std::uint64_t seed);

struct RandomNetworkConfig {
  int min_layers = 3;
  int max_layers = 6;
  int max_width = 4;
  double edge_probability = 0.5;
};

// A pruned random network in which at least one pair is connected.
LayeredNetwork random_network(const RandomNetworkConfig& cfg, std::uint64_t seed);

}  // namespace tudof
