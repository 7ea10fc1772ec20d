#include "tudof/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "tudof/errors.hpp"

namespace tudof {

NetworkBuilder& NetworkBuilder::node(std::string id, int layer) {
  nodes_.push_back({std::move(id), layer});
  return *this;
}

NetworkBuilder& NetworkBuilder::edge(std::string tail, std::string head, double gain) {
  edges_.push_back({std::move(tail), std::move(head), gain});
  return *this;
}

NetworkBuilder& NetworkBuilder::pairs(std::string s1, std::string d1, std::string s2, std::string d2) {
  pairs_ = std::array<std::string, 4>{std::move(s1), std::move(d1), std::move(s2), std::move(d2)};
  return *this;
}

NetworkBuilder& NetworkBuilder::remove_edge(std::string_view tail, std::string_view head) {
  std::erase_if(edges_, [&](const RawEdge& e) { return e.tail == tail && e.head == head; });
  return *this;
}

NetworkBuilder& NetworkBuilder::remove_node(std::string_view id) {
  std::erase_if(nodes_, [&](const NodeInfo& n) { return n.id == id; });
  std::erase_if(edges_, [&](const RawEdge& e) { return e.tail == id || e.head == id; });
  return *this;
}

namespace {

std::unordered_map<std::string, int> checked_layers(const NetworkBuilder& b) {
  if (b.layer_count() < 2) throw ValidationError("network needs at least 2 layers");
  std::unordered_map<std::string, int> layer_of;
  for (const auto& n : b.nodes()) {
    if (n.id.empty()) throw ValidationError("empty node id");
    if (n.layer < 1 || n.layer > b.layer_count())
      throw ValidationError("node " + n.id + " has layer " + std::to_string(n.layer) + " outside [1, " +
                            std::to_string(b.layer_count()) + "]");
    if (!layer_of.emplace(n.id, n.layer).second) throw ValidationError("duplicate node id " + n.id);
  }
  if (b.nodes().size() > kMaxNodes) throw ValidationError("more than 256 nodes");
  std::unordered_set<std::string> seen_edges;
  for (const auto& e : b.edges()) {
    if (!layer_of.contains(e.tail)) throw ValidationError("edge tail " + e.tail + " is not a node");
    if (!layer_of.contains(e.head)) throw ValidationError("edge head " + e.head + " is not a node");
    if (!std::isfinite(e.gain)) throw ValidationError("edge " + e.tail + "->" + e.head + " has a non-finite gain");
    if (e.gain == 0.0)
      throw ValidationError("edge " + e.tail + "->" + e.head + ": stored edges carry nonzero gain");
    if (!seen_edges.insert(e.tail + '\n' + e.head).second)
      throw ValidationError("duplicate edge " + e.tail + "->" + e.head);
  }
  if (!b.terminal_ids()) throw ValidationError("missing pairs declaration");
  const auto& t = *b.terminal_ids();
  for (const auto& id : t)
    if (!layer_of.contains(id)) throw ValidationError("terminal " + id + " is not a node");
  std::unordered_set<std::string> distinct(t.begin(), t.end());
  if (distinct.size() != 4) throw ValidationError("terminals must be four distinct nodes");
  return layer_of;
}

std::vector<std::string> terminal_layer_problems(const NetworkBuilder& b,
                                                 const std::unordered_map<std::string, int>& layer_of) {
  std::vector<std::string> out;
  const auto& t = *b.terminal_ids();
  const int r = b.layer_count();
  for (int k : {0, 2})
    if (layer_of.at(t[static_cast<std::size_t>(k)]) != 1) out.push_back("source " + t[static_cast<std::size_t>(k)] + " is not in layer 1");
  for (int k : {1, 3})
    if (layer_of.at(t[static_cast<std::size_t>(k)]) != r)
      out.push_back("destination " + t[static_cast<std::size_t>(k)] + " is not in layer " + std::to_string(r));
  for (const auto& n : b.nodes()) {
    const bool terminal = std::find(t.begin(), t.end(), n.id) != t.end();
    if (!terminal && (n.layer == 1 || n.layer == r))
      out.push_back("node " + n.id + " shares a terminal layer");
  }
  return out;
}

}  // namespace

std::vector<std::string> NetworkBuilder::layering_violations() const {
  const auto layer_of = checked_layers(*this);
  std::vector<std::string> out = terminal_layer_problems(*this, layer_of);
  for (const auto& e : edges_)
    if (layer_of.at(e.head) != layer_of.at(e.tail) + 1)
      out.push_back("edge " + e.tail + "->" + e.head + " does not join consecutive layers");
  return out;
}

LayeredNetwork NetworkBuilder::build() const {
  const auto problems = layering_violations();
  if (!problems.empty()) throw ValidationError(problems.front());

  LayeredNetwork net;
  net.layers_ = layers_;
  net.nodes_ = nodes_;
  std::stable_sort(net.nodes_.begin(), net.nodes_.end(),
                   [](const NodeInfo& a, const NodeInfo& b) { return a.layer < b.layer; });
  const std::size_t n = net.nodes_.size();
  net.layer_nodes_.assign(static_cast<std::size_t>(layers_) + 1, {});
  for (std::size_t v = 0; v < n; ++v) {
    net.index_.emplace(net.nodes_[v].id, static_cast<NodeIndex>(v));
    net.layer_nodes_[static_cast<std::size_t>(net.nodes_[v].layer)].push_back(static_cast<NodeIndex>(v));
  }
  net.gains_.assign(n * n, 0.0);
  net.in_.assign(n, {});
  net.out_.assign(n, {});
  net.in_mask_.assign(n, {});
  net.out_mask_.assign(n, {});
  for (const auto& e : edges_) {
    const NodeIndex t = net.index_.at(e.tail), h = net.index_.at(e.head);
    net.gains_[net.offset(t, h)] = e.gain;
  }
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t h = 0; h < n; ++h) {
      const double g = net.gains_[t * n + h];
      if (g == 0.0) continue;
      const auto ti = static_cast<NodeIndex>(t), hi = static_cast<NodeIndex>(h);
      net.edges_.push_back({ti, hi, g});
      net.out_[t].push_back(hi);
      net.in_[h].push_back(ti);
      net.out_mask_[t].insert(hi);
      net.in_mask_[h].insert(ti);
    }
  const auto& t = *pairs_;
  net.terminals_ = {net.index_.at(t[0]), net.index_.at(t[1]), net.index_.at(t[2]), net.index_.at(t[3])};
  return net;
}

NodeIndex LayeredNetwork::index(std::string_view id) const {
  if (auto v = find(id)) return *v;
  throw ValidationError("unknown node id " + std::string(id));
}

std::optional<NodeIndex> LayeredNetwork::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

NodeSet LayeredNetwork::mask_of(std::span<const std::string> ids) const {
  NodeSet s;
  for (const auto& id : ids) s.insert(index(id));
  return s;
}

std::vector<std::string> LayeredNetwork::ids_of(const NodeSet& s) const {
  std::vector<std::string> out;
  for (NodeIndex v : s.to_vector()) out.push_back(id(v));
  return out;
}

LayeredNetwork LayeredNetwork::with_gains(std::span<const double> edge_gains) const {
  if (edge_gains.size() != edges_.size()) throw ValidationError("gain count does not match edge count");
  LayeredNetwork copy = *this;
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (edge_gains[k] == 0.0 || !std::isfinite(edge_gains[k])) throw ValidationError("gains must be finite and nonzero");
    copy.edges_[k].gain = edge_gains[k];
    copy.gains_[offset(edges_[k].tail, edges_[k].head)] = edge_gains[k];
  }
  return copy;
}

NetworkBuilder LayeredNetwork::to_builder() const {
  NetworkBuilder b;
  b.layers(layers_);
  for (const auto& n : nodes_) b.node(n.id, n.layer);
  for (const auto& e : edges_) b.edge(id(e.tail), id(e.head), e.gain);
  b.pairs(id(terminals_.s1), id(terminals_.d1), id(terminals_.s2), id(terminals_.d2));
  return b;
}

NodeSet reach_forward(const LayeredNetwork& net, const NodeSet& from, const NodeSet& within) {
  NodeSet reached = from & within;
  const std::size_t n = net.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto v = static_cast<NodeIndex>(i);
    if (!reached.contains(v) && within.contains(v) && net.input_mask(v).intersects(reached)) reached.insert(v);
  }
  return reached;
}

NodeSet reach_backward(const LayeredNetwork& net, const NodeSet& to, const NodeSet& within) {
  NodeSet reached = to & within;
  for (std::size_t i = net.size(); i-- > 0;) {
    const auto v = static_cast<NodeIndex>(i);
    if (!reached.contains(v) && within.contains(v) && net.output_mask(v).intersects(reached)) reached.insert(v);
  }
  return reached;
}

bool reachable(const LayeredNetwork& net, NodeIndex u, NodeIndex v) {
  return reachable_within(net, u, v, net.all());
}

bool reachable_within(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within) {
  if (!within.contains(u) || !within.contains(v)) return false;
  return reach_forward(net, NodeSet{u}, within).contains(v);
}

NodeSet on_path_nodes(const LayeredNetwork& net) {
  const auto& t = net.terminals();
  const NodeSet from_sources = reach_forward(net, NodeSet{t.s1, t.s2}, net.all());
  const NodeSet to_destinations = reach_backward(net, NodeSet{t.d1, t.d2}, net.all());
  return (from_sources & to_destinations) | net.terminal_set();
}

LayeredNetwork induced_subnetwork(const LayeredNetwork& net, const NodeSet& subset) {
  if (!subset.contains_all(net.terminal_set())) throw ValidationError("subset must contain all four terminals");
  NetworkBuilder b;
  b.layers(net.layer_count());
  for (NodeIndex v : subset.to_vector()) {
    if (static_cast<std::size_t>(v) >= net.size()) throw ValidationError("subset names a node outside the network");
    b.node(net.id(v), net.layer(v));
  }
  for (const auto& e : net.edges())
    if (subset.contains(e.tail) && subset.contains(e.head)) b.edge(net.id(e.tail), net.id(e.head), e.gain);
  const auto& t = net.terminals();
  b.pairs(net.id(t.s1), net.id(t.d1), net.id(t.s2), net.id(t.d2));
  return b.build();
}

LayeredNetwork prune(const LayeredNetwork& net) {
  const NodeSet keep = on_path_nodes(net);
  if (keep == net.all()) return net;
  return induced_subnetwork(net, keep);
}

LayeredNetwork swap_pairs(const LayeredNetwork& net) {
  NetworkBuilder b = net.to_builder();
  const auto& t = net.terminals();
  b.pairs(net.id(t.s2), net.id(t.d2), net.id(t.s1), net.id(t.d1));
  return b.build();
}

namespace {

void add_connectivity(ValidationReport& report, const LayeredNetwork& net) {
  const auto& t = net.terminals();
  report.first_pair_connected = reachable(net, t.s1, t.d1);
  report.second_pair_connected = reachable(net, t.s2, t.d2);
  if (!report.first_pair_connected) report.warnings.push_back("s1 does not reach d1");
  if (!report.second_pair_connected) report.warnings.push_back("s2 does not reach d2");
}

}  // namespace

ValidationReport validate(const LayeredNetwork& net) {
  ValidationReport report;
  const NodeSet keep = on_path_nodes(net);
  for (NodeIndex v : (net.all() - keep).to_vector()) {
    report.pruned.push_back(net.id(v));
    report.warnings.push_back("node " + net.id(v) + " lies on no source-destination path and was pruned");
  }
  LayeredNetwork pruned = report.pruned.empty() ? net : induced_subnetwork(net, keep);
  add_connectivity(report, pruned);
  report.network = std::move(pruned);
  return report;
}

ValidationReport validate(const NetworkBuilder& draft) {
  ValidationReport report;
  report.errors = draft.layering_violations();
  if (!report.ok()) return report;
  return validate(draft.build());
}

double generic_gain(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> magnitude(0.5, 2.0);
  std::bernoulli_distribution negative(0.5);
  const double m = magnitude(rng);
  return negative(rng) ? -m : m;
}

LayeredNetwork redraw_gains(const LayeredNetwork& net, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> gains(net.edges().size());
  for (double& g : gains) g = generic_gain(rng);
  return net.with_gains(gains);
}

LayeredNetwork random_network(const RandomNetworkConfig& cfg, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (;;) {
    std::uniform_int_distribution<int> layer_dist(cfg.min_layers, cfg.max_layers);
    std::uniform_int_distribution<int> width_dist(1, cfg.max_width);
    std::bernoulli_distribution keep_edge(cfg.edge_probability);
    const int r = layer_dist(rng);
    NetworkBuilder b;
    b.layers(r);
    std::vector<std::vector<std::string>> layer_ids(static_cast<std::size_t>(r) + 1);
    layer_ids[1] = {"s1", "s2"};
    layer_ids[static_cast<std::size_t>(r)] = {"d1", "d2"};
    for (int l = 2; l < r; ++l) {
      const int w = width_dist(rng);
      for (int k = 0; k < w; ++k) layer_ids[static_cast<std::size_t>(l)].push_back("v" + std::to_string(l) + "_" + std::to_string(k));
    }
    for (int l = 1; l <= r; ++l)
      for (const auto& id : layer_ids[static_cast<std::size_t>(l)]) b.node(id, l);
    for (int l = 1; l < r; ++l)
      for (const auto& t : layer_ids[static_cast<std::size_t>(l)])
        for (const auto& h : layer_ids[static_cast<std::size_t>(l) + 1])
          if (keep_edge(rng)) b.edge(t, h, generic_gain(rng));
    b.pairs("s1", "d1", "s2", "d2");
    LayeredNetwork net = prune(b.build());
    bool layers_filled = true;
    for (int l = 2; l < r; ++l) layers_filled = layers_filled && !net.layer_nodes(l).empty();
    const auto& t = net.terminals();
    if (layers_filled && (reachable(net, t.s1, t.d1) || reachable(net, t.s2, t.d2))) return net;
  }
}

}  // namespace tudof
