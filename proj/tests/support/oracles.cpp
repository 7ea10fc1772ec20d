#include "oracles.hpp"

#include <Eigen/Dense>
#include <functional>

#include "tudof/network_io.hpp"

namespace oracle {

std::string data_path(const std::string& name) { return std::string(TUDOF_TEST_DATA_DIR) + "/" + name; }

LayeredNetwork fixture(const std::string& name) { return tudof::read_network_file(data_path(name + ".net")); }

NodeList to_list(std::span<const NodeIndex> nodes) { return NodeList(nodes.begin(), nodes.end()); }

std::vector<NodeList> paths(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within) {
  std::vector<NodeList> out;
  if (!within.contains(u) || !within.contains(v)) return out;
  NodeList stack{u};
  std::function<void(NodeIndex)> walk = [&](NodeIndex at) {
    if (at == v) {
      out.push_back(stack);
      return;
    }
    for (const auto& e : net.edges()) {
      if (e.tail != at || !within.contains(e.head)) continue;
      stack.push_back(e.head);
      walk(e.head);
      stack.pop_back();
    }
  };
  walk(u);
  return out;
}

bool reach(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within) {
  return !paths(net, u, v, within).empty();
}

NodeSet mask(const NodeList& p) {
  NodeSet s;
  for (NodeIndex v : p) s.insert(v);
  return s;
}

bool disjoint_pair_exists(const LayeredNetwork& net, NodeIndex a0, NodeIndex b0, NodeIndex a1, NodeIndex b1,
                          const NodeSet& within) {
  const auto first = paths(net, a0, b0, within);
  const auto second = paths(net, a1, b1, within);
  for (const auto& p : first)
    for (const auto& q : second)
      if (!mask(p).intersects(mask(q))) return true;
  return false;
}

int disjoint_count(const LayeredNetwork& net, NodeIndex a0, NodeIndex a1, NodeIndex b0, NodeIndex b1) {
  const NodeSet all = net.all();
  if (disjoint_pair_exists(net, a0, b0, a1, b1, all) || disjoint_pair_exists(net, a0, b1, a1, b0, all)) return 2;
  for (NodeIndex a : {a0, a1})
    for (NodeIndex b : {b0, b1})
      if (reach(net, a, b, all)) return 1;
  return 0;
}

int interferers(const LayeredNetwork& net, const NodeSet& subset, const NodeSet& target, NodeIndex source) {
  int n = 0;
  const NodeSet off = subset - target;
  for (NodeIndex v : off.to_vector()) {
    bool edge = false;
    for (const auto& e : net.edges()) edge = edge || (e.tail == v && target.contains(e.head));
    if (edge && reach(net, source, v, off)) ++n;
  }
  return n;
}

std::optional<std::size_t> smallest_manageable(const LayeredNetwork& net, const NodeSet& p11, const NodeSet& p22,
                                               int mode) {
  const auto& t = net.terminals();
  const NodeSet base = p11 | p22;
  const NodeList pool = (net.all() - base).to_vector();
  std::optional<std::size_t> best;
  for (std::size_t bits = 0; bits < (std::size_t{1} << pool.size()); ++bits) {
    NodeSet s = base;
    for (std::size_t k = 0; k < pool.size(); ++k)
      if (bits >> k & 1U) s.insert(pool[k]);
    const int n1 = interferers(net, s, p11, t.s2), n2 = interferers(net, s, p22, t.s1);
    const bool ok = mode == 0 ? (n1 != 1 && n2 != 1) : mode == 1 ? n1 != 1 : n2 != 1;
    if (ok && (!best || s.size() < *best)) best = s.size();
  }
  return best;
}

double path_sum_gain(const LayeredNetwork& net, const NodeSet& forwarders, NodeIndex u, NodeIndex v) {
  NodeSet within = forwarders;
  within.insert(u);
  within.insert(v);
  double total = 0.0;
  for (const auto& p : paths(net, u, v, within)) {
    double g = 1.0;
    for (std::size_t k = 0; k + 1 < p.size(); ++k) g *= net.gain(p[k], p[k + 1]);
    total += g;
  }
  return total;
}

double layer_product_gain(const LayeredNetwork& net, NodeIndex u, NodeIndex v) {
  const int from = net.layer(u), to = net.layer(v);
  if (from == to) return u == v ? 1.0 : 0.0;
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(static_cast<Eigen::Index>(net.layer_nodes(from).size()));
  const auto here = net.layer_nodes(from);
  for (std::size_t k = 0; k < here.size(); ++k)
    if (here[k] == u) row(static_cast<Eigen::Index>(k)) = 1.0;
  for (int l = from; l < to; ++l) {
    const auto a = net.layer_nodes(l), b = net.layer_nodes(l + 1);
    Eigen::MatrixXd h(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j)
        h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = net.gain(a[i], b[j]);
    row = row * h;
  }
  const auto last = net.layer_nodes(to);
  for (std::size_t k = 0; k < last.size(); ++k)
    if (last[k] == v) return row(static_cast<Eigen::Index>(k));
  return 0.0;
}

bool has_case_a(const LayeredNetwork& net, const NodeSet& within) {
  const auto& t = net.terminals();
  const auto cuts_dest = [&](NodeIndex removed, NodeIndex d) {
    NodeSet w = within;
    w.erase(removed);
    return !reach(net, t.s1, d, w) && !reach(net, t.s2, d, w);
  };
  const auto cuts_source = [&](NodeIndex removed, NodeIndex s) {
    NodeSet w = within;
    w.erase(removed);
    return !reach(net, s, t.d1, w) && !reach(net, s, t.d2, w);
  };
  for (const auto& [d, s] : {std::pair{t.d1, t.s2}, std::pair{t.d2, t.s1}}) {
    for (NodeIndex v : within.to_vector())
      if (cuts_dest(v, d) && cuts_source(v, s)) return true;
    for (const auto& e : net.edges())
      if (within.contains(e.tail) && within.contains(e.head) && cuts_dest(e.head, d) && cuts_source(e.tail, s))
        return true;
  }
  return false;
}

namespace {

bool is_path(const LayeredNetwork& net, const NodeList& p, NodeIndex from, NodeIndex to) {
  if (p.empty() || p.front() != from || p.back() != to) return false;
  for (std::size_t k = 0; k + 1 < p.size(); ++k)
    if (!net.has_edge(p[k], p[k + 1])) return false;
  return true;
}

bool contains(const NodeList& p, NodeIndex v) { return std::find(p.begin(), p.end(), v) != p.end(); }

}  // namespace

bool butterfly_holds(const LayeredNetwork& net, const NodeList& shared, const NodeList& p11, const NodeList& p22,
                     const NodeList& p12, const NodeList& p21) {
  const auto& t = net.terminals();
  if (shared.empty() || !is_path(net, shared, shared.front(), shared.back())) return false;
  if (!is_path(net, p11, t.s1, t.d1) || !is_path(net, p22, t.s2, t.d2)) return false;
  if (!is_path(net, p12, t.s1, t.d2) || !is_path(net, p21, t.s2, t.d1)) return false;
  if (mask(p12).intersects(mask(p21))) return false;
  if (mask(p12).intersects(mask(shared)) || mask(p21).intersects(mask(shared))) return false;
  return (mask(p11) & mask(p22)) == mask(shared);
}

bool grail_holds(const LayeredNetwork& net, const NodeList& p12, const NodeList& p21, NodeIndex wa, NodeIndex wb,
                 bool mirrored) {
  const auto& t = net.terminals();
  if (!is_path(net, p12, t.s1, t.d2) || !is_path(net, p21, t.s2, t.d1)) return false;
  if (mask(p12).intersects(mask(p21))) return false;
  const NodeSet all = net.all();
  if (!mirrored)
    return contains(p12, wa) && contains(p21, wb) && reach(net, t.s2, wa, all) && reach(net, wa, wb, all) &&
           reach(net, wb, t.d2, all);
  return contains(p21, wa) && contains(p12, wb) && reach(net, t.s1, wa, all) && reach(net, wa, wb, all) &&
         reach(net, wb, t.d1, all);
}

std::vector<LayeredNetwork> suite(std::size_t count, std::uint64_t first_seed, std::size_t max_nodes,
                                  double edge_probability) {
  tudof::RandomNetworkConfig cfg;
  cfg.edge_probability = edge_probability;
  std::vector<LayeredNetwork> out;
  for (std::uint64_t s = first_seed; out.size() < count; ++s) {
    LayeredNetwork net = tudof::random_network(cfg, s);
    if (net.size() <= max_nodes) out.push_back(std::move(net));
  }
  return out;
}

std::vector<tudof::PathPair> disjoint_path_pairs(const LayeredNetwork& net, std::size_t limit) {
  const auto& t = net.terminals();
  std::vector<tudof::PathPair> out;
  for (const auto& p : paths(net, t.s1, t.d1, net.all()))
    for (const auto& q : paths(net, t.s2, t.d2, net.all() - mask(p))) {
      if (out.size() == limit) return out;
      out.emplace_back(tudof::Path(net, p), tudof::Path(net, q));
    }
  return out;
}

}  // namespace oracle
