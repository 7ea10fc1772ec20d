#include "tudof/paths.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

#include "tudof/errors.hpp"

namespace tudof {

Path::Path(const LayeredNetwork& net, std::vector<NodeIndex> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw ValidationError("empty path");
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    if (nodes_[k] < 0 || static_cast<std::size_t>(nodes_[k]) >= net.size()) throw ValidationError("path node out of range");
    if (k > 0 && !net.has_edge(nodes_[k - 1], nodes_[k]))
      throw ValidationError("path step " + net.id(nodes_[k - 1]) + "->" + net.id(nodes_[k]) + " is not an edge");
    mask_.insert(nodes_[k]);
  }
}

Path Path::from_ids(const LayeredNetwork& net, std::span<const std::string> ids) {
  std::vector<NodeIndex> nodes;
  for (const auto& id : ids) nodes.push_back(net.index(id));
  return Path(net, std::move(nodes));
}

std::optional<std::size_t> Path::position(NodeIndex v) const {
  auto it = std::find(nodes_.begin(), nodes_.end(), v);
  if (it == nodes_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::optional<NodeIndex> Path::at_layer(const LayeredNetwork& net, int layer) const {
  for (NodeIndex v : nodes_)
    if (net.layer(v) == layer) return v;
  return std::nullopt;
}

Path slice(const LayeredNetwork& net, const Path& p, NodeIndex from, NodeIndex to) {
  const auto i = p.position(from), j = p.position(to);
  if (!i || !j) throw ValidationError("slice bound is not on the path");
  if (*i > *j) throw ValidationError("slice bounds out of order");
  return Path(net, std::vector<NodeIndex>(p.nodes().begin() + static_cast<std::ptrdiff_t>(*i),
                                          p.nodes().begin() + static_cast<std::ptrdiff_t>(*j) + 1));
}

Path concat(const LayeredNetwork& net, const Path& p, const Path& q) {
  if (p.empty() || q.empty() || p.back() != q.front()) throw ValidationError("concatenation endpoints do not match");
  std::vector<NodeIndex> nodes(p.nodes().begin(), p.nodes().end());
  nodes.insert(nodes.end(), q.nodes().begin() + 1, q.nodes().end());
  return Path(net, std::move(nodes));
}

std::string path_to_string(const LayeredNetwork& net, const Path& p) {
  std::string out;
  for (NodeIndex v : p.nodes()) {
    if (!out.empty()) out += ',';
    out += net.id(v);
  }
  return out;
}

namespace {

void enumerate_from(const LayeredNetwork& net, NodeIndex at, NodeIndex target, const NodeSet& useful,
                    std::vector<NodeIndex>& stack, std::vector<Path>& out, std::size_t limit) {
  if (out.size() >= limit) return;
  if (at == target) {
    out.emplace_back(net, stack);
    return;
  }
  for (NodeIndex w : net.outputs(at)) {
    if (!useful.contains(w)) continue;
    stack.push_back(w);
    enumerate_from(net, w, target, useful, stack, out, limit);
    stack.pop_back();
    if (out.size() >= limit) return;
  }
}

}  // namespace

std::vector<Path> enumerate_paths(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within,
                                  std::size_t limit) {
  std::vector<Path> out;
  if (!within.contains(u) || !within.contains(v) || limit == 0) return out;
  const NodeSet useful = reach_forward(net, NodeSet{u}, within) & reach_backward(net, NodeSet{v}, within);
  if (!useful.contains(u)) return out;
  std::vector<NodeIndex> stack{u};
  enumerate_from(net, u, v, useful, stack, out, limit);
  return out;
}

std::uint64_t count_paths(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within) {
  if (!within.contains(u) || !within.contains(v)) return 0;
  std::vector<std::uint64_t> ways(net.size(), 0);
  ways[static_cast<std::size_t>(u)] = 1;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::size_t i = static_cast<std::size_t>(u) + 1; i <= static_cast<std::size_t>(v); ++i) {
    const auto w = static_cast<NodeIndex>(i);
    if (!within.contains(w)) continue;
    std::uint64_t total = 0;
    for (NodeIndex p : net.inputs(w)) {
      const std::uint64_t add = ways[static_cast<std::size_t>(p)];
      total = (kMax - total < add) ? kMax : total + add;
    }
    ways[i] = total;
  }
  return ways[static_cast<std::size_t>(v)];
}

std::optional<Path> find_path(const LayeredNetwork& net, NodeIndex u, NodeIndex v, const NodeSet& within) {
  auto paths = enumerate_paths(net, u, v, within, 1);
  if (paths.empty()) return std::nullopt;
  return std::move(paths.front());
}

namespace {

// Small augmenting-path max-flow over an explicit residual graph.
class FlowGraph {
 public:
  explicit FlowGraph(std::size_t n) : adj_(n) {}
  void add(std::size_t a, std::size_t b, int cap) {
    adj_[a].push_back(arcs_.size());
    arcs_.push_back({b, cap});
    adj_[b].push_back(arcs_.size());
    arcs_.push_back({a, 0});
  }
  int max_flow(std::size_t s, std::size_t t, int bound) {
    int flow = 0;
    while (flow < bound) {
      std::vector<std::size_t> via(adj_.size(), SIZE_MAX);
      std::vector<bool> seen(adj_.size(), false);
      std::deque<std::size_t> queue{s};
      seen[s] = true;
      while (!queue.empty() && !seen[t]) {
        const std::size_t a = queue.front();
        queue.pop_front();
        for (std::size_t k : adj_[a]) {
          const auto& arc = arcs_[k];
          if (arc.cap > 0 && !seen[arc.to]) {
            seen[arc.to] = true;
            via[arc.to] = k;
            queue.push_back(arc.to);
          }
        }
      }
      if (!seen[t]) break;
      for (std::size_t x = t; x != s;) {
        const std::size_t k = via[x];
        arcs_[k].cap -= 1;
        arcs_[k ^ 1].cap += 1;
        x = arcs_[k ^ 1].to;
      }
      ++flow;
    }
    return flow;
  }

 private:
  struct Arc {
    std::size_t to;
    int cap;
  };
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<Arc> arcs_;
};

constexpr int kUnbounded = 1 << 20;

}  // namespace

int vertex_disjoint_flow(const LayeredNetwork& net, const NodeSet& sources, const NodeSet& sinks,
                         const NodeSet& within) {
  const std::size_t n = net.size();
  FlowGraph g(2 * n + 2);
  const std::size_t s = 2 * n, t = 2 * n + 1;
  for (std::size_t v = 0; v < n; ++v) {
    const auto vi = static_cast<NodeIndex>(v);
    if (!within.contains(vi)) continue;
    g.add(2 * v, 2 * v + 1, 1);
    if (sources.contains(vi)) g.add(s, 2 * v, 1);
    if (sinks.contains(vi)) g.add(2 * v + 1, t, 1);
    for (NodeIndex w : net.outputs(vi))
      if (within.contains(w)) g.add(2 * v + 1, 2 * static_cast<std::size_t>(w), 1);
  }
  return g.max_flow(s, t, static_cast<int>(n) + 1);
}

int edge_disjoint_flow(const LayeredNetwork& net, const NodeSet& sources, const NodeSet& sinks) {
  const std::size_t n = net.size();
  FlowGraph g(n + 2);
  const std::size_t s = n, t = n + 1;
  for (std::size_t v = 0; v < n; ++v) {
    const auto vi = static_cast<NodeIndex>(v);
    if (sources.contains(vi)) g.add(s, v, kUnbounded);
    if (sinks.contains(vi)) g.add(v, t, kUnbounded);
  }
  for (const auto& e : net.edges()) g.add(static_cast<std::size_t>(e.tail), static_cast<std::size_t>(e.head), 1);
  return g.max_flow(s, t, static_cast<int>(net.edges().size()) + 1);
}

std::optional<PathPair> find_disjoint_paths(const LayeredNetwork& net, std::pair<NodeIndex, NodeIndex> src,
                                            std::pair<NodeIndex, NodeIndex> dst, const NodeSet& within) {
  const auto [a1, a2] = src;
  const auto [b1, b2] = dst;
  for (NodeIndex v : {a1, a2, b1, b2})
    if (v < 0 || static_cast<std::size_t>(v) >= net.size()) throw ValidationError("unknown node index");
  if (a1 == a2 || b1 == b2) return std::nullopt;
  if (vertex_disjoint_flow(net, NodeSet{a1, a2}, NodeSet{b1, b2}, within) < 2) return std::nullopt;

  // Layer-synchronous search over the pair of current nodes; -1 marks a path not yet started or finished.
  const NodeSet useful1 = reach_forward(net, NodeSet{a1}, within) & reach_backward(net, NodeSet{b1}, within);
  const NodeSet useful2 = reach_forward(net, NodeSet{a2}, within) & reach_backward(net, NodeSet{b2}, within);
  if (!useful1.contains(a1) || !useful2.contains(a2)) return std::nullopt;
  const int la1 = net.layer(a1), lb1 = net.layer(b1), la2 = net.layer(a2), lb2 = net.layer(b2);
  const int first = std::min(la1, la2), last = std::max(lb1, lb2);

  struct State {
    NodeIndex x, y;
    int parent;
  };
  auto options = [&](int layer, int la, int lb, NodeIndex a, const NodeSet& useful) {
    std::vector<NodeIndex> out;
    if (layer < la || layer > lb) {
      out.push_back(-1);
    } else if (layer == la) {
      out.push_back(a);
    } else {
      for (NodeIndex v : net.layer_nodes(layer))
        if (useful.contains(v)) out.push_back(v);
    }
    return out;
  };
  auto step_ok = [&](NodeIndex prev, NodeIndex cur, int layer, int la) {
    if (cur == -1 || layer == la) return true;
    return prev != -1 && net.has_edge(prev, cur);
  };

  std::vector<std::vector<State>> levels;
  levels.push_back({});
  for (NodeIndex x : options(first, la1, lb1, a1, useful1))
    for (NodeIndex y : options(first, la2, lb2, a2, useful2))
      if (x == -1 || x != y) levels.back().push_back({x, y, -1});
  for (int layer = first + 1; layer <= last && !levels.back().empty(); ++layer) {
    const auto opt1 = options(layer, la1, lb1, a1, useful1);
    const auto opt2 = options(layer, la2, lb2, a2, useful2);
    std::vector<State> next;
    std::unordered_map<long long, int> seen;
    const auto& prev = levels.back();
    for (int k = 0; k < static_cast<int>(prev.size()); ++k) {
      for (NodeIndex x : opt1) {
        if (!step_ok(prev[static_cast<std::size_t>(k)].x, x, layer, la1)) continue;
        for (NodeIndex y : opt2) {
          if (!step_ok(prev[static_cast<std::size_t>(k)].y, y, layer, la2)) continue;
          if (x != -1 && x == y) continue;
          const long long key = static_cast<long long>(x + 1) * 1024 + (y + 1);
          if (seen.emplace(key, static_cast<int>(next.size())).second) next.push_back({x, y, k});
        }
      }
    }
    levels.push_back(std::move(next));
  }
  if (levels.back().empty()) return std::nullopt;
  std::vector<NodeIndex> p1, p2;
  int k = 0;
  for (std::size_t lvl = levels.size(); lvl-- > 0;) {
    const State& st = levels[lvl][static_cast<std::size_t>(k)];
    if (st.x != -1) p1.push_back(st.x);
    if (st.y != -1) p2.push_back(st.y);
    k = st.parent;
  }
  std::reverse(p1.begin(), p1.end());
  std::reverse(p2.begin(), p2.end());
  return PathPair{Path(net, std::move(p1)), Path(net, std::move(p2))};
}

std::optional<PathPair> find_disjoint_paths(const LayeredNetwork& net, std::pair<NodeIndex, NodeIndex> src,
                                            std::pair<NodeIndex, NodeIndex> dst) {
  return find_disjoint_paths(net, src, dst, net.all());
}

std::optional<PathPair> find_disjoint_paths_any_pairing(const LayeredNetwork& net,
                                                        std::pair<NodeIndex, NodeIndex> src,
                                                        std::pair<NodeIndex, NodeIndex> dst, const NodeSet& within) {
  if (auto p = find_disjoint_paths(net, src, dst, within)) return p;
  return find_disjoint_paths(net, src, {dst.second, dst.first}, within);
}

std::optional<PathPair> find_unicast_pair(const LayeredNetwork& net, const NodeSet& within) {
  const auto& t = net.terminals();
  return find_disjoint_paths(net, {t.s1, t.s2}, {t.d1, t.d2}, within);
}

ExtendedNetwork extend_network(const LayeredNetwork& net) {
  std::string suffix = "'";
  for (bool clash = true; clash;) {
    clash = false;
    for (std::size_t v = 0; v < net.size(); ++v)
      if (net.find(net.id(static_cast<NodeIndex>(v)) + suffix)) clash = true;
    if (clash) suffix += "'";
  }
  NetworkBuilder b;
  b.layers(2 * net.layer_count());
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto vi = static_cast<NodeIndex>(v);
    b.node(net.id(vi), 2 * net.layer(vi) - 1);
    b.node(net.id(vi) + suffix, 2 * net.layer(vi));
  }
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto vi = static_cast<NodeIndex>(v);
    b.edge(net.id(vi), net.id(vi) + suffix, 1.0);
  }
  for (const auto& e : net.edges()) b.edge(net.id(e.tail) + suffix, net.id(e.head), e.gain);
  const auto& t = net.terminals();
  b.pairs(net.id(t.s1), net.id(t.d1) + suffix, net.id(t.s2), net.id(t.d2) + suffix);
  ExtendedNetwork out{b.build(), {}};
  out.origin.resize(out.net.size());
  for (std::size_t v = 0; v < out.net.size(); ++v) {
    std::string id = out.net.id(static_cast<NodeIndex>(v));
    if (out.net.layer(static_cast<NodeIndex>(v)) % 2 == 0) id.resize(id.size() - suffix.size());
    out.origin[v] = net.index(id);
  }
  return out;
}

}  // namespace tudof
