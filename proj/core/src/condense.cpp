#include "tudof/condense.hpp"

#include <cmath>

#include "tudof/errors.hpp"

namespace tudof {

namespace {

// Path-sum values from u to every node, with interiors restricted to `forwarders`.
std::vector<double> gains_from(const LayeredNetwork& net, const NodeSet& forwarders, NodeIndex u, bool absolute) {
  std::vector<double> val(net.size(), 0.0);
  val[static_cast<std::size_t>(u)] = 1.0;
  for (std::size_t i = static_cast<std::size_t>(u) + 1; i < net.size(); ++i) {
    const auto w = static_cast<NodeIndex>(i);
    double sum = 0.0;
    for (NodeIndex p : net.inputs(w)) {
      if (p != u && !forwarders.contains(p)) continue;
      const double h = net.gain(p, w);
      sum += val[static_cast<std::size_t>(p)] * (absolute ? std::abs(h) : h);
    }
    val[i] = sum;
  }
  return val;
}

}  // namespace

double effective_gain(const LayeredNetwork& net, const NodeSet& forwarders, NodeIndex u, NodeIndex v) {
  if (net.layer(u) > net.layer(v)) throw ValidationError("effective gain endpoints are not layer ordered");
  if (u == v) return 1.0;
  return gains_from(net, forwarders, u, false)[static_cast<std::size_t>(v)];
}

int CondensedNetwork::position(int condensed_layer, NodeIndex v) const {
  const auto& l = layers[static_cast<std::size_t>(condensed_layer)];
  for (std::size_t k = 0; k < l.size(); ++k)
    if (l[k] == v) return static_cast<int>(k);
  return -1;
}

double CondensedNetwork::gain(NodeIndex u, NodeIndex v) const {
  for (std::size_t k = 0; k + 1 < layers.size(); ++k) {
    const int a = position(static_cast<int>(k), u), b = position(static_cast<int>(k) + 1, v);
    if (a >= 0 && b >= 0) return hops[k](a, b);
  }
  throw ValidationError("nodes " + origin.id(u) + ", " + origin.id(v) + " are not in consecutive condensed layers");
}

CondensedNetwork build_condensed(const LayeredNetwork& net, std::span<const int> key_layers, const NodeSet& active) {
  if (key_layers.size() > 2) throw ValidationError("at most two key layers");
  for (std::size_t k = 0; k < key_layers.size(); ++k) {
    if (key_layers[k] <= 1 || key_layers[k] >= net.layer_count())
      throw ValidationError("key layer " + std::to_string(key_layers[k]) + " is not strictly inside the network");
    if (k > 0 && key_layers[k] <= key_layers[k - 1]) throw ValidationError("key layers must increase");
  }
  if (!active.contains_all(net.terminal_set())) throw ValidationError("active set must contain the terminals");
  CondensedNetwork c{net, active, {}, {}, {}, {}, {}};
  const auto& t = net.terminals();
  c.layer_numbers.push_back(1);
  c.layers.push_back({t.s1, t.s2});
  for (int l : key_layers) {
    c.layer_numbers.push_back(l);
    std::vector<NodeIndex> nodes;
    for (NodeIndex v : net.layer_nodes(l))
      if (active.contains(v)) nodes.push_back(v);
    c.layers.push_back(std::move(nodes));
  }
  c.layer_numbers.push_back(net.layer_count());
  c.layers.push_back({t.d1, t.d2});

  NodeSet forwarders = active - net.terminal_set();
  for (int l : key_layers)
    for (NodeIndex v : net.layer_nodes(l)) forwarders.erase(v);

  for (std::size_t k = 0; k + 1 < c.layers.size(); ++k) {
    Eigen::MatrixXd hop(c.layers[k].size(), c.layers[k + 1].size());
    for (std::size_t a = 0; a < c.layers[k].size(); ++a) {
      const auto from = gains_from(net, forwarders, c.layers[k][a], false);
      for (std::size_t b = 0; b < c.layers[k + 1].size(); ++b)
        hop(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = from[static_cast<std::size_t>(c.layers[k + 1][b])];
    }
    c.hops.push_back(std::move(hop));
  }

  // Each condensed node hears its own noise plus forwarded noise of relays since the previous condensed layer.
  for (std::size_t k = 1; k < c.layers.size(); ++k)
    for (NodeIndex v : c.layers[k]) c.noisy.push_back(v);
  c.noise_weights = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(c.noisy.size()), static_cast<Eigen::Index>(net.size()));
  Eigen::Index row = 0;
  for (std::size_t k = 1; k < c.layers.size(); ++k) {
    const int lo = c.layer_numbers[k - 1];
    for (NodeIndex v : c.layers[k]) {
      c.noise_weights(row, v) = 1.0;
      for (NodeIndex w : forwarders.to_vector()) {
        if (net.layer(w) <= lo || net.layer(w) >= net.layer(v)) continue;
        c.noise_weights(row, w) = gains_from(net, forwarders, w, false)[static_cast<std::size_t>(v)];
      }
      ++row;
    }
  }
  return c;
}

CondensedNetwork build_condensed(const LayeredNetwork& net, std::span<const int> key_layers) {
  return build_condensed(net, key_layers, net.all());
}

bool generically_nonzero(const LayeredNetwork& net, const GainExpression& expr, int redraws, std::uint64_t seed) {
  for (int k = 0; k < redraws; ++k) {
    const LayeredNetwork drawn = redraw_gains(net, seed + static_cast<std::uint64_t>(k) * 0x9e3779b97f4a7c15ULL);
    const Evaluated e = expr(drawn);
    if (std::abs(e.value) > 1e-9 * std::max(e.scale, 1e-300)) return true;
  }
  return false;
}

GainExpression gain_expression(NodeIndex u, NodeIndex v) {
  return [u, v](const LayeredNetwork& net) {
    const NodeSet all = net.all();
    return Evaluated{effective_gain(net, all, u, v), gains_from(net, all, u, true)[static_cast<std::size_t>(v)]};
  };
}

GainExpression transfer_determinant(NodeIndex a1, NodeIndex a2, NodeIndex b1, NodeIndex b2) {
  return [=](const LayeredNetwork& net) {
    const NodeSet all = net.all();
    const auto g1 = gains_from(net, all, a1, false), g2 = gains_from(net, all, a2, false);
    const auto m1 = gains_from(net, all, a1, true), m2 = gains_from(net, all, a2, true);
    const auto at = [](const std::vector<double>& g, NodeIndex v) { return g[static_cast<std::size_t>(v)]; };
    const double value = at(g1, b1) * at(g2, b2) - at(g1, b2) * at(g2, b1);
    const double scale = at(m1, b1) * at(m2, b2) + at(m1, b2) * at(m2, b1);
    return Evaluated{value, scale};
  };
}

}  // namespace tudof
