#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "tudof/network.hpp"

namespace tudof {

// Sum over u ⇝ v paths whose interior nodes are all in `forwarders` of the product of edge gains.
// Throws ValidationError when ℓ(u) > ℓ(v).
double effective_gain(const LayeredNetwork& net, const NodeSet& forwarders, NodeIndex u, NodeIndex v);

// Sources, up to two key layers and destinations, with effective gains between consecutive layers.
// Nodes of `active` outside the key layers forward with unit gain; other nodes are silent.
struct CondensedNetwork {
  LayeredNetwork origin;
  NodeSet active;
  std::vector<int> layer_numbers;                 // original layer index of each condensed layer
  std::vector<std::vector<NodeIndex>> layers;     // first is (s1, s2), last is (d1, d2)
  std::vector<Eigen::MatrixXd> hops;              // hops[k](a, b) = ĥ(layers[k][a], layers[k+1][b])
  std::vector<NodeIndex> noisy;                   // condensed non-source nodes
  Eigen::MatrixXd noise_weights;                  // row per noisy node, column per original node

  Eigen::MatrixXd noise_covariance() const { return noise_weights * noise_weights.transpose(); }
  int position(int condensed_layer, NodeIndex v) const;  // -1 when absent
  // ĥ(u, v) for nodes in consecutive condensed layers.
  double gain(NodeIndex u, NodeIndex v) const;
};

// Key layers must lie strictly between 1 and r, at most two, increasing.
CondensedNetwork build_condensed(const LayeredNetwork& net, std::span<const int> key_layers, const NodeSet& active);
CondensedNetwork build_condensed(const LayeredNetwork& net, std::span<const int> key_layers);

struct Evaluated {
  double value = 0.0;
  double scale = 1.0;  // magnitude of the expression's monomials
};
using GainExpression = std::function<Evaluated(const LayeredNetwork&)>;

// True when the expression clears 1e-9 × scale for at least one of `redraws` generic gain draws.
bool generically_nonzero(const LayeredNetwork& net, const GainExpression& expr, int redraws = 8,
                         std::uint64_t seed = 0x5eed);

GainExpression gain_expression(NodeIndex u, NodeIndex v);
// det [[ĥ(a1,b1), ĥ(a1,b2)], [ĥ(a2,b1), ĥ(a2,b2)]] with all nodes forwarding.
GainExpression transfer_determinant(NodeIndex a1, NodeIndex a2, NodeIndex b1, NodeIndex b2);

}  // namespace tudof
