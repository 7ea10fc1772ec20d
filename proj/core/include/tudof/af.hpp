#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tudof/classifier.hpp"
#include "tudof/condense.hpp"
#include "tudof/network.hpp"
#include "tudof/paths.hpp"
#include "tudof/scheme.hpp"

namespace tudof {

// The key layer cannot be diagonalized by scaling alone; the network reduces to a 2×2×2 core
// that needs the alignment machinery.
struct ReductionDirective {
  std::string reason;
  NodeSet nodes;
};

// End-to-end T(dest, source) of a condensed network whose key layers use the given scales.
Eigen::Matrix2d condensed_transfer(const CondensedNetwork& cond, std::span<const Eigen::VectorXd> scales);

// One key layer (cond.layers[1]); key_inputs are the inputs of the key node of `pair`,
// companion is the other pair's path node in the key layer.
struct SingleKeyRoles {
  Pair pair = Pair::first;
  std::vector<NodeIndex> key_inputs;
  NodeIndex companion = 0;
};
Eigen::VectorXd synth_af_single_key(const CondensedNetwork& cond, const SingleKeyRoles& roles);

// Two key layers; the first is the input layer of `early_key`, the second is handled as a single key layer.
struct TwoKeyRoles {
  Pair early = Pair::second;
  NodeIndex early_key = 0;
  SingleKeyRoles late;
  std::optional<Eigen::VectorXd> first_try;  // overrides the initial null vector
};
struct TwoKeyScaling {
  Eigen::VectorXd y, x;
  bool used_fallback = false;
};
TwoKeyScaling synth_af_two_key(const CondensedNetwork& cond, const TwoKeyRoles& roles);

// One key layer with ≥ 3 nodes; width 2 or rank failure yields a directive.
std::variant<Eigen::VectorXd, ReductionDirective> synth_af_three_column(const CondensedNetwork& cond);

// Two 2-node key layers (u1, u2) then (v1, v2) of a grail, with ĥ(s1,u2) = ĥ(v1,d1) = 0.
struct GrailRoles {
  NodeIndex u1 = 0, u2 = 0, v1 = 0, v2 = 0;
};
struct GrailScaling {
  double y1 = 0, y2 = 0, x1 = 0, x2 = 0;
};
std::variant<GrailScaling, ReductionDirective> synth_grail(const CondensedNetwork& cond, const GrailRoles& roles);

// Per-node amplify-and-forward scales; nodes outside `active` are silent.
struct AfSolution {
  std::string construction;
  NodeSet active;
  std::vector<double> scale;
  std::array<bool, 2> delivers{true, true};
};
using AfOutcome = std::variant<AfSolution, ReductionDirective>;

// Scheme for disjoint p11, p22 whose interference is manageable inside `subset`.
AfOutcome synth_af_pair(const LayeredNetwork& net, const Path& p11, const Path& p22, const NodeSet& subset);
AfOutcome synth_af_butterfly(const LayeredNetwork& net, const ButterflyWitness& w);
AfOutcome synth_af_grail(const LayeredNetwork& net, const GrailWitness& w);
// One stream along a path of the given pair.
AfSolution single_stream(const LayeredNetwork& net, const Path& path, Pair pair);

// One-mode scheme running the solution, with α set from the verified transfer.
Scheme af_scheme(const LayeredNetwork& net, const AfSolution& sol);

struct Synthesis {
  std::optional<Scheme> scheme;
  std::optional<ReductionDirective> directive;
  std::string note;
};

// Scheme matching the sum-DoF case: one stream for A/A′, AF for B/B′, two modes for C.
Synthesis synthesize(const LayeredNetwork& net, const Classification& c);

enum class VirtualRole { source, destination };

// Network over `active` in which `node` becomes the source or destination of `pair`, joined to
// the terminal layer by a unit-gain chain that neither causes nor receives interference.
struct DerivedNetwork {
  LayeredNetwork net;
  std::vector<NodeIndex> chain;  // virtual nodes, in layer order
  std::optional<NodeIndex> image(const LayeredNetwork& original, NodeIndex v) const;
};
DerivedNetwork splice_virtual_terminal(const LayeredNetwork& net, const NodeSet& active, Pair pair, NodeIndex node,
                                       VirtualRole role);

struct ModeLengths {
  int first = 1, second = 1;
};

// Two-mode buffering scheme for a certified C1 or C2 witness of `net`.
Scheme synth_two_mode(const LayeredNetwork& net, const C1Witness& w, ModeLengths lengths = {});
Scheme synth_two_mode(const LayeredNetwork& net, const C2Witness& w, ModeLengths lengths = {});

}  // namespace tudof
