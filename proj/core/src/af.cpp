#include "tudof/af.hpp"

#include <algorithm>
#include <cmath>

#include "tudof/engine.hpp"
#include "tudof/errors.hpp"
#include "tudof/interference.hpp"

namespace tudof {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kSingular = 1e-9;
constexpr double kZero = 1e-9;

int idx(Pair p) { return static_cast<int>(p); }

bool negligible(double value, double scale) { return std::abs(value) <= kZero * scale; }

// T(dest, source) of a single scaled layer between `in` (sources × nodes) and `out` (nodes × dests).
Eigen::Matrix2d layer_transfer(const MatrixXd& in, const MatrixXd& out, const VectorXd& x) {
  return (in * x.asDiagonal() * out).transpose();
}

Eigen::Matrix2d layer_magnitude(const MatrixXd& in, const MatrixXd& out, const VectorXd& x) {
  return (in.cwiseAbs() * x.cwiseAbs().asDiagonal() * out.cwiseAbs()).transpose();
}

// Contribution of column k to T(dest, source) at unit scale.
double entry(const MatrixXd& in, const MatrixXd& out, int dest, int source, int k) { return in(source, k) * out(k, dest); }

std::optional<Eigen::Vector2d> solve2(const Eigen::Matrix2d& m, const Eigen::Vector2d& rhs) {
  const double det = m.determinant();
  const double scale = std::abs(m(0, 0) * m(1, 1)) + std::abs(m(0, 1) * m(1, 0));
  if (scale == 0.0 || std::abs(det) <= kSingular * scale) return std::nullopt;
  return m.partialPivLu().solve(rhs);
}

std::optional<Eigen::Vector3d> solve3(const Eigen::Matrix3d& m, const Eigen::Vector3d& rhs) {
  double scale = 1.0;
  for (int r = 0; r < 3; ++r) scale *= m.row(r).norm();
  if (scale == 0.0 || std::abs(m.determinant()) <= kSingular * scale) return std::nullopt;
  return m.fullPivLu().solve(rhs);
}

VectorXd normalized(VectorXd x) {
  const double top = x.cwiseAbs().maxCoeff();
  if (top > 0.0) x /= top;
  return x;
}

VectorXd single_key_core(const MatrixXd& in, const MatrixXd& out, Pair pair, const std::vector<int>& candidates,
                         int companion) {
  const int i = idx(pair), o = 1 - i;
  const auto m = static_cast<Eigen::Index>(in.cols());
  VectorXd first = VectorXd::Zero(m);
  bool found = false;
  for (std::size_t p = 0; p < candidates.size() && !found; ++p)
    for (std::size_t q = p + 1; q < candidates.size() && !found; ++q) {
      const int a = candidates[p], b = candidates[q];
      Eigen::Matrix2d m1;
      m1 << entry(in, out, i, i, a), entry(in, out, i, i, b), entry(in, out, i, o, a), entry(in, out, i, o, b);
      if (auto sol = solve2(m1, {1.0, 0.0})) {
        first(a) = (*sol)(0);
        first(b) = (*sol)(1);
        found = true;
      }
    }
  if (!found) throw InvariantViolation("single key layer: M1 is singular for every pair of key inputs");

  const Eigen::Matrix2d t1 = layer_transfer(in, out, first);
  if (!negligible(t1(o, o), layer_magnitude(in, out, first)(o, o) + 1e-300)) return normalized(first);

  std::vector<int> order = candidates;
  for (int k = 0; k < m; ++k)
    if (std::find(order.begin(), order.end(), k) == order.end()) order.push_back(k);
  for (int c : order) {
    if (c == companion || in(o, c) == 0.0) continue;
    Eigen::Matrix2d m2;
    m2 << entry(in, out, i, o, c), entry(in, out, i, o, companion), entry(in, out, o, o, c),
        entry(in, out, o, o, companion);
    auto sol = solve2(m2, {0.0, 1.0});
    if (!sol) continue;
    VectorXd second = VectorXd::Zero(m);
    second(c) = (*sol)(0);
    second(companion) = (*sol)(1);
    const Eigen::Matrix2d t2 = layer_transfer(in, out, second);
    if (!negligible(t2(i, i), layer_magnitude(in, out, second)(i, i) + 1e-300)) return normalized(second);
    return normalized(first + second);
  }
  throw InvariantViolation("single key layer: M2 is singular for every companion column");
}

std::vector<int> positions(const CondensedNetwork& cond, int layer, std::span<const NodeIndex> nodes) {
  std::vector<int> out;
  for (NodeIndex v : nodes) {
    const int p = cond.position(layer, v);
    if (p >= 0) out.push_back(p);
  }
  return out;
}

int required_position(const CondensedNetwork& cond, int layer, NodeIndex v) {
  const int p = cond.position(layer, v);
  if (p < 0) throw InvariantViolation("node " + cond.origin.id(v) + " is not in the condensed key layer");
  return p;
}

// y with r·y = 0 and every entry nonzero.
std::optional<VectorXd> full_support_null(const VectorXd& r) {
  VectorXd y = VectorXd::Ones(r.size());
  std::vector<Eigen::Index> nz;
  const double scale = r.cwiseAbs().sum();
  for (Eigen::Index k = 0; k < r.size(); ++k)
    if (!negligible(r(k), scale)) nz.push_back(k);
  if (nz.empty()) return y;
  if (nz.size() == 1) return std::nullopt;
  const Eigen::Index last = nz.back();
  for (double bump = 1.0; bump <= 8.0; bump += 1.0) {
    y(nz.front()) = bump;
    double rest = 0.0;
    for (Eigen::Index k = 0; k < r.size(); ++k)
      if (k != last) rest += r(k) * y(k);
    y(last) = -rest / r(last);
    if (!negligible(y(last), 1.0)) return y;
  }
  return std::nullopt;
}

}  // namespace

Eigen::Matrix2d condensed_transfer(const CondensedNetwork& cond, std::span<const VectorXd> scales) {
  if (scales.size() + 1 != cond.hops.size()) throw ValidationError("one scale vector per key layer is required");
  MatrixXd acc = cond.hops.front();
  for (std::size_t k = 0; k < scales.size(); ++k) acc = acc * scales[k].asDiagonal() * cond.hops[k + 1];
  return acc.transpose();
}

VectorXd synth_af_single_key(const CondensedNetwork& cond, const SingleKeyRoles& roles) {
  if (cond.hops.size() != 2) throw ValidationError("single key synthesis needs exactly one key layer");
  return single_key_core(cond.hops[0], cond.hops[1], roles.pair, positions(cond, 1, roles.key_inputs),
                         required_position(cond, 1, roles.companion));
}

TwoKeyScaling synth_af_two_key(const CondensedNetwork& cond, const TwoKeyRoles& roles) {
  if (cond.hops.size() != 3) throw ValidationError("two key synthesis needs exactly two key layers");
  const LayeredNetwork& net = cond.origin;
  const int e = idx(roles.early), o = 1 - e;
  const auto& ulayer = cond.layers[1];
  const auto width = static_cast<Eigen::Index>(ulayer.size());
  VectorXd own(width), cross(width);
  for (Eigen::Index k = 0; k < width; ++k) {
    const double h = net.gain(ulayer[static_cast<std::size_t>(k)], roles.early_key);
    own(k) = cond.hops[0](e, k) * h;
    cross(k) = cond.hops[0](o, k) * h;
  }

  TwoKeyScaling out;
  std::optional<VectorXd> y = roles.first_try;
  if (!y) y = full_support_null(cross);
  if (!y) throw InvariantViolation("two key layers: no full-support null vector at the early key node");
  if (negligible(own.dot(*y), own.cwiseAbs().dot(y->cwiseAbs()) + 1e-300)) {
    std::optional<VectorXd> lifted;
    for (Eigen::Index a = 0; a < width && !lifted; ++a)
      for (Eigen::Index b = a + 1; b < width && !lifted; ++b) {
        Eigen::Matrix2d m;
        m << cross(a), cross(b), own(a), own(b);
        auto sol = solve2(m, {0.0, 1.0});
        if (!sol) continue;
        VectorXd partial = VectorXd::Zero(width);
        partial(a) = (*sol)(0);
        partial(b) = (*sol)(1);
        for (double alpha = 1.0; alpha <= 8.0 && !lifted; alpha += 1.0) {
          VectorXd candidate = partial + alpha * *y;
          if ((candidate.array().abs() > kZero * candidate.cwiseAbs().maxCoeff()).all()) lifted = candidate;
        }
      }
    if (!lifted) throw InvariantViolation("two key layers: matrix M is singular for every pair of inputs");
    y = lifted;
    out.used_fallback = true;
  }
  out.y = normalized(*y);

  MatrixXd suppressed = cond.hops[0] * out.y.asDiagonal() * cond.hops[1];
  const MatrixXd magnitude = cond.hops[0].cwiseAbs() * out.y.cwiseAbs().asDiagonal() * cond.hops[1].cwiseAbs();
  for (Eigen::Index r = 0; r < suppressed.rows(); ++r)
    for (Eigen::Index c = 0; c < suppressed.cols(); ++c)
      if (negligible(suppressed(r, c), magnitude(r, c))) suppressed(r, c) = 0.0;
  out.x = single_key_core(suppressed, cond.hops[2], roles.late.pair, positions(cond, 2, roles.late.key_inputs),
                          required_position(cond, 2, roles.late.companion));
  return out;
}

std::variant<VectorXd, ReductionDirective> synth_af_three_column(const CondensedNetwork& cond) {
  if (cond.hops.size() != 2) throw ValidationError("three-column synthesis needs exactly one key layer");
  const MatrixXd& in = cond.hops[0];
  const MatrixXd& out = cond.hops[1];
  const auto width = static_cast<int>(in.cols());
  NodeSet key_nodes;
  for (NodeIndex v : cond.layers[1]) key_nodes.insert(v);
  if (width < 2) throw InvariantViolation("three-column synthesis: key layer narrower than two nodes");
  if (width == 2) return ReductionDirective{"key layer of width 2 reduces to a 2x2x2 network", key_nodes};

  const auto column = [&](int dest, int source, int a, int b, int c) {
    return Eigen::RowVector3d(entry(in, out, dest, source, a), entry(in, out, dest, source, b),
                              entry(in, out, dest, source, c));
  };
  for (int a = 0; a < width; ++a)
    for (int b = a + 1; b < width; ++b)
      for (int c = b + 1; c < width; ++c) {
        Eigen::Matrix3d m1, m2;
        m1 << column(0, 0, a, b, c), column(0, 1, a, b, c), column(1, 0, a, b, c);
        m2 << column(1, 1, a, b, c), column(1, 0, a, b, c), column(0, 1, a, b, c);
        const auto lift = [&](const Eigen::Vector3d& s) {
          VectorXd x = VectorXd::Zero(width);
          x(a) = s(0);
          x(b) = s(1);
          x(c) = s(2);
          return x;
        };
        const auto s1 = solve3(m1, Eigen::Vector3d::UnitX());
        const auto s2 = solve3(m2, Eigen::Vector3d::UnitX());
        if (s1) {
          const VectorXd x = lift(*s1);
          if (!negligible(layer_transfer(in, out, x)(1, 1), layer_magnitude(in, out, x)(1, 1) + 1e-300))
            return normalized(x);
        }
        if (s2) {
          const VectorXd x = lift(*s2);
          if (!negligible(layer_transfer(in, out, x)(0, 0), layer_magnitude(in, out, x)(0, 0) + 1e-300))
            return normalized(x);
        }
        if (s1 && s2) return normalized(lift(*s1) + lift(*s2));
      }
  return ReductionDirective{"no diagonalizing column triple; a node can be removed to leave a 2x2x2 network", key_nodes};
}

std::variant<GrailScaling, ReductionDirective> synth_grail(const CondensedNetwork& cond, const GrailRoles& roles) {
  if (cond.hops.size() != 3) throw ValidationError("grail synthesis needs two key layers");
  const LayeredNetwork& net = cond.origin;
  const auto& t = net.terminals();
  const NodeSet nodes = cond.active;
  if (reachable_within(net, t.s1, roles.u2, nodes))
    return ReductionDirective{"s1 reaches u2; suppression leaves a 2x2x2 network", nodes};
  if (reachable_within(net, roles.v1, t.d1, nodes))
    return ReductionDirective{"v1 reaches d1; suppression leaves a 2x2x2 network", nodes};

  const int u1 = required_position(cond, 1, roles.u1), u2 = required_position(cond, 1, roles.u2);
  const int v1 = required_position(cond, 2, roles.v1), v2 = required_position(cond, 2, roles.v2);
  const MatrixXd& a = cond.hops[0];
  const MatrixXd& b = cond.hops[1];
  const MatrixXd& c = cond.hops[2];
  const double via_u1 = a(1, u1) * b(u1, v2), via_u2 = a(1, u2) * b(u2, v2);
  if (negligible(via_u1, 1.0) || negligible(via_u2, 1.0))
    throw InvariantViolation("grail: s2 does not reach wb through both middle nodes");
  GrailScaling g;
  const double ynorm = std::max(std::abs(via_u1), std::abs(via_u2));
  g.y1 = via_u2 / ynorm;
  g.y2 = -via_u1 / ynorm;
  const auto f = [&](int source, int v) { return a(source, u1) * g.y1 * b(u1, v) + a(source, u2) * g.y2 * b(u2, v); };
  const double x1 = f(0, v2) * c(v2, 1), x2 = -f(0, v1) * c(v1, 1);
  const double xnorm = std::max(std::abs(x1), std::abs(x2));
  if (xnorm == 0.0 || negligible(x1, xnorm) || negligible(x2, xnorm))
    return ReductionDirective{"s1 reaches only one of the second key nodes; suppression applies", nodes};
  g.x1 = x1 / xnorm;
  g.x2 = x2 / xnorm;
  return g;
}

// ---------------------------------------------------------------- network-level synthesis

namespace {

AfSolution forwarding(const LayeredNetwork& net, const NodeSet& active, std::string construction) {
  AfSolution s;
  s.construction = std::move(construction);
  s.active = active;
  s.scale.assign(net.size(), 0.0);
  for (NodeIndex v : active.to_vector()) s.scale[static_cast<std::size_t>(v)] = 1.0;
  return s;
}

void apply(AfSolution& s, const CondensedNetwork& cond, int layer, const VectorXd& x) {
  const auto& nodes = cond.layers[static_cast<std::size_t>(layer)];
  for (std::size_t k = 0; k < nodes.size(); ++k) s.scale[static_cast<std::size_t>(nodes[k])] = x(static_cast<Eigen::Index>(k));
}

std::vector<NodeIndex> key_inputs(const LayeredNetwork& net, const NodeSet& subset, NodeIndex key) {
  std::vector<NodeIndex> out;
  for (NodeIndex u : net.inputs(key))
    if (subset.contains(u)) out.push_back(u);
  return out;
}

NodeIndex path_node(const LayeredNetwork& net, const Path& p, int layer) {
  if (auto v = p.at_layer(net, layer)) return *v;
  throw InvariantViolation("path has no node in layer " + std::to_string(layer));
}

const Path& path_of(Pair p, const Path& p11, const Path& p22) { return p == Pair::first ? p11 : p22; }

}  // namespace

AfOutcome synth_af_pair(const LayeredNetwork& net, const Path& p11, const Path& p22, const NodeSet& subset) {
  const auto counts = interference_counts(net, subset, p11.mask(), p22.mask());
  if (counts[0] == 1 || counts[1] == 1) throw ValidationError("interference is not manageable inside the subset");
  const NodeSet paths = p11.mask() | p22.mask();
  if (counts[0] == 0 && counts[1] == 0) return forwarding(net, paths, "af_forward");

  if (counts[0] == 0 || counts[1] == 0) {
    const Pair pair = counts[0] >= 2 ? Pair::first : Pair::second;
    const auto key = find_key_node(net, subset, path_of(pair, p11, p22), pair);
    if (!key) throw InvariantViolation("interfered path without a key node");
    const std::array<int, 1> layers{key->input_layer};
    const CondensedNetwork cond = build_condensed(net, layers, subset);
    const SingleKeyRoles roles{pair, key_inputs(net, subset, key->node),
                               path_node(net, path_of(other(pair), p11, p22), key->input_layer)};
    AfSolution s = forwarding(net, subset, "af_single_key");
    apply(s, cond, 1, synth_af_single_key(cond, roles));
    return s;
  }

  const auto k1 = find_key_node(net, subset, p11, Pair::first);
  const auto k2 = find_key_node(net, subset, p22, Pair::second);
  if (!k1 || !k2) throw InvariantViolation("interfered path without a key node");
  if (k1->input_layer != k2->input_layer) {
    const KeyNode& early = k1->input_layer < k2->input_layer ? *k1 : *k2;
    const KeyNode& late = k1->input_layer < k2->input_layer ? *k2 : *k1;
    const std::array<int, 2> layers{early.input_layer, late.input_layer};
    const CondensedNetwork cond = build_condensed(net, layers, subset);
    TwoKeyRoles roles;
    roles.early = early.pair;
    roles.early_key = early.node;
    roles.late = {late.pair, key_inputs(net, subset, late.node),
                  path_node(net, path_of(early.pair, p11, p22), late.input_layer)};
    const TwoKeyScaling sc = synth_af_two_key(cond, roles);
    AfSolution s = forwarding(net, subset, "af_two_key");
    apply(s, cond, 1, sc.y);
    apply(s, cond, 2, sc.x);
    return s;
  }

  const int key_layer = k1->input_layer;
  const int cut_layer = std::min(net.layer(k1->node), net.layer(k2->node));
  NodeSet pruned = subset;
  for (NodeIndex v : subset.to_vector())
    if (net.layer(v) >= cut_layer && !paths.contains(v)) pruned.erase(v);
  const std::array<int, 1> layers{key_layer};
  const CondensedNetwork cond = build_condensed(net, layers, pruned);
  auto result = synth_af_three_column(cond);
  if (auto* d = std::get_if<ReductionDirective>(&result)) return *d;
  AfSolution s = forwarding(net, pruned, "af_three_column");
  apply(s, cond, 1, std::get<VectorXd>(result));
  return s;
}

AfOutcome synth_af_butterfly(const LayeredNetwork& net, const ButterflyWitness& w) {
  const NodeSet nodes = w.p11.mask() | w.p22.mask() | w.p12.mask() | w.p21.mask();
  const std::array<int, 1> layers{net.layer(w.u1)};
  const CondensedNetwork cond = build_condensed(net, layers, nodes);
  auto result = synth_af_three_column(cond);
  if (auto* d = std::get_if<ReductionDirective>(&result)) return *d;
  AfSolution s = forwarding(net, nodes, "af_butterfly");
  apply(s, cond, 1, std::get<VectorXd>(result));
  return s;
}

AfOutcome synth_af_grail(const LayeredNetwork& net, const GrailWitness& w) {
  if (w.mirrored) {
    GrailWitness plain = w;
    plain.mirrored = false;
    std::swap(plain.p12, plain.p21);
    return synth_af_grail(swap_pairs(net), plain);
  }
  const NodeSet nodes = w.nodes();
  const int lu = net.layer(w.wa), lv = net.layer(w.wb);
  const GrailRoles roles{w.wa, path_node(net, w.p21, lu), path_node(net, w.p12, lv), w.wb};
  const std::array<int, 2> layers{lu, lv};
  const CondensedNetwork cond = build_condensed(net, layers, nodes);
  auto result = synth_grail(cond, roles);
  if (auto* d = std::get_if<ReductionDirective>(&result)) return *d;
  const GrailScaling& g = std::get<GrailScaling>(result);
  AfSolution s = forwarding(net, nodes, "af_grail");
  s.scale[static_cast<std::size_t>(roles.u1)] = g.y1;
  s.scale[static_cast<std::size_t>(roles.u2)] = g.y2;
  s.scale[static_cast<std::size_t>(roles.v1)] = g.x1;
  s.scale[static_cast<std::size_t>(roles.v2)] = g.x2;
  return s;
}

AfSolution single_stream(const LayeredNetwork& net, const Path& path, Pair pair) {
  NodeSet active = path.mask();
  active |= net.terminal_set();
  AfSolution s = forwarding(net, active, "single_stream");
  s.delivers = {pair == Pair::first, pair == Pair::second};
  return s;
}

Scheme af_scheme(const LayeredNetwork& net, const AfSolution& sol) {
  Scheme scheme(net.size(), 1);
  scheme.construction = sol.construction;
  const auto& t = net.terminals();
  const int a = sol.delivers[0] ? scheme.add_stream("a", Pair::first) : -1;
  const int b = sol.delivers[1] ? scheme.add_stream("b", Pair::second) : -1;
  if (a >= 0) scheme.at(0, t.s1) = RelayProgram::source({{a, 1.0}});
  if (b >= 0) scheme.at(0, t.s2) = RelayProgram::source({{b, 1.0}});
  for (NodeIndex v : sol.active.to_vector()) {
    if (net.is_terminal(v)) continue;
    const double x = sol.scale[static_cast<std::size_t>(v)];
    if (x != 0.0) scheme.at(0, v) = RelayProgram::forward(x);
  }
  if (a >= 0) scheme.deliveries.push_back({t.d1, 0, a});
  if (b >= 0) scheme.deliveries.push_back({t.d2, 0, b});
  scheme.predicted = {Dof{a >= 0 ? 1 : 0, 1}, Dof{b >= 0 ? 1 : 0, 1}};
  const TransferReport report = verify_scheme(net, scheme);
  if (report.alpha > 0.0 && report.alpha < 1.0) scheme.power_margin = report.alpha;
  return scheme;
}

// ---------------------------------------------------------------- dispatch

namespace {

constexpr std::size_t kRetryPaths = 64;

Synthesis from_outcome(const LayeredNetwork& net, const AfOutcome& outcome) {
  Synthesis out;
  if (const auto* s = std::get_if<AfSolution>(&outcome)) {
    Scheme scheme = af_scheme(net, *s);
    if (verify_scheme(net, scheme).passed()) {
      out.scheme = std::move(scheme);
    } else {
      out.note = s->construction + " scheme failed verification";
    }
  } else {
    out.directive = std::get<ReductionDirective>(outcome);
  }
  return out;
}

// The smallest manageable subset may leave a width-2 key layer; the whole network can still be
// manageable with a wider one, so both are tried.
Synthesis manageable(const LayeredNetwork& net, const ManageableWitness& w) {
  Synthesis first = from_outcome(net, synth_af_pair(net, w.p11, w.p22, w.subset));
  if (first.scheme) return first;
  const auto whole = [&](const Path& p11, const Path& p22) -> std::optional<Synthesis> {
    if (!counts_manageable(interference_counts(net, net.all(), p11.mask(), p22.mask()), ManageMode::both))
      return std::nullopt;
    return from_outcome(net, synth_af_pair(net, p11, p22, net.all()));
  };
  if (auto s = whole(w.p11, w.p22); s && s->scheme) return *s;
  const auto& t = net.terminals();
  for (const auto& p11 : enumerate_paths(net, t.s1, t.d1, net.all(), kRetryPaths))
    for (const auto& p22 : enumerate_paths(net, t.s2, t.d2, net.all() - p11.mask(), kRetryPaths)) {
      const SubsetSearch s = find_manageable_subset(net, p11, p22, ManageMode::both);
      if (!s.subset) continue;
      Synthesis next = from_outcome(net, synth_af_pair(net, p11, p22, *s.subset));
      if (next.scheme) return next;
      if (auto wider = whole(p11, p22); wider && wider->scheme) return *wider;
    }
  return first;
}

Synthesis one_stream(const LayeredNetwork& net, Pair pair) {
  auto path = find_path(net, net.source(pair), net.destination(pair), net.all());
  if (!path) return {};
  return from_outcome(net, single_stream(net, *path, pair));
}

}  // namespace

Synthesis synthesize(const LayeredNetwork& net, const Classification& c) {
  const auto& t = net.terminals();
  switch (c.kind) {
    case DofCase::disconnected: {
      if (reachable(net, t.s1, t.d1)) return one_stream(net, Pair::first);
      if (reachable(net, t.s2, t.d2)) return one_stream(net, Pair::second);
      return {std::nullopt, std::nullopt, "neither pair is connected"};
    }
    case DofCase::A:
    case DofCase::A_prime:
      return one_stream(net, Pair::first);
    case DofCase::B:
      if (const auto* w = std::get_if<ManageableWitness>(&c.witness)) return manageable(net, *w);
      break;
    case DofCase::B_prime:
      if (const auto* w = std::get_if<CrossWitness>(&c.witness)) {
        if (w->butterfly) return from_outcome(net, synth_af_butterfly(net, *w->butterfly));
        if (w->grail) return from_outcome(net, synth_af_grail(net, *w->grail));
        return {std::nullopt, std::nullopt, "cross subnetwork without a butterfly or grail"};
      }
      break;
    case DofCase::C1:
      if (const auto* w = std::get_if<C1Witness>(&c.witness)) {
        if (!w->certified) return {std::nullopt, std::nullopt, "witness fails the structural properties"};
        return {synth_two_mode(net, *w), std::nullopt, {}};
      }
      break;
    case DofCase::C2:
      if (const auto* w = std::get_if<C2Witness>(&c.witness)) {
        if (!w->certified) return {std::nullopt, std::nullopt, "witness fails the structural properties"};
        return {synth_two_mode(net, *w), std::nullopt, {}};
      }
      break;
    case DofCase::indeterminate:
      return {std::nullopt, std::nullopt, "classification is indeterminate"};
  }
  return {std::nullopt, std::nullopt, "classification carries no witness"};
}

}  // namespace tudof
