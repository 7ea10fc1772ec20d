#include <algorithm>
#include <string>

#include "tudof/af.hpp"
#include "tudof/engine.hpp"
#include "tudof/errors.hpp"

namespace tudof {

std::optional<NodeIndex> DerivedNetwork::image(const LayeredNetwork& original, NodeIndex v) const {
  return net.find(original.id(v));
}

DerivedNetwork splice_virtual_terminal(const LayeredNetwork& net, const NodeSet& active, Pair pair, NodeIndex node,
                                       VirtualRole role) {
  if (net.is_terminal(node)) throw ValidationError("virtual terminals attach to relays only");
  const NodeIndex replaced = role == VirtualRole::destination ? net.destination(pair) : net.source(pair);
  NodeSet keep = active;
  keep.erase(replaced);
  keep.insert(node);

  NetworkBuilder b;
  b.layers(net.layer_count());
  for (NodeIndex v : keep.to_vector()) b.node(net.id(v), net.layer(v));
  for (const Edge& e : net.edges()) {
    if (!keep.contains(e.tail) || !keep.contains(e.head)) continue;
    if (role == VirtualRole::destination && e.tail == node) continue;
    if (role == VirtualRole::source && e.head == node) continue;
    b.edge(net.id(e.tail), net.id(e.head), e.gain);
  }

  std::string stem = net.id(node) + "~";
  const auto taken = [&] {
    for (std::size_t v = 0; v < net.size(); ++v)
      if (net.id(static_cast<NodeIndex>(v)).starts_with(stem)) return true;
    return false;
  };
  while (taken()) stem += "~";
  std::vector<std::string> chain;
  const int from = role == VirtualRole::destination ? net.layer(node) + 1 : 1;
  const int to = role == VirtualRole::destination ? net.layer_count() : net.layer(node) - 1;
  for (int l = from; l <= to; ++l) {
    chain.push_back(stem + std::to_string(l));
    b.node(chain.back(), l);
  }
  if (role == VirtualRole::destination) {
    b.edge(net.id(node), chain.front(), 1.0);
  } else {
    b.edge(chain.back(), net.id(node), 1.0);
  }
  for (std::size_t k = 0; k + 1 < chain.size(); ++k) b.edge(chain[k], chain[k + 1], 1.0);

  std::array<std::string, 4> ids{net.id(net.terminals().s1), net.id(net.terminals().d1), net.id(net.terminals().s2),
                                 net.id(net.terminals().d2)};
  const std::size_t slot = static_cast<std::size_t>(2 * static_cast<int>(pair) + (role == VirtualRole::destination ? 1 : 0));
  ids[slot] = role == VirtualRole::destination ? chain.back() : chain.front();
  b.pairs(ids[0], ids[1], ids[2], ids[3]);

  DerivedNetwork out{prune(b.build()), {}};
  for (const auto& id : chain)
    if (auto v = out.net.find(id)) out.chain.push_back(*v);
  return out;
}

namespace {

struct ModeSolution {
  DerivedNetwork derived;
  AfSolution af;
};

std::vector<std::string> ids_of(const LayeredNetwork& net, const Path& p) {
  std::vector<std::string> out;
  for (NodeIndex v : p.nodes()) out.push_back(net.id(v));
  return out;
}

std::optional<AfSolution> try_pair(const LayeredNetwork& d, const Path& p11, const Path& p22) {
  const SubsetSearch s = find_manageable_subset(d, p11, p22, ManageMode::both);
  if (!s.subset) return std::nullopt;
  const AfOutcome outcome = synth_af_pair(d, p11, p22, *s.subset);
  const auto* sol = std::get_if<AfSolution>(&outcome);
  if (!sol || !verify_scheme(d, af_scheme(d, *sol)).passed()) return std::nullopt;
  return *sol;
}

// AF solution for one mode; `own` is the real part of the virtual pair's path.
ModeSolution mode_af(const LayeredNetwork& g, const NodeSet& active, Pair pair, NodeIndex node, VirtualRole role,
                     const Path& own, const Path& companion) {
  DerivedNetwork d = splice_virtual_terminal(g, active, pair, node, role);
  std::vector<std::string> chain;
  for (NodeIndex v : d.chain) chain.push_back(d.net.id(v));
  std::vector<std::string> own_ids = ids_of(g, own);
  if (role == VirtualRole::destination) {
    own_ids.insert(own_ids.end(), chain.begin(), chain.end());
  } else {
    own_ids.insert(own_ids.begin(), chain.begin(), chain.end());
  }
  const Path virtual_path = Path::from_ids(d.net, own_ids);
  const Path other_path = Path::from_ids(d.net, ids_of(g, companion));
  const Path& p11 = pair == Pair::first ? virtual_path : other_path;
  const Path& p22 = pair == Pair::first ? other_path : virtual_path;
  if (auto sol = try_pair(d.net, p11, p22)) return {std::move(d), *sol};

  const auto& t = d.net.terminals();
  for (const auto& q11 : enumerate_paths(d.net, t.s1, t.d1, d.net.all(), 64))
    for (const auto& q22 : enumerate_paths(d.net, t.s2, t.d2, d.net.all() - q11.mask(), 64))
      if (auto sol = try_pair(d.net, q11, q22)) return {std::move(d), *sol};
  throw InvariantViolation("no amplify-and-forward scheme for the mode subnetwork at " + g.id(node));
}

bool in_chain(const DerivedNetwork& d, NodeIndex v) {
  return std::find(d.chain.begin(), d.chain.end(), v) != d.chain.end();
}

// Relay programs of a mode solution on the real network; `buffer` is handled by the caller.
void install(Scheme& scheme, int mode, const LayeredNetwork& g, const ModeSolution& m, NodeIndex buffer) {
  const LayeredNetwork& d = m.derived.net;
  for (NodeIndex v : m.af.active.to_vector()) {
    if (d.is_terminal(v) || in_chain(m.derived, v)) continue;
    const NodeIndex real = g.index(d.id(v));
    if (real == buffer || g.is_terminal(real)) continue;
    const double x = m.af.scale[static_cast<std::size_t>(v)];
    if (x != 0.0) scheme.at(mode, real) = RelayProgram::forward(x);
  }
}

// Gain from the virtual source through its chain and out of `node`.
double chain_gain(const ModeSolution& m, NodeIndex node_in_g, const LayeredNetwork& g) {
  const LayeredNetwork& d = m.derived.net;
  double rho = m.af.scale[static_cast<std::size_t>(d.index(g.id(node_in_g)))];
  for (NodeIndex v : m.derived.chain)
    if (!d.is_terminal(v)) rho *= m.af.scale[static_cast<std::size_t>(v)];
  if (rho == 0.0) throw InvariantViolation("virtual source chain carries no signal");
  return rho;
}

NodeSet after(const LayeredNetwork& g, const Path& p, NodeIndex v) {
  NodeSet out;
  for (NodeIndex u : p.nodes())
    if (g.layer(u) > g.layer(v)) out.insert(u);
  return out;
}

NodeSet before(const LayeredNetwork& g, const Path& p, NodeIndex v) {
  NodeSet out;
  for (NodeIndex u : p.nodes())
    if (g.layer(u) < g.layer(v)) out.insert(u);
  return out;
}

NodeIndex at(const LayeredNetwork& g, const Path& p, int layer) {
  if (auto v = p.at_layer(g, layer)) return *v;
  throw InvariantViolation("path has no node in layer " + std::to_string(layer));
}

void check_lengths(ModeLengths lengths) {
  if (lengths.first != lengths.second || lengths.first <= 0)
    throw ValidationError("both modes must last the same number of time steps");
}

// Mode 0 stores the virtual pair's stream at `t`; mode 1 forwards it from `t` while the other pair sends again.
Scheme buffered(const LayeredNetwork& g, Pair stored, NodeIndex t, const ModeSolution& m0, const ModeSolution& m1,
                std::string construction) {
  const Pair fresh = other(stored);
  Scheme s(g.size(), 2);
  s.construction = std::move(construction);
  const std::string tag = fresh == Pair::first ? "a" : "b";
  const int kept = s.add_stream(stored == Pair::first ? "a" : "b", stored);
  const int early = s.add_stream(tag + "1", fresh);
  const int late = s.add_stream(tag + "2", fresh);

  s.at(0, g.source(stored)) = RelayProgram::source({{kept, 1.0}});
  s.at(0, g.source(fresh)) = RelayProgram::source({{early, 1.0}});
  install(s, 0, g, m0, t);
  s.at(0, t).kind = ProgramKind::buffer_store;

  s.at(1, g.source(fresh)) = RelayProgram::source({{late, 1.0}});
  install(s, 1, g, m1, t);
  s.at(1, t) = {ProgramKind::buffer_forward, chain_gain(m1, t, g), 0.0, 0, {}};

  s.deliveries = {{g.destination(fresh), 0, early}, {g.destination(fresh), 1, late}, {g.destination(stored), 1, kept}};
  s.predicted = stored == Pair::second ? std::pair{Dof{1, 1}, Dof{1, 2}} : std::pair{Dof{1, 2}, Dof{1, 1}};
  return s;
}

Scheme finish(const LayeredNetwork& g, Scheme s, bool swapped) {
  const TransferReport report = verify_scheme(g, s);
  if (report.alpha > 0.0 && report.alpha < 1.0) s.power_margin = report.alpha;
  if (swapped) s = relabel_pairs(std::move(s));
  return s;
}

}  // namespace

Scheme synth_two_mode(const LayeredNetwork& net, const C1Witness& w, ModeLengths lengths) {
  check_lengths(lengths);
  const LayeredNetwork g = w.swapped ? swap_pairs(net) : net;
  if (!w.certified || !c1_properties(g, w).all_hold())
    throw ValidationError("witness fails the structural properties");
  const int split = g.layer(w.v2);
  if (g.layer(w.v3) < split) {
    const NodeIndex t = at(g, w.p22, split);
    const ModeSolution m0 = mode_af(g, g.all() - after(g, w.p22, t), Pair::second, t, VirtualRole::destination,
                                    slice(g, w.p22, g.terminals().s2, t), w.p11);
    const ModeSolution m1 = mode_af(g, w.p11.mask() | (w.p22.mask() - before(g, w.p22, t)), Pair::second, t,
                                    VirtualRole::source, slice(g, w.p22, t, g.terminals().d2), w.p11);
    return finish(g, buffered(g, Pair::second, t, m0, m1, "two_mode_c1_relay_p22"), w.swapped);
  }
  const NodeIndex t = at(g, w.p11, split);
  const ModeSolution m0 = mode_af(g, (w.p11.mask() - after(g, w.p11, t)) | w.p22.mask(), Pair::first, t,
                                  VirtualRole::destination, slice(g, w.p11, g.terminals().s1, t), w.p22);
  const ModeSolution m1 = mode_af(g, g.all() - before(g, w.p11, t), Pair::first, t, VirtualRole::source,
                                  slice(g, w.p11, t, g.terminals().d1), w.p22);
  return finish(g, buffered(g, Pair::first, t, m0, m1, "two_mode_c1_relay_p11"), w.swapped);
}

Scheme synth_two_mode(const LayeredNetwork& net, const C2Witness& w, ModeLengths lengths) {
  check_lengths(lengths);
  const LayeredNetwork g = w.swapped ? swap_pairs(net) : net;
  if (!w.certified || !c2_properties(g, w).all_hold())
    throw ValidationError("witness fails the structural properties");
  const auto& term = g.terminals();
  if (g.layer(w.v3) >= g.layer(w.v1)) {
    const NodeIndex t = at(g, w.p22, g.layer(w.v1));
    const ModeSolution m0 = mode_af(g, g.all() - after(g, w.p22, t), Pair::second, t, VirtualRole::destination,
                                    slice(g, w.p22, term.s2, t), w.q11);
    const ModeSolution m1 = mode_af(g, w.z11.mask() | (w.p22.mask() - before(g, w.p22, t)), Pair::second, t,
                                    VirtualRole::source, slice(g, w.p22, t, term.d2), w.z11);
    return finish(g, buffered(g, Pair::second, t, m0, m1, "two_mode_c2_relay_p22"), w.swapped);
  }

  // v1 hears b in mode 0 and subtracts it from its mode-1 reception.
  const ModeSolution m0 = mode_af(g, g.all() - after(g, w.p22, w.v2), Pair::second, w.v1, VirtualRole::destination,
                                  concat(g, slice(g, w.p22, term.s2, w.v2), Path(g, {w.v2, w.v1})), w.q11);

  Scheme s(g.size(), 2);
  s.construction = "two_mode_c2_cancel";
  const int b = s.add_stream("b", Pair::second);
  const int a1 = s.add_stream("a1", Pair::first);
  const int a2 = s.add_stream("a2", Pair::first);
  s.at(0, term.s1) = RelayProgram::source({{a1, 1.0}});
  s.at(0, term.s2) = RelayProgram::source({{b, 1.0}});
  install(s, 0, g, m0, w.v1);
  s.at(0, w.v1).kind = ProgramKind::buffer_store;

  s.at(1, term.s1) = RelayProgram::source({{a2, 1.0}});
  s.at(1, term.s2) = RelayProgram::source({{b, 1.0}});
  for (NodeIndex v : (w.z11.mask() | w.p22.mask()).to_vector())
    if (!g.is_terminal(v)) s.at(1, v) = RelayProgram::forward(1.0);
  s.at(1, w.v1) = {ProgramKind::buffer_cancel, 1.0, 0.0, 0, {}};

  const auto signals = propagate(g, s);
  const double stored = signals[0].received[static_cast<std::size_t>(w.v1)].symbols(b);
  const double heard = signals[1].received[static_cast<std::size_t>(w.v1)].symbols(b);
  if (stored == 0.0) throw InvariantViolation("v1 stores no copy of b in mode 1");
  s.at(1, w.v1).c = heard / stored;

  s.deliveries = {{term.d1, 0, a1}, {term.d1, 1, a2}, {term.d2, 1, b}};
  s.predicted = {Dof{1, 1}, Dof{1, 2}};
  return finish(g, std::move(s), w.swapped);
}

}  // namespace tudof
