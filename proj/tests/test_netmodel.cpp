#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tudof/errors.hpp"
#include "tudof/network_io.hpp"
#include "tudof/paths.hpp"

using namespace tudof;

namespace {

Path ids_path(const LayeredNetwork& net, std::vector<std::string> ids) { return Path::from_ids(net, ids); }

std::vector<std::string> names(const LayeredNetwork& net, const Path& p) {
  std::vector<std::string> out;
  for (NodeIndex v : p.nodes()) out.push_back(net.id(v));
  return out;
}

using Names = std::vector<std::string>;

}  // namespace

TEST(Validate, ParallelChainsNeedNoPruning) {
  const auto parsed = parse_network_text(read_text_file(oracle::data_path("par.net")));
  const ValidationReport r = validate(parsed.draft);
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(r.pruned.empty());
  EXPECT_TRUE(r.first_pair_connected && r.second_pair_connected);
  EXPECT_EQ(r.network->size(), 6u);
  EXPECT_EQ(r.network->edges().size(), 4u);
}

TEST(Validate, BottleneckIsValid) {
  const auto parsed = parse_network_text(read_text_file(oracle::data_path("bottle.net")));
  EXPECT_TRUE(validate(parsed.draft).ok());
}

TEST(Validate, IsolatedNodeIsPrunedWithWarning) {
  auto parsed = parse_network_text(read_text_file(oracle::data_path("par.net")));
  parsed.draft.node("x", 2);
  const ValidationReport r = validate(parsed.draft);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.pruned, std::vector<std::string>{"x"});
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_FALSE(r.network->find("x"));
}

TEST(Validate, PruningIsIdempotent) {
  for (const auto& net : oracle::suite(40, 500, 16, 0.5)) {
    const ValidationReport r = validate(net);
    ASSERT_TRUE(r.ok());
    EXPECT_TRUE(r.pruned.empty());
    EXPECT_EQ(serialize_network(prune(net)), serialize_network(net));
  }
}

TEST(Validate, MissingConnectivityIsReported) {
  NetworkBuilder b;
  b.layers(3).node("s1", 1).node("s2", 1).node("a", 2).node("d1", 3).node("d2", 3);
  b.edge("s1", "a", 1.0).edge("a", "d1", 1.0).edge("s2", "a", 1.0).pairs("s1", "d1", "s2", "d2");
  const ValidationReport r = validate(b);
  EXPECT_TRUE(r.first_pair_connected);
  EXPECT_FALSE(r.second_pair_connected);
}

TEST(Validate, MalformedInputThrows) {
  NetworkBuilder dup;
  dup.layers(2).node("s1", 1).node("s1", 1);
  EXPECT_THROW(validate(dup), ValidationError);
  NetworkBuilder dangling;
  dangling.layers(2).node("s1", 1).node("s2", 1).node("d1", 2).node("d2", 2).edge("s1", "zz", 1.0);
  dangling.pairs("s1", "d1", "s2", "d2");
  EXPECT_THROW(validate(dangling), ValidationError);
}

TEST(Validate, LayerSkippingEdgeIsAnError) {
  NetworkBuilder b;
  b.layers(3).node("s1", 1).node("s2", 1).node("a", 2).node("b", 2).node("d1", 3).node("d2", 3);
  b.edge("s1", "a", 1).edge("a", "d1", 1).edge("s2", "b", 1).edge("b", "d2", 1).edge("s1", "d2", 1);
  b.pairs("s1", "d1", "s2", "d2");
  EXPECT_FALSE(b.layering_violations().empty());
  EXPECT_FALSE(validate(b).ok());
}

TEST(Parse, ZeroGainIsRejectedWithLine) {
  try {
    parse_network_text("layers 2\nnode s1 1\nnode s2 1\nnode d1 2\nnode d2 2\nedge s1 d1 0\npairs s1 d1 s2 d2\n");
    FAIL() << "accepted a zero gain";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 6u);
    EXPECT_NE(std::string(e.what()).find("stored edges carry nonzero gain"), std::string::npos);
  }
}

TEST(Parse, SyntaxErrorsCarryLineNumbers) {
  try {
    parse_network_text("layers 2\n# comment\nnode s1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(parse_network_text("layers 2\nbogus 1\n"), ParseError);
  EXPECT_THROW(parse_network_text("node a 1\n"), ParseError);
  EXPECT_THROW(parse_network_text("layers 2\nnode s1 1\nedge s1 d1 abc\n"), ParseError);
}

TEST(Parse, DecimalGainsAreExact) {
  const auto net = network_from_text(
      "layers 2\nnode s1 1\nnode s2 1\nnode d1 2\nnode d2 2\nedge s1 d1 0.1\nedge s2 d2 -1.25e-3\npairs s1 d1 s2 d2\n");
  EXPECT_EQ(net.gain(net.index("s1"), net.index("d1")), 0.1);
  EXPECT_EQ(net.gain(net.index("s2"), net.index("d2")), -1.25e-3);
}

TEST(Parse, RandGainsFollowTheSeed) {
  const std::string text = read_text_file(oracle::data_path("222.net"));
  const auto a = network_from_text(text), b = network_from_text(text);
  EXPECT_EQ(serialize_network(a), serialize_network(b));
  std::string other = text;
  other.replace(other.find("seed 222"), 8, "seed 223");
  EXPECT_NE(serialize_network(network_from_text(other)), serialize_network(a));
  for (const auto& e : a.edges()) {
    EXPECT_GE(std::abs(e.gain), 0.5);
    EXPECT_LE(std::abs(e.gain), 2.0);
  }
}

TEST(Parse, SerializeRoundTrips) {
  for (const auto& net : oracle::suite(30, 900, 20, 0.5)) {
    const std::string once = serialize_network(net);
    const auto again = network_from_text(once);
    EXPECT_EQ(serialize_network(again), once);
    for (std::size_t k = 0; k < net.edges().size(); ++k) EXPECT_EQ(again.edges()[k].gain, net.edges()[k].gain);
  }
}

TEST(Reachable, FixtureExamples) {
  const auto par = oracle::fixture("par");
  const auto& t = par.terminals();
  EXPECT_TRUE(reachable(par, t.s1, t.d1));
  EXPECT_FALSE(reachable(par, t.s1, t.d2));
  EXPECT_TRUE(reachable(par, t.s1, t.s1));
  const auto n222 = oracle::fixture("222");
  const auto& u = n222.terminals();
  EXPECT_EQ(reachable(n222, u.s1, u.d2), oracle::reach(n222, u.s1, u.d2, n222.all()));
  EXPECT_TRUE(reachable(n222, u.s1, u.d2));
  EXPECT_THROW(par.index("nope"), ValidationError);
}

TEST(Reachable, AgreesWithEnumeration) {
  for (const auto& net : oracle::suite(30, 40, 14, 0.5))
    for (std::size_t u = 0; u < net.size(); ++u)
      for (std::size_t v = 0; v < net.size(); ++v) {
        const auto a = static_cast<NodeIndex>(u), b = static_cast<NodeIndex>(v);
        ASSERT_EQ(reachable(net, a, b), oracle::reach(net, a, b, net.all()));
      }
}

TEST(Induced, WholeSetIsIdentity) {
  const auto par = oracle::fixture("par");
  EXPECT_EQ(serialize_network(induced_subnetwork(par, par.all())), serialize_network(par));
}

TEST(Induced, MissingTerminalThrows) {
  const auto par = oracle::fixture("par");
  NodeSet s = par.all();
  s.erase(par.terminals().d2);
  EXPECT_THROW(induced_subnetwork(par, s), ValidationError);
}

TEST(Induced, DroppingOneRelayOfTheTwoByTwoLeavesABottleneck) {
  const auto net = oracle::fixture("222");
  NodeSet s = net.all();
  s.erase(net.index("u2"));
  const auto sub = induced_subnetwork(net, s);
  EXPECT_EQ(sub.size(), 5u);
  EXPECT_TRUE(oracle::has_case_a(sub, sub.all()));
}

TEST(DisjointPaths, FixtureExamples) {
  const auto par = oracle::fixture("par");
  const auto& t = par.terminals();
  const auto pp = find_disjoint_paths(par, {t.s1, t.s2}, {t.d1, t.d2});
  ASSERT_TRUE(pp);
  EXPECT_EQ(names(par, pp->first), (Names{"s1", "a", "d1"}));
  EXPECT_EQ(names(par, pp->second), (Names{"s2", "b", "d2"}));

  const auto bottle = oracle::fixture("bottle");
  const auto& b = bottle.terminals();
  EXPECT_FALSE(find_disjoint_paths(bottle, {b.s1, b.s2}, {b.d1, b.d2}));

  const auto n222 = oracle::fixture("222");
  const auto& u = n222.terminals();
  const auto found = find_disjoint_paths(n222, {u.s1, u.s2}, {u.d1, u.d2});
  EXPECT_EQ(found.has_value(), oracle::disjoint_pair_exists(n222, u.s1, u.d1, u.s2, u.d2, n222.all()));
  ASSERT_TRUE(found);
  EXPECT_FALSE(found->first.mask().intersects(found->second.mask()));
}

TEST(DisjointPaths, MengerConsistencyAgainstEnumeration) {
  for (const auto& net : oracle::suite(120, 7000, 12, 0.6)) {
    const auto& t = net.terminals();
    const auto found = find_unicast_pair(net, net.all());
    ASSERT_EQ(found.has_value(), oracle::disjoint_pair_exists(net, t.s1, t.d1, t.s2, t.d2, net.all()));
    if (found) {
      EXPECT_EQ(found->first.front(), t.s1);
      EXPECT_EQ(found->first.back(), t.d1);
      EXPECT_EQ(found->second.front(), t.s2);
      EXPECT_EQ(found->second.back(), t.d2);
      EXPECT_FALSE(found->first.mask().intersects(found->second.mask()));
    }
    const int flow = vertex_disjoint_flow(net, {t.s1, t.s2}, {t.d1, t.d2}, net.all());
    EXPECT_EQ(std::min(flow, 2), oracle::disjoint_count(net, t.s1, t.s2, t.d1, t.d2));
    const auto any = find_disjoint_paths_any_pairing(net, {t.s1, t.s2}, {t.d1, t.d2}, net.all());
    EXPECT_EQ(any.has_value(), flow >= 2);
  }
}

TEST(PathAlgebra, SliceAndConcat) {
  const auto par = oracle::fixture("par");
  const Path p = ids_path(par, {"s1", "a", "d1"});
  EXPECT_EQ(names(par, slice(par, p, par.index("a"), par.index("d1"))), (Names{"a", "d1"}));
  const Path head = ids_path(par, {"s1", "a"}), tail = ids_path(par, {"a", "d1"});
  EXPECT_EQ(concat(par, head, tail), p);
  EXPECT_THROW(slice(par, p, par.index("b"), par.index("d1")), ValidationError);
  EXPECT_THROW(slice(par, p, par.index("d1"), par.index("a")), ValidationError);
  EXPECT_THROW(concat(par, head, ids_path(par, {"b", "d2"})), ValidationError);
  EXPECT_THROW(ids_path(par, {"s1", "b"}), ValidationError);
}

TEST(PathAlgebra, SpliceOfTheExampleNetwork) {
  // Q22 = P22[s2, v7] ⊕ a v7 ⇝ d1 path; every such splice is one of the enumerated s2 ⇝ d1 paths.
  const auto net = oracle::fixture("ex1");
  const Path p22 = ids_path(net, {"s2", "v7", "v8", "v9", "d2"});
  const Path head = slice(net, p22, net.index("s2"), net.index("v7"));
  const auto tails = enumerate_paths(net, net.index("v7"), net.terminals().d1, net.all());
  ASSERT_FALSE(tails.empty());
  const auto reference = oracle::paths(net, net.terminals().s2, net.terminals().d1, net.all());
  for (const auto& tail : tails) {
    const Path q = concat(net, head, tail);
    EXPECT_NE(std::find(reference.begin(), reference.end(), oracle::to_list(q.nodes())), reference.end());
  }
}

TEST(PathAlgebra, EnumerationMatchesReference) {
  for (const auto& net : oracle::suite(25, 300, 14, 0.6)) {
    const auto& t = net.terminals();
    const auto mine = enumerate_paths(net, t.s1, t.d1, net.all());
    const auto ref = oracle::paths(net, t.s1, t.d1, net.all());
    ASSERT_EQ(mine.size(), ref.size());
    EXPECT_EQ(count_paths(net, t.s1, t.d1, net.all()), ref.size());
    for (const auto& p : mine) EXPECT_NE(std::find(ref.begin(), ref.end(), oracle::to_list(p.nodes())), ref.end());
  }
}

TEST(Extend, ParallelChainsDoubleTheirLayers) {
  const auto par = oracle::fixture("par");
  const ExtendedNetwork ext = extend_network(par);
  EXPECT_EQ(ext.net.layer_count(), 6);
  EXPECT_EQ(ext.net.size(), 12u);
  EXPECT_EQ(ext.net.edges().size(), 10u);
  int copies = 0;
  for (const auto& e : ext.net.edges())
    if (ext.origin[static_cast<std::size_t>(e.tail)] == ext.origin[static_cast<std::size_t>(e.head)]) {
      ++copies;
      EXPECT_EQ(e.gain, 1.0);
    }
  EXPECT_EQ(copies, 6);
}

TEST(Extend, BottleneckCopyEdgeIsACut) {
  const auto bottle = oracle::fixture("bottle");
  const ExtendedNetwork ext = extend_network(bottle);
  const auto& t = ext.net.terminals();
  const NodeSet sources{t.s1, t.s2}, sinks{t.d1, t.d2};
  EXPECT_EQ(edge_disjoint_flow(ext.net, sources, sinks), 1);
  const NodeIndex m = bottle.index("m");
  NodeIndex copy_tail = -1, copy_head = -1;
  for (const auto& e : ext.net.edges())
    if (ext.origin[static_cast<std::size_t>(e.tail)] == m && ext.origin[static_cast<std::size_t>(e.head)] == m) {
      copy_tail = e.tail;
      copy_head = e.head;
    }
  ASSERT_GE(copy_tail, 0);
  auto b = ext.net.to_builder();
  b.remove_edge(ext.net.id(copy_tail), ext.net.id(copy_head));
  const auto cut = b.build();
  for (NodeIndex s : {cut.terminals().s1, cut.terminals().s2})
    for (NodeIndex d : {cut.terminals().d1, cut.terminals().d2}) EXPECT_FALSE(reachable(cut, s, d));
}

TEST(Extend, EdgeDisjointMatchesVertexDisjoint) {
  std::vector<LayeredNetwork> nets = oracle::suite(80, 1200, 10, 0.6);
  nets.push_back(oracle::fixture("222"));
  for (const auto& net : nets) {
    const ExtendedNetwork ext = extend_network(net);
    const auto& t = net.terminals();
    const auto& x = ext.net.terminals();
    const int edge = edge_disjoint_flow(ext.net, {x.s1, x.s2}, {x.d1, x.d2});
    ASSERT_EQ(std::min(edge, 2), oracle::disjoint_count(net, t.s1, t.s2, t.d1, t.d2));
  }
}

TEST(Generic, GainsStayInRange) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 10000; ++k) {
    const double g = generic_gain(rng);
    ASSERT_GE(std::abs(g), 0.5);
    ASSERT_LE(std::abs(g), 2.0);
  }
}

TEST(Generic, RandomNetworksAreDeterministicAndConnected) {
  const RandomNetworkConfig cfg;
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto a = random_network(cfg, s), b = random_network(cfg, s);
    EXPECT_EQ(serialize_network(a), serialize_network(b));
    EXPECT_GE(a.layer_count(), cfg.min_layers);
    EXPECT_LE(a.layer_count(), cfg.max_layers);
    const auto& t = a.terminals();
    EXPECT_TRUE(reachable(a, t.s1, t.d1) || reachable(a, t.s2, t.d2));
  }
}
