#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "tudof/condense.hpp"
#include "tudof/errors.hpp"

using namespace tudof;

namespace {

double g(const LayeredNetwork& net, const char* a, const char* b) { return net.gain(net.index(a), net.index(b)); }

double relative(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

}  // namespace

TEST(EffectiveGain, CondensationIdentities) {
  const auto base = oracle::fixture("cond");
  for (std::uint64_t draw = 0; draw < 20; ++draw) {
    const auto net = redraw_gains(base, draw);
    const double expected = g(net, "s2", "a") * g(net, "a", "v3") + g(net, "s2", "b") * g(net, "b", "v3");
    EXPECT_LE(relative(effective_gain(net, net.all(), net.index("s2"), net.index("v3")), expected), 1e-12);
    EXPECT_EQ(effective_gain(net, net.all(), net.index("v2"), net.terminals().d2), 0.0);
  }
}

TEST(EffectiveGain, UnitChainAndOrderCheck) {
  const auto par = oracle::fixture("par");
  const auto& t = par.terminals();
  EXPECT_EQ(effective_gain(par, par.all(), t.s1, t.d1), 1.0);
  EXPECT_EQ(effective_gain(par, par.all(), t.s1, t.d2), 0.0);
  EXPECT_THROW(effective_gain(par, par.all(), t.d1, t.s1), ValidationError);
}

TEST(EffectiveGain, DualityWithLayerProductsAndPathSums) {
  int compared = 0;
  for (const auto& net : oracle::suite(100, 800, 20, 0.6))
    for (std::size_t u = 0; u < net.size(); ++u)
      for (std::size_t v = 0; v < net.size(); ++v) {
        const auto a = static_cast<NodeIndex>(u), b = static_cast<NodeIndex>(v);
        if (net.layer(a) >= net.layer(b)) continue;
        const double mine = effective_gain(net, net.all(), a, b);
        const double product = oracle::layer_product_gain(net, a, b);
        const double sum = oracle::path_sum_gain(net, net.all(), a, b);
        const double scale = std::max({std::abs(product), std::abs(sum), 1e-300});
        ASSERT_LE(std::abs(mine - product), 1e-12 * scale);
        ASSERT_LE(std::abs(mine - sum), 1e-12 * scale);
        ++compared;
      }
  EXPECT_GT(compared, 1000);
}

TEST(EffectiveGain, RestrictedForwardersMatchPathSums) {
  for (const auto& net : oracle::suite(40, 1500, 16, 0.6)) {
    NodeSet forwarders;
    for (std::size_t v = 0; v < net.size(); v += 2) forwarders.insert(static_cast<NodeIndex>(v));
    const auto& t = net.terminals();
    for (NodeIndex s : {t.s1, t.s2})
      for (NodeIndex d : {t.d1, t.d2}) {
        const double want = oracle::path_sum_gain(net, forwarders, s, d);
        EXPECT_NEAR(effective_gain(net, forwarders, s, d), want, 1e-12 * std::max(1.0, std::abs(want)));
      }
  }
}

TEST(EffectiveGain, ZeroExactlyWhenUnreachable) {
  for (const auto& net : oracle::suite(100, 2500, 20, 0.5))
    for (std::size_t u = 0; u < net.size(); ++u)
      for (std::size_t v = 0; v < net.size(); ++v) {
        const auto a = static_cast<NodeIndex>(u), b = static_cast<NodeIndex>(v);
        if (net.layer(a) >= net.layer(b)) continue;
        const bool nonzero = generically_nonzero(net, gain_expression(a, b));
        ASSERT_EQ(nonzero, reachable(net, a, b));
      }
}

TEST(Condensed, MiddleKeyLayerOfTheFiveLayerNetwork) {
  const auto net = oracle::fixture("cond");
  const std::array<int, 1> key{3};
  const CondensedNetwork c = build_condensed(net, key);
  ASSERT_EQ(c.layers.size(), 3u);
  std::vector<std::string> middle;
  for (NodeIndex v : c.layers[1]) middle.push_back(net.id(v));
  EXPECT_EQ(middle, (std::vector<std::string>{"v1", "v2", "v3"}));
  const double expected = g(net, "s2", "a") * g(net, "a", "v3") + g(net, "s2", "b") * g(net, "b", "v3");
  EXPECT_LE(relative(c.gain(net.index("s2"), net.index("v3")), expected), 1e-12);
  EXPECT_EQ(c.gain(net.index("v2"), net.terminals().d2), 0.0);
  for (std::size_t k = 0; k + 1 < c.layers.size(); ++k)
    for (std::size_t a = 0; a < c.layers[k].size(); ++a)
      for (std::size_t b = 0; b < c.layers[k + 1].size(); ++b)
        EXPECT_NEAR(c.hops[k](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)),
                    oracle::path_sum_gain(net, net.all(), c.layers[k][a], c.layers[k + 1][b]), 1e-12);
}

TEST(Condensed, RelayLayerOfTheTwoByTwoByTwoIsIdentity) {
  const auto net = oracle::fixture("222");
  const std::array<int, 1> key{2};
  const CondensedNetwork c = build_condensed(net, key);
  for (std::size_t k = 0; k < 2; ++k)
    for (std::size_t a = 0; a < c.layers[k].size(); ++a)
      for (std::size_t b = 0; b < c.layers[k + 1].size(); ++b)
        EXPECT_EQ(c.hops[k](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)),
                  net.gain(c.layers[k][a], c.layers[k + 1][b]));
}

TEST(Condensed, FirstSubCaseStructureFollowsReachability) {
  const auto net = oracle::fixture("c1b");
  for (int key = 2; key < net.layer_count(); ++key) {
    const std::array<int, 1> layers{key};
    const CondensedNetwork c = build_condensed(net, layers);
    for (std::size_t k = 0; k + 1 < c.layers.size(); ++k)
      for (std::size_t a = 0; a < c.layers[k].size(); ++a)
        for (std::size_t b = 0; b < c.layers[k + 1].size(); ++b)
          EXPECT_EQ(c.hops[k](static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) != 0.0,
                    reachable(net, c.layers[k][a], c.layers[k + 1][b]));
  }
}

TEST(Condensed, InvalidKeyLayersThrow) {
  const auto net = oracle::fixture("cond");
  EXPECT_THROW(build_condensed(net, std::array<int, 1>{1}), ValidationError);
  EXPECT_THROW(build_condensed(net, std::array<int, 1>{5}), ValidationError);
  EXPECT_THROW(build_condensed(net, std::array<int, 2>{3, 2}), ValidationError);
  EXPECT_THROW(build_condensed(net, std::array<int, 3>{2, 3, 4}), ValidationError);
}

TEST(Condensed, NoiseCovarianceIsPsdWithOwnNoise) {
  for (const auto& net : oracle::suite(60, 3300, 20, 0.6)) {
    if (net.layer_count() < 4) continue;
    const std::array<int, 2> keys{2, net.layer_count() - 1};
    const CondensedNetwork c = build_condensed(net, keys);
    const Eigen::MatrixXd cov = c.noise_covariance();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12 * std::max(1.0, cov.norm()));
    for (std::size_t k = 0; k < c.noisy.size(); ++k)
      if (!net.inputs(c.noisy[k]).empty()) EXPECT_GE(cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)), 1.0);
  }
}

TEST(Generic, DeterminantAndZeroTests) {
  const auto n222 = oracle::fixture("222");
  const auto& t = n222.terminals();
  EXPECT_TRUE(generically_nonzero(n222, transfer_determinant(t.s1, t.s2, n222.index("u1"), n222.index("u2"))));
  const auto par = oracle::fixture("par");
  EXPECT_FALSE(generically_nonzero(par, gain_expression(par.terminals().s1, par.terminals().d2)));
  const auto cond = oracle::fixture("cond");
  EXPECT_FALSE(generically_nonzero(cond, gain_expression(cond.index("v2"), cond.terminals().d2)));
}

TEST(Generic, DisjointPathsGiveInvertibleTransfers) {
  int checked = 0;
  for (const auto& net : oracle::suite(100, 6100, 20, 0.6)) {
    const auto& t = net.terminals();
    for (int layer = 2; layer < net.layer_count(); ++layer) {
      const auto nodes = net.layer_nodes(layer);
      for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b) {
          if (!oracle::disjoint_pair_exists(net, t.s1, nodes[a], t.s2, nodes[b], net.all())) continue;
          ++checked;
          EXPECT_TRUE(generically_nonzero(net, transfer_determinant(t.s1, t.s2, nodes[a], nodes[b])));
        }
    }
  }
  EXPECT_GT(checked, 50);
}
