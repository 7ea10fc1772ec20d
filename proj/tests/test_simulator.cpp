#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "tudof/af.hpp"
#include "tudof/errors.hpp"
#include "tudof/simulator.hpp"

using namespace tudof;

namespace {

Scheme scheme_for(const LayeredNetwork& net) {
  const Synthesis syn = synthesize(net, classify_sum_dof(net));
  if (!syn.scheme) throw std::runtime_error("no scheme");
  return *syn.scheme;
}

IaDesign design_for(const std::string& name, double epsilon) {
  const auto net = oracle::fixture(name);
  return synth_ia(net, std::get<C1Witness>(classify_sum_dof(net).witness), epsilon);
}

}  // namespace

TEST(Randomness, CounterNormalIsDeterministicAndStandard) {
  EXPECT_EQ(counter_normal(7, 1, 2, 3), counter_normal(7, 1, 2, 3));
  EXPECT_NE(counter_normal(7, 1, 2, 3), counter_normal(8, 1, 2, 3));
  EXPECT_NE(counter_bits(7, 1, 2, 3), counter_bits(7, 2, 2, 3));
  KahanSum mean, square;
  constexpr int n = 200000;
  for (int k = 0; k < n; ++k) {
    const double z = counter_normal(11, 1, 0, static_cast<std::uint64_t>(k));
    mean.add(z);
    square.add(z * z);
  }
  EXPECT_NEAR(mean.value() / n, 0.0, 0.01);
  EXPECT_NEAR(square.value() / n, 1.0, 0.01);
}

TEST(Randomness, KahanSumBeatsNaiveSummation) {
  KahanSum k;
  double naive = 0.0;
  for (int i = 0; i < 10000000; ++i) {
    k.add(0.1);
    naive += 0.1;
  }
  EXPECT_LT(std::abs(k.value() - 1e6), 1e-6);
  EXPECT_GT(std::abs(naive - 1e6), std::abs(k.value() - 1e6));
}

TEST(Config, RejectsBadPowerAndGrids) {
  SimConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.power = 0.0;
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg = SimConfig{};
  cfg.p_grid = {1e4, 1e6};
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg.p_grid = {1e4, 1e6, 1e6};
  EXPECT_THROW(cfg.validate(), ValidationError);
  cfg.p_grid = {-1.0, 1e6, 1e8};
  EXPECT_THROW(cfg.validate(), ValidationError);
}

TEST(Rates, ParallelSampledSinrMatchesAnalytic) {
  const auto net = oracle::fixture("par");
  SimConfig cfg;
  const SimResult r = simulate_rates(net, scheme_for(net), cfg);
  ASSERT_EQ(r.channels.size(), 2u);
  for (const auto& c : r.channels) EXPECT_NEAR(c.empirical_sinr / c.analytic_sinr, 1.0, 0.02);
  for (int p = 0; p < 2; ++p) EXPECT_NEAR(r.empirical_rates[p], r.rates[p], 0.02 * r.rates[p]);
  const TransferReport rep = verify_scheme(net, scheme_for(net));
  EXPECT_NEAR(r.rates[0], rep.rate(Pair::first, 1, cfg.power), 1e-12);
}

TEST(Rates, TwoModeSampledSinrMatchesAnalytic) {
  for (const char* name : {"c1", "c2"}) {
    const auto net = oracle::fixture(name);
    SimConfig cfg;
    cfg.n_symbols = 50000;
    const SimResult r = simulate_rates(net, scheme_for(net), cfg);
    EXPECT_EQ(r.mode_count, 2);
    for (const auto& c : r.channels) EXPECT_NEAR(c.empirical_sinr / c.analytic_sinr, 1.0, 0.03) << name;
  }
}

TEST(Rates, SameSeedSameSamples) {
  const auto net = oracle::fixture("cond");
  SimConfig cfg;
  cfg.n_symbols = 5000;
  const Scheme s = scheme_for(net);
  const SimResult a = simulate_rates(net, s, cfg), b = simulate_rates(net, s, cfg);
  EXPECT_EQ(a.empirical_rates, b.empirical_rates);
  cfg.seed = 2;
  EXPECT_NE(simulate_rates(net, s, cfg).empirical_rates, a.empirical_rates);
}

TEST(Rates, UnverifiedSchemeIsRefused) {
  const auto net = oracle::fixture("par");
  Scheme s = scheme_for(net);
  for (auto& p : s.programs[0])
    if (p.kind == ProgramKind::scale_forward) p.x = 0.0;
  EXPECT_THROW(simulate_rates(net, s, SimConfig{}), ValidationError);
}

TEST(Slopes, MatchSumDofPerCase) {
  const std::vector<std::pair<std::string, double>> cases{
      {"par", 2.0}, {"cond", 2.0}, {"butterfly", 2.0}, {"grail", 2.0}, {"bottle", 1.0}, {"z", 1.0}, {"c1", 1.5}, {"c2", 1.5}};
  for (const auto& [name, dof] : cases) {
    const auto net = oracle::fixture(name);
    SimConfig cfg;
    cfg.p_grid = {1e6, 1e8, 1e10, 1e12};
    const SimResult r = estimate_dof(net, scheme_for(net), cfg);
    EXPECT_NEAR(r.dof_slope, dof, dof == 1.5 ? 0.05 : 0.1) << name;
    EXPECT_EQ(r.powers, cfg.p_grid);
  }
}

TEST(Slopes, SlopeMatchesOracleRegression) {
  const auto net = oracle::fixture("cond");
  SimConfig cfg;
  const SimResult r = estimate_dof(net, scheme_for(net), cfg);
  const std::size_t n = r.powers.size();
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += 0.5 * std::log2(r.powers[k]) / n;
    my += r.sum[k] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = 0.5 * std::log2(r.powers[k]) - mx;
    sxy += dx * (r.sum[k] - my);
    sxx += dx * dx;
  }
  EXPECT_NEAR(r.dof_slope, sxy / sxx, 1e-12);
  for (std::size_t k = 0; k < n; ++k) EXPECT_NEAR(r.sum[k], r.r1[k] + r.r2[k], 1e-12);
}

TEST(Output, CsvHasHeaderAndOneRowPerPower) {
  const auto net = oracle::fixture("par");
  const SimResult r = estimate_dof(net, scheme_for(net), SimConfig{});
  std::istringstream in(rates_csv(r));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  EXPECT_EQ(rows, 4);
  EXPECT_NE(rates_kv(r).find("slope="), std::string::npos);
}

TEST(AlignmentErrors, NoiselessRunsDecodePerfectly) {
  for (const char* name : {"c1", "c1b"}) {
    SimConfig cfg;
    cfg.noise_scale = 0.0;
    cfg.n_symbols = 2000;
    cfg.p_grid = {1e6, 1e8, 1e10};
    const IaErrorReport r = ia_symbol_error(design_for(name, 0.1), cfg);
    for (const auto& rates : r.error_rate)
      for (double e : rates) EXPECT_EQ(e, 0.0) << name;
  }
}

TEST(AlignmentErrors, SecondCaseDecodesAtHighPower) {
  SimConfig cfg;
  cfg.n_symbols = 10000;
  cfg.p_grid = {1e8, 1e10, 1e12};
  const IaErrorReport r = ia_symbol_error(design_for("c1b", 0.25), cfg);
  for (int k = 0; k < 3; ++k) EXPECT_LT(r.error_rate[k].back(), 1e-2) << k;
}

TEST(AlignmentErrors, OversizedLatticeIsRefused) {
  SimConfig cfg;
  cfg.n_symbols = 10;
  cfg.p_grid = {1e30, 1e40, 1e50};
  EXPECT_THROW(ia_symbol_error(design_for("c1b", 0.25), cfg), std::exception);
}

TEST(AlignmentDistance, DoublingPowerGrowsAtMostLikeTheAmplitude) {
  for (const char* name : {"c1", "c1b"}) {
    const IaDesign d = design_for(name, 0.1);
    const double amplitude_ratio = std::pow(2.0, d.params.power_exponent());
    for (double p : {1e6, 1e8, 1e10, 1e12}) {
      const std::vector<double> grid{p, 2 * p};
      const IaReport r = verify_ia(d, grid);
      for (int k = 0; k < 3; ++k) {
        EXPECT_GT(r.dmin[k][0], 0.0);
        EXPECT_LE(r.dmin[k][1] / r.dmin[k][0], amplitude_ratio * (1 + 1e-9)) << name << " " << p << " " << k;
      }
    }
    const std::vector<double> low{1e6, 2e6};
    const IaReport r = verify_ia(d, low);
    EXPECT_NEAR(r.dmin[0][1] / r.dmin[0][0], amplitude_ratio, 1e-9) << name;
  }
}
