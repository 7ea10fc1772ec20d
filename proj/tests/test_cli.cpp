#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "oracles.hpp"
#include "tudof/network_io.hpp"
#include "tudof/simulator.hpp"

namespace fs = std::filesystem;
using tudof::cli::ExitCode;

namespace {

struct Outcome {
  int code;
  std::string out, err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = tudof::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return oracle::data_path(std::string(name) + ".net"); }

bool has(const std::string& text, const std::string& line) { return ("\n" + text).find("\n" + line + "\n") != std::string::npos; }

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("tudof_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                                 ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string file(const char* name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Cli, ValidateReportsShape) {
  const Outcome o = call({"validate", data("ex1")});
  EXPECT_EQ(o.code, ExitCode::ok);
  EXPECT_TRUE(has(o.out, "valid=1")) << o.out;
}

TEST(Cli, ValidateRejectsGarbage) {
  TempDir dir;
  std::ofstream(dir.file("bad.net")) << "layers 2\nnonsense here\n";
  const Outcome o = call({"validate", dir.file("bad.net")});
  EXPECT_EQ(o.code, ExitCode::usage_or_input);
  EXPECT_NE(o.err.find("unknown keyword"), std::string::npos) << o.err;
}

TEST(Cli, ClassifyPrintsCaseAndWitness) {
  const Outcome o = call({"classify", data("bottle")});
  EXPECT_EQ(o.code, ExitCode::ok);
  EXPECT_TRUE(has(o.out, "case=A"));
  EXPECT_TRUE(has(o.out, "sum_dof=1"));
  EXPECT_TRUE(has(o.out, "witness_kind=cut_node"));
  const Outcome c = call({"classify", data("c2")});
  EXPECT_TRUE(has(c.out, "sum_dof=3/2"));
}

TEST(Cli, RegionOfFirstSubCase) {
  const Outcome o = call({"region", data("c1")});
  EXPECT_EQ(o.code, ExitCode::ok);
  EXPECT_TRUE(has(o.out, "region=III"));
  EXPECT_NE(o.out.find("(1,0.5),(0.5,1)"), std::string::npos);
  EXPECT_TRUE(has(o.out, "max_sum=1.5"));
}

TEST(Cli, SynthWritesAReadableScheme) {
  TempDir dir;
  const Outcome o = call({"synth", data("cond"), "--out", dir.file("cond.scheme")});
  EXPECT_EQ(o.code, ExitCode::ok) << o.err;
  EXPECT_TRUE(has(o.out, "construction=af_single_key"));
  EXPECT_TRUE(has(o.out, "verified=1"));
  const Outcome sim = call({"simulate", data("cond"), "--scheme", dir.file("cond.scheme"), "--samples", "2000", "--format", "kv"});
  EXPECT_EQ(sim.code, ExitCode::ok) << sim.err;
}

TEST(Cli, SynthDirectiveExitsWithVerificationCode) {
  const Outcome o = call({"synth", data("222")});
  EXPECT_EQ(o.code, ExitCode::verification_failed);
  EXPECT_NE(o.out.find("directive="), std::string::npos);
}

TEST(Cli, SynthAlignment) {
  const Outcome o = call({"synth", data("c1b"), "--ia", "--eps", "0.1"});
  EXPECT_EQ(o.code, ExitCode::ok) << o.err;
}

TEST(Cli, SimulateCsvHeader) {
  TempDir dir;
  const Outcome o = call({"simulate", data("par"), "--samples", "2000", "--format", "csv", "--out", dir.file("r.csv")});
  EXPECT_EQ(o.code, ExitCode::ok) << o.err;
  EXPECT_EQ(slurp(dir.file("r.csv")).rfind(tudof::kCsvHeader, 0), 0u);
}

TEST(Cli, SimulateAlignmentErrors) {
  const Outcome o = call({"simulate", data("c1b"), "--ia", "--eps", "0.25", "--samples", "500", "--p-grid", "1e6,1e8,1e10"});
  EXPECT_EQ(o.code, ExitCode::ok) << o.err;
  EXPECT_EQ(o.out.rfind("P,err_u2,err_d1,err_d2,dmin_u2,dmin_d1,dmin_d2", 0), 0u);
}

TEST(Cli, EstimateDofSlope) {
  const Outcome o = call({"estimate-dof", data("par"), "--p-grid", "1e6,1e8,1e10", "--format", "kv"});
  EXPECT_EQ(o.code, ExitCode::ok) << o.err;
  const auto at = o.out.find("slope=");
  ASSERT_NE(at, std::string::npos);
  EXPECT_NEAR(std::stod(o.out.substr(at + 6)), 2.0, 0.01);
}

TEST(Cli, EstimateDofRejectsShortGrid) {
  EXPECT_EQ(call({"estimate-dof", data("par"), "--p-grid", "1e6,1e8"}).code, ExitCode::usage_or_input);
}

TEST(Cli, OracleCheckAgrees) {
  const Outcome o = call({"oracle-check", "--count", "20", "--seed", "5", "--max-nodes", "11"});
  EXPECT_EQ(o.code, ExitCode::ok) << o.out << o.err;
  const Outcome f = call({"oracle-check", data("c1"), data("butterfly")});
  EXPECT_EQ(f.code, ExitCode::ok) << f.out;
}

TEST(Cli, OracleCheckSkipsNetworksBeyondTheExhaustiveLimit) {
  TempDir dir;
  tudof::RandomNetworkConfig cfg;
  cfg.min_layers = cfg.max_layers = 6;
  cfg.max_width = 4;
  std::string big;
  for (std::uint64_t s = 0; big.empty(); ++s) {
    const auto net = tudof::random_network(cfg, s);
    if (net.size() > 14) big = tudof::serialize_network(net);
  }
  std::ofstream(dir.file("big.net")) << big;
  const Outcome o = call({"oracle-check", dir.file("big.net")});
  EXPECT_EQ(o.code, ExitCode::ok);
  EXPECT_TRUE(has(o.out, "checked=0"));
}

TEST(Cli, RandgenRoundTrips) {
  TempDir dir;
  const Outcome o = call({"randgen", "--seed", "9", "--min-layers", "4", "--max-layers", "5", "--out", dir.file("g.net")});
  EXPECT_EQ(o.code, ExitCode::ok) << o.err;
  const auto net = tudof::read_network_file(dir.file("g.net"));
  const std::string text = tudof::serialize_network(net);
  EXPECT_EQ(tudof::serialize_network(tudof::network_from_text(text)), text);
  EXPECT_GE(net.layer_count(), 4);
  EXPECT_LE(net.layer_count(), 5);
  EXPECT_EQ(call({"randgen", "--seed", "9", "--min-layers", "4", "--max-layers", "5"}).out, slurp(dir.file("g.net")));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, ExitCode::usage_or_input);
  EXPECT_EQ(call({"classify"}).code, ExitCode::usage_or_input);
  EXPECT_EQ(call({"classify", data("par"), "--bogus"}).code, ExitCode::usage_or_input);
  EXPECT_EQ(call({"classify", "/nonexistent/file.net"}).code, ExitCode::usage_or_input);
  EXPECT_EQ(call({"--help"}).code, ExitCode::ok);
}
