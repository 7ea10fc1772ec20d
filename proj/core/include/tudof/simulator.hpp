#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "tudof/engine.hpp"
#include "tudof/ia.hpp"
#include "tudof/scheme.hpp"

namespace tudof {

struct SimConfig {
  double power = 1e6;
  std::size_t n_symbols = 100000;
  std::uint64_t seed = 1;
  std::vector<double> p_grid{1e4, 1e6, 1e8, 1e10};
  double noise_scale = 1.0;  // 0 gives noiseless runs

  // Throws ValidationError for P ≤ 0 or a grid that is not strictly increasing with ≥ 3 points.
  void validate() const;
};

// Standard normal draw for one (stream, slot, trial) counter; identical keys give identical values.
double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t slot, std::uint64_t trial);
std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t slot, std::uint64_t trial);

// Compensated running sum.
class KahanSum {
 public:
  void add(double x) {
    const double y = x - carry_;
    const double t = total_ + y;
    carry_ = (t - total_) - y;
    total_ = t;
  }
  double value() const { return total_; }

 private:
  double total_ = 0.0, carry_ = 0.0;
};

struct ChannelEstimate {
  Delivery delivery;
  double analytic_sinr = 0.0;
  double empirical_sinr = 0.0;
};

struct SimResult {
  int mode_count = 1;
  std::array<double, 2> rates{};            // analytic, bits per channel use at cfg.power
  std::array<double, 2> empirical_rates{};  // from sampled SINR estimates
  std::vector<ChannelEstimate> channels;
  std::vector<double> powers, r1, r2, sum;
  double dof_slope = 0.0;
  double residual = 0.0;  // RMS misfit of the slope line, bits
};

// Throws ValidationError when the scheme fails verification.
SimResult simulate_rates(const LayeredNetwork& net, const Scheme& scheme, const SimConfig& cfg);
// Least-squares slope of the analytic sum rate against ½ log2 P over cfg.p_grid.
SimResult estimate_dof(const LayeredNetwork& net, const Scheme& scheme, const SimConfig& cfg);

inline constexpr const char* kCsvHeader = "P,R1,R2,sum,mode_count,slope,residual";
std::string rates_csv(const SimResult& result);
std::string rates_kv(const SimResult& result);

struct IaErrorReport {
  std::vector<double> powers;
  std::array<std::vector<double>, 3> error_rate;  // u2, d1, d2
  std::array<std::vector<double>, 3> dmin;
  bool monotone = true;                           // error rates never increase along the grid
};

// Hard decoding at u2 and both destinations over uniform codebook symbols, cfg.n_symbols trials per power.
IaErrorReport ia_symbol_error(const IaDesign& design, const SimConfig& cfg);

}  // namespace tudof
