#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tudof/network.hpp"
#include "tudof/scheme.hpp"

namespace tudof {

// Linear signal: symbol coefficients in units of sqrt(αP), plus coefficients on the
// unit-variance noises, indexed mode * |V| + node.
struct LinearSignal {
  Eigen::VectorXd symbols;
  Eigen::VectorXd noise;
};

struct ModeSignals {
  std::vector<LinearSignal> received;
  std::vector<LinearSignal> transmitted;
};

// Exact propagation of every mode; decode-forward relays are taken to decode correctly.
std::vector<ModeSignals> propagate(const LayeredNetwork& net, const Scheme& scheme);

struct ChannelReport {
  Delivery delivery;
  Pair message = Pair::first;
  double gain = 0.0;          // coefficient of the delivered symbol
  double interference = 0.0;  // squared norm of the other symbol coefficients
  double noise_variance = 0.0;

  double sinr(double alpha, double power) const;
  double rate(double alpha, double power) const;  // bits per channel use of the mode
};

struct TransferReport {
  std::vector<std::vector<NodeIndex>> rows;   // per mode, nodes with deliveries
  std::vector<Eigen::MatrixXd> transfer;      // per mode, rows × streams
  std::vector<ChannelReport> channels;
  double max_offdiag_ratio = 0.0;             // worst |off-diagonal| / ‖T_mode‖_F
  double min_diagonal = 0.0;
  double alpha = 0.0;                         // feasible source fraction, independent of P
  double p0 = 0.0;                            // all transmit powers ≤ P once P ≥ p0
  std::vector<std::string> problems;

  bool diagonal_ok() const { return max_offdiag_ratio <= 1e-8 && min_diagonal >= 1e-6; }
  bool passed() const { return problems.empty() && diagonal_ok(); }
  double rate(Pair p, int modes, double power) const;
  double sum_rate(int modes, double power) const { return rate(Pair::first, modes, power) + rate(Pair::second, modes, power); }
};

TransferReport verify_scheme(const LayeredNetwork& net, const Scheme& scheme);

}  // namespace tudof
