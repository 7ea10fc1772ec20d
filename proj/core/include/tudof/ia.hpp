#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

#include "tudof/classifier.hpp"
#include "tudof/condense.hpp"
#include "tudof/scheme.hpp"

namespace tudof {

// Key-layer roles of the condensed C1 network: u1 on p11, u2 = v2, u3 on p22.
struct IaRoles {
  NodeIndex u1 = 0, u2 = 0, u3 = 0;
};

// Reception = G · (coef[0] · x0 + coef[1] · x1) + noise, with x_k = combos[k] · symbols
// ranging over span[k] · [−M, M].
struct Lattice {
  NodeIndex node = 0;
  std::array<Eigen::Vector3d, 2> combos{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
  std::array<int, 2> span{1, 1};
  std::array<double, 2> coef{0.0, 0.0};
  double residual = 0.0;  // relative misfit of the propagated coefficients
};

struct LatticePoint {
  long x0 = 0, x1 = 0;
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct IaParameters {
  int ia_case = 1;
  Pair full = Pair::first;  // the pair whose message is split, reaching DoF 1
  double epsilon = 0.1;
  double gamma = 1.0;
  double beta = 1.0;
  double alpha_relay = 1.0;
  double irrational_t = 0.0;
  double t2 = 0.0;  // case 1 only
  bool t_guard_ok = true;
  bool t2_guard_ok = true;
  IaRoles roles;
  std::array<std::string, 3> symbols;
  std::array<Pair, 3> owners{};
  Eigen::Matrix<double, 2, 3> source = Eigen::Matrix<double, 2, 3>::Zero();  // units of G
  double u1_scale = 1.0, u3_scale = 1.0;                                     // relays send α · scale · Y
  Eigen::RowVector3d u2_forward = Eigen::RowVector3d::Zero();               // u2 sends α · G · (u2_forward · x̂)
  Lattice at_u2;
  std::array<Lattice, 2> at_destination;  // indexed by pair
  double p0 = 0.0;

  double halfwidth_exponent() const { return (1.0 - epsilon) / (2.0 * (2.0 + epsilon)); }
  double power_exponent() const { return (1.0 + 2.0 * epsilon) / (2.0 * (2.0 + epsilon)); }
  double per_message_dof() const { return (1.0 - epsilon) / (2.0 + epsilon); }
  long halfwidth(double power) const;    // M = ⌊γ P^e⌋
  double amplitude(double power) const;  // G = β P^e
};

// True when |t − p/q| < tol for some q ≤ max_den.
bool near_rational(double t, int max_den = 1000, double tol = 1e-6);

// Case 1 needs ĥ(u3,d1) ≠ 0 = ĥ(s2,u1) and gives (1, 1/2); case 2 the reverse and gives (1/2, 1).
// Both need ĥ(s1,u3) = ĥ(u1,d2) = 0. Throws ValidationError when the zero pattern does not fit `full`.
IaParameters synth_ia(const CondensedNetwork& cond, const IaRoles& roles, Pair full, double epsilon = 0.1);

// One-mode scheme on cond.origin; every symbol is delivered to its owner's destination.
Scheme ia_scheme(const CondensedNetwork& cond, const IaParameters& params);

struct IaDesign {
  IaParameters params;
  Scheme scheme;
  CondensedNetwork cond;
};

// Real-alignment point complementary to the two-mode scheme of a certified C1 witness,
// expressed for `net` (pairs exchanged back when the witness is swapped).
IaDesign synth_ia(const LayeredNetwork& net, const C1Witness& w, double epsilon = 0.1);

LatticePoint hard_decode(const Lattice& l, double received, double gain, long halfwidth);
// Smallest distance between distinct noise-free receptions.
double lattice_dmin(const Lattice& l, double gain, long halfwidth);

struct IaReport {
  double u2_alignment = 0.0;   // relative mismatch of the aligned coefficients at u2
  double leak = 0.0;           // relative coefficient of the cancelled symbol at the full pair's destination
  double max_residual = 0.0;   // worst lattice fit
  std::vector<double> powers;
  std::array<std::vector<double>, 3> dmin;  // u2, d1, d2
  std::array<double, 3> dmin_slope{};       // d log dmin / d log P
  bool power_ok = true;                     // all transmitters within P for every P ≥ p0 of the grid
  double worst_power_ratio = 0.0;

  bool aligned() const { return u2_alignment <= 1e-12 && leak <= 1e-12 && max_residual <= 1e-12; }
};

IaReport verify_ia(const IaDesign& design, std::span<const double> powers);

}  // namespace tudof
