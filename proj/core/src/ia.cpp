#include "tudof/ia.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tudof/engine.hpp"
#include "tudof/errors.hpp"

namespace tudof {

long IaParameters::halfwidth(double power) const {
  return static_cast<long>(std::floor(gamma * std::pow(power, halfwidth_exponent())));
}

double IaParameters::amplitude(double power) const { return beta * std::pow(power, power_exponent()); }

bool near_rational(double t, int max_den, double tol) {
  for (int q = 1; q <= max_den; ++q) {
    const double scaled = t * q;
    if (std::abs(scaled - std::round(scaled)) < tol * q) return true;
  }
  return false;
}

namespace {

using Eigen::Vector3d;

double pick_free_ratio() {
  for (int k = 2;; ++k) {
    const double r = std::sqrt(static_cast<double>(k));
    if (r != std::floor(r) && !near_rational(r)) return r;
  }
}

Lattice lattice(NodeIndex node, const Vector3d& c0, int s0, const Vector3d& c1, int s1) {
  Lattice l;
  l.node = node;
  l.combos = {c0, c1};
  l.span = {s0, s1};
  return l;
}

// Least-squares fit of the propagated coefficients onto the two combinations.
void fit(Lattice& l, const Eigen::VectorXd& received) {
  Eigen::Matrix<double, 3, 2> basis;
  basis.col(0) = l.combos[0];
  basis.col(1) = l.combos[1];
  const Vector3d target = received.head<3>();
  const Eigen::Vector2d c = basis.colPivHouseholderQr().solve(target);
  l.coef = {c(0), c(1)};
  const double scale = std::max(target.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  l.residual = (basis * c - target).cwiseAbs().maxCoeff() / scale;
}

Scheme build_scheme(const CondensedNetwork& cond, const IaParameters& p) {
  const LayeredNetwork& net = cond.origin;
  const auto& t = net.terminals();
  Scheme s(net.size(), 1);
  s.construction = p.ia_case == 1 ? "ia_case1" : "ia_case2";
  std::array<int, 3> id{};
  for (std::size_t k = 0; k < 3; ++k) id[k] = s.add_stream(p.symbols[k], p.owners[k]);
  const auto weights = [&](const Eigen::RowVector3d& row, double factor) {
    std::vector<StreamWeight> w;
    for (int k = 0; k < 3; ++k)
      if (row(k) != 0.0) w.push_back({id[static_cast<std::size_t>(k)], factor * row(k)});
    return w;
  };
  s.at(0, t.s1) = {ProgramKind::ia_encode, 1.0, 0.0, 0, weights(p.source.row(0), 1.0)};
  s.at(0, t.s2) = {ProgramKind::ia_encode, 1.0, 0.0, 0, weights(p.source.row(1), 1.0)};
  const int key = net.layer(p.roles.u2);
  for (NodeIndex v : cond.active.to_vector()) {
    if (net.is_terminal(v) || net.layer(v) == key) continue;
    s.at(0, v) = RelayProgram::forward(1.0);
  }
  s.at(0, p.roles.u1) = RelayProgram::forward(p.alpha_relay * p.u1_scale);
  s.at(0, p.roles.u3) = RelayProgram::forward(p.alpha_relay * p.u3_scale);
  s.at(0, p.roles.u2) = {ProgramKind::ia_decode_forward, 1.0, 0.0, 0, weights(p.u2_forward, p.alpha_relay)};
  for (int k = 0; k < 3; ++k) s.deliveries.push_back({net.destination(p.owners[static_cast<std::size_t>(k)]), 0, id[static_cast<std::size_t>(k)]});
  s.predicted = p.full == Pair::first ? std::pair{Dof{1, 1}, Dof{1, 2}} : std::pair{Dof{1, 2}, Dof{1, 1}};
  return s;
}

// Largest Σ|symbol coefficient| over transmitters before (pre) and from (post) the key layer.
std::pair<double, double> peak_sums(const CondensedNetwork& cond, const IaParameters& p, const ModeSignals& m) {
  const LayeredNetwork& net = cond.origin;
  const int key = net.layer(p.roles.u2);
  double pre = 0.0, post = 0.0;
  for (std::size_t v = 0; v < net.size(); ++v) {
    double& slot = net.layer(static_cast<NodeIndex>(v)) < key ? pre : post;
    slot = std::max(slot, m.transmitted[v].symbols.cwiseAbs().sum());
  }
  return {pre, post};
}

}  // namespace

IaParameters synth_ia(const CondensedNetwork& cond, const IaRoles& roles, Pair full, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie in (0, 1)");
  if (cond.hops.size() != 2 || cond.layers[1].size() != 3)
    throw ValidationError("alignment needs one key layer of three nodes");
  const LayeredNetwork& net = cond.origin;
  const auto& t = net.terminals();
  const auto h = [&](NodeIndex a, NodeIndex b) { return cond.gain(a, b); };
  const NodeIndex u1 = roles.u1, u2 = roles.u2, u3 = roles.u3;
  if (h(t.s1, u3) != 0.0 || h(u1, t.d2) != 0.0)
    throw ValidationError("zero pattern incompatible with alignment: s1 reaches u3 or u1 reaches d2");
  const bool case1 = h(u3, t.d1) != 0.0 && h(t.s2, u1) == 0.0;
  const bool case2 = h(t.s2, u1) != 0.0 && h(u3, t.d1) == 0.0;
  if (full == Pair::first ? !case1 : !case2)
    throw ValidationError("zero pattern incompatible with the requested extreme point");

  IaParameters p;
  p.epsilon = epsilon;
  p.full = full;
  p.roles = roles;
  if (case1 && full == Pair::first) {
    p.ia_case = 1;
    p.symbols = {"a1", "a2", "b"};
    p.owners = {Pair::first, Pair::first, Pair::second};
    p.irrational_t = pick_free_ratio();
    p.source << 1.0, p.irrational_t, 0.0, 0.0, 0.0, h(t.s1, u2) / h(t.s2, u2);
    p.u1_scale = 1.0;
    p.u3_scale = -h(t.s2, u2) / (h(t.s2, u3) * h(t.s1, u2)) * h(t.s1, u1) * h(u1, t.d1) / h(u3, t.d1);
    const double k = h(t.s1, u1) * h(u1, t.d1) / h(u2, t.d1);
    p.u2_forward << k, 0.0, k;
    p.t2 = -h(u2, t.d1) * h(u3, t.d2) / (h(u2, t.d2) * h(u3, t.d1));
    p.t2_guard_ok = !near_rational(p.t2);
    p.at_u2 = lattice(u2, {1, 0, 1}, 2, {0, 1, 0}, 1);
    p.at_destination[0] = lattice(t.d1, {1, 0, 0}, 1, {0, 1, 0}, 1);
    p.at_destination[1] = lattice(t.d2, {1, 0, 1}, 2, {0, 0, 1}, 1);
  } else {
    p.ia_case = 2;
    p.symbols = {"a", "b1", "b2"};
    p.owners = {Pair::first, Pair::second, Pair::second};
    p.irrational_t = h(t.s2, u2) * h(t.s1, u1) / (h(t.s1, u2) * h(t.s2, u1));
    p.source << 1.0, 0.0, 0.0, 0.0, h(t.s1, u1) / h(t.s2, u1), h(t.s1, u2) / h(t.s2, u2);
    p.u1_scale = h(u2, t.d1) / (h(t.s1, u1) * h(u1, t.d1));
    p.u3_scale = -h(t.s2, u1) * h(u2, t.d2) / (h(t.s1, u1) * h(t.s2, u3) * h(u3, t.d2));
    p.u2_forward << 0.0, -1.0, 0.0;
    p.at_u2 = lattice(u2, {0, 1, 0}, 1, {1, 0, 1}, 2);
    p.at_destination[0] = lattice(t.d1, {1, 0, 0}, 1, {0, 0, 1}, 1);
    p.at_destination[1] = lattice(t.d2, {0, 1, 0}, 1, {0, 0, 1}, 1);
  }
  p.t_guard_ok = !near_rational(p.irrational_t);

  // β and α from peak amplitudes G·M·Σ|coef| ≤ sqrt(P/2); noise takes the other half above p0.
  p.alpha_relay = 1.0;
  auto signals = propagate(net, build_scheme(cond, p)).front();
  const auto [pre, post_unit] = peak_sums(cond, p, signals);
  p.beta = 1.0 / (std::sqrt(2.0) * p.gamma * pre);
  p.alpha_relay = std::min(1.0, 1.0 / (std::sqrt(2.0) * p.beta * p.gamma * post_unit));
  signals = propagate(net, build_scheme(cond, p)).front();

  fit(p.at_u2, signals.received[static_cast<std::size_t>(u2)].symbols);
  fit(p.at_destination[0], signals.received[static_cast<std::size_t>(t.d1)].symbols);
  fit(p.at_destination[1], signals.received[static_cast<std::size_t>(t.d2)].symbols);
  for (std::size_t v = 0; v < net.size(); ++v) p.p0 = std::max(p.p0, 2.0 * signals.transmitted[v].noise.squaredNorm());
  return p;
}

Scheme ia_scheme(const CondensedNetwork& cond, const IaParameters& params) { return build_scheme(cond, params); }

IaDesign synth_ia(const LayeredNetwork& net, const C1Witness& w, double epsilon) {
  if (!w.certified) throw ValidationError("witness fails the structural properties");
  const LayeredNetwork g = w.swapped ? swap_pairs(net) : net;
  const int key = g.layer(w.v2);
  const auto on = [&](const Path& p) {
    if (auto v = p.at_layer(g, key)) return *v;
    throw InvariantViolation("path misses the alignment layer");
  };
  NodeSet active = w.p11.mask() | w.p22.mask();
  active |= slice(g, w.feeder, w.vm, w.v1).mask();
  const IaRoles roles{on(w.p11), w.v2, on(w.p22)};
  const std::array<int, 1> layers{key};
  CondensedNetwork cond = build_condensed(g, layers, active);
  const auto& t = g.terminals();
  const Pair full = cond.gain(roles.u3, t.d1) != 0.0 ? Pair::first : Pair::second;
  IaParameters p = synth_ia(cond, roles, full, epsilon);
  Scheme s = build_scheme(cond, p);
  if (w.swapped) {
    s = relabel_pairs(std::move(s));
    p.full = other(p.full);
    for (auto& o : p.owners) o = other(o);
    std::swap(p.at_destination[0], p.at_destination[1]);
  }
  return {std::move(p), std::move(s), std::move(cond)};
}

LatticePoint hard_decode(const Lattice& l, double received, double gain, long halfwidth) {
  const double y = received / gain;
  const long r0 = l.span[0] * halfwidth, r1 = l.span[1] * halfwidth;
  const bool outer_first = r1 <= r0;
  const long outer = outer_first ? r1 : r0, inner = outer_first ? r0 : r1;
  const double c_out = outer_first ? l.coef[1] : l.coef[0], c_in = outer_first ? l.coef[0] : l.coef[1];
  LatticePoint best;
  double best_err = std::numeric_limits<double>::infinity();
  for (long a = -outer; a <= outer; ++a) {
    const long centre = std::clamp(std::lround((y - c_out * static_cast<double>(a)) / c_in), -inner, inner);
    for (long b = std::max(-inner, centre - 1); b <= std::min(inner, centre + 1); ++b) {
      const double err = std::abs(y - c_out * static_cast<double>(a) - c_in * static_cast<double>(b));
      if (err < best_err) {
        best_err = err;
        best = outer_first ? LatticePoint{b, a} : LatticePoint{a, b};
      }
    }
  }
  return best;
}

double lattice_dmin(const Lattice& l, double gain, long halfwidth) {
  const long r0 = 2 * l.span[0] * halfwidth, r1 = 2 * l.span[1] * halfwidth;
  double best = r0 > 0 ? std::abs(l.coef[0]) : std::numeric_limits<double>::infinity();
  for (long d1 = 1; d1 <= r1; ++d1) {
    const long centre = std::clamp(std::lround(-l.coef[1] * static_cast<double>(d1) / l.coef[0]), -r0, r0);
    for (long d0 = std::max(-r0, centre - 1); d0 <= std::min(r0, centre + 1); ++d0)
      best = std::min(best, std::abs(l.coef[0] * static_cast<double>(d0) + l.coef[1] * static_cast<double>(d1)));
  }
  return gain * best;
}

namespace {

double log_slope(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

IaReport verify_ia(const IaDesign& design, std::span<const double> powers) {
  const IaParameters& p = design.params;
  const LayeredNetwork& net = design.cond.origin;
  const auto signals = propagate(net, design.scheme).front();
  const auto received = [&](NodeIndex v) { return signals.received[static_cast<std::size_t>(v)].symbols; };
  IaReport r;

  const Eigen::VectorXd u2 = received(p.roles.u2);
  r.u2_alignment = std::abs(u2(0) - u2(2)) / u2.cwiseAbs().maxCoeff();
  const Eigen::VectorXd d1 = received(net.terminals().d1);
  r.leak = std::abs(d1(p.ia_case == 1 ? 2 : 1)) / d1.cwiseAbs().maxCoeff();

  std::array<Lattice, 3> lattices{p.at_u2, p.at_destination[0], p.at_destination[1]};
  for (auto& l : lattices) {
    Lattice refit = l;
    fit(refit, received(l.node));
    r.max_residual = std::max(r.max_residual, refit.residual);
  }

  r.powers.assign(powers.begin(), powers.end());
  for (double power : powers) {
    const long m = p.halfwidth(power);
    const double g = p.amplitude(power);
    for (std::size_t k = 0; k < 3; ++k) r.dmin[k].push_back(lattice_dmin(lattices[k], g, m));
    if (power < p.p0) continue;
    for (const auto& tx : signals.transmitted) {
      const double peak = g * static_cast<double>(m) * tx.symbols.cwiseAbs().sum();
      const double ratio = (peak * peak + tx.noise.squaredNorm()) / power;
      r.worst_power_ratio = std::max(r.worst_power_ratio, ratio);
      if (ratio > 1.0) r.power_ok = false;
    }
  }
  if (powers.size() >= 2)
    for (std::size_t k = 0; k < 3; ++k) r.dmin_slope[k] = log_slope(powers, r.dmin[k]);
  return r;
}

}  // namespace tudof
