#include "tudof/simulator.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tudof/errors.hpp"
#include "tudof/network_io.hpp"

namespace tudof {

void SimConfig::validate() const {
  if (!(power > 0.0)) throw ValidationError("P must be positive");
  if (p_grid.size() < 3) throw ValidationError("the P grid needs at least 3 points");
  for (std::size_t k = 0; k < p_grid.size(); ++k) {
    if (!(p_grid[k] > 0.0)) throw ValidationError("grid powers must be positive");
    if (k > 0 && !(p_grid[k] > p_grid[k - 1])) throw ValidationError("the P grid must be strictly increasing");
  }
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double unit_open(std::uint64_t bits) { return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53; }

}  // namespace

std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t stream, std::uint64_t slot, std::uint64_t trial) {
  return splitmix(splitmix(splitmix(splitmix(seed) ^ stream) ^ slot) ^ trial);
}

double counter_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t slot, std::uint64_t trial) {
  const std::uint64_t bits = counter_bits(seed, stream, slot, trial);
  const double u1 = unit_open(bits), u2 = unit_open(splitmix(bits));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

constexpr std::uint64_t kSymbolStream = 1;
constexpr std::uint64_t kNoiseStream = 2;

double rate_of(double sinr) { return 0.5 * std::log2(1.0 + sinr); }

std::array<double, 2> analytic_rates(const TransferReport& report, int modes, double power) {
  return {report.rate(Pair::first, modes, power), report.rate(Pair::second, modes, power)};
}

// Regression of the reception on the intended symbol; the residual holds interference and noise.
double empirical_sinr(const LinearSignal& rx, int stream, double amplitude, const SimConfig& cfg, int mode) {
  KahanSum sy, ss, yy;
  const auto streams = rx.symbols.size();
  for (std::size_t trial = 0; trial < cfg.n_symbols; ++trial) {
    double y = 0.0, wanted = 0.0;
    for (Eigen::Index k = 0; k < streams; ++k) {
      if (rx.symbols(k) == 0.0) continue;
      const double s = counter_normal(cfg.seed, kSymbolStream, static_cast<std::uint64_t>(mode) * 1024u + static_cast<std::uint64_t>(k), trial);
      y += amplitude * rx.symbols(k) * s;
      if (k == stream) wanted = s;
    }
    for (Eigen::Index j = 0; j < rx.noise.size(); ++j) {
      if (rx.noise(j) == 0.0) continue;
      y += cfg.noise_scale * rx.noise(j) * counter_normal(cfg.seed, kNoiseStream, static_cast<std::uint64_t>(j), trial);
    }
    sy.add(y * wanted);
    ss.add(wanted * wanted);
    yy.add(y * y);
  }
  const double n = static_cast<double>(cfg.n_symbols);
  const double g = sy.value() / ss.value();
  const double signal = g * g * ss.value() / n;
  const double rest = yy.value() / n - signal;
  return rest > 0.0 ? signal / rest : std::numeric_limits<double>::infinity();
}

void fit_slope(SimResult& r) {
  const auto n = static_cast<double>(r.powers.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> xs;
  for (std::size_t k = 0; k < r.powers.size(); ++k) {
    const double x = 0.5 * std::log2(r.powers[k]);
    xs.push_back(x);
    sx += x;
    sy += r.sum[k];
    sxx += x * x;
    sxy += x * r.sum[k];
  }
  r.dof_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - r.dof_slope * sx) / n;
  double sq = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double e = r.sum[k] - (intercept + r.dof_slope * xs[k]);
    sq += e * e;
  }
  r.residual = std::sqrt(sq / n);
}

TransferReport checked(const LayeredNetwork& net, const Scheme& scheme) {
  TransferReport report = verify_scheme(net, scheme);
  if (!report.passed()) throw ValidationError("scheme fails verification");
  return report;
}

}  // namespace

SimResult simulate_rates(const LayeredNetwork& net, const Scheme& scheme, const SimConfig& cfg) {
  cfg.validate();
  const TransferReport report = checked(net, scheme);
  const auto signals = propagate(net, scheme);
  SimResult r;
  r.mode_count = scheme.modes;
  r.rates = analytic_rates(report, scheme.modes, cfg.power);
  const double amplitude = std::sqrt(report.alpha * cfg.power);
  for (const auto& ch : report.channels) {
    const Delivery& d = ch.delivery;
    const auto& rx = signals[static_cast<std::size_t>(d.mode)].received[static_cast<std::size_t>(d.node)];
    ChannelEstimate est{d, ch.sinr(report.alpha, cfg.power), 0.0};
    est.empirical_sinr = empirical_sinr(rx, d.stream, amplitude, cfg, d.mode);
    r.empirical_rates[static_cast<std::size_t>(ch.message)] += rate_of(est.empirical_sinr) / scheme.modes;
    r.channels.push_back(est);
  }
  r.powers = {cfg.power};
  r.r1 = {r.rates[0]};
  r.r2 = {r.rates[1]};
  r.sum = {r.rates[0] + r.rates[1]};
  return r;
}

SimResult estimate_dof(const LayeredNetwork& net, const Scheme& scheme, const SimConfig& cfg) {
  cfg.validate();
  const TransferReport report = checked(net, scheme);
  SimResult r;
  r.mode_count = scheme.modes;
  r.rates = analytic_rates(report, scheme.modes, cfg.power);
  for (double p : cfg.p_grid) {
    const auto rates = analytic_rates(report, scheme.modes, p);
    r.powers.push_back(p);
    r.r1.push_back(rates[0]);
    r.r2.push_back(rates[1]);
    r.sum.push_back(rates[0] + rates[1]);
  }
  fit_slope(r);
  return r;
}

std::string rates_csv(const SimResult& result) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (std::size_t k = 0; k < result.powers.size(); ++k)
    os << format_real(result.powers[k]) << ',' << format_real(result.r1[k]) << ',' << format_real(result.r2[k]) << ','
       << format_real(result.sum[k]) << ',' << result.mode_count << ',' << format_real(result.dof_slope) << ','
       << format_real(result.residual) << '\n';
  return os.str();
}

std::string rates_kv(const SimResult& result) {
  std::ostringstream os;
  os << "mode_count=" << result.mode_count << '\n';
  os << "R1=" << format_real(result.rates[0]) << '\n';
  os << "R2=" << format_real(result.rates[1]) << '\n';
  os << "sum=" << format_real(result.rates[0] + result.rates[1]) << '\n';
  if (!result.channels.empty()) {
    os << "R1_empirical=" << format_real(result.empirical_rates[0]) << '\n';
    os << "R2_empirical=" << format_real(result.empirical_rates[1]) << '\n';
  }
  if (result.powers.size() >= 3) {
    os << "slope=" << format_real(result.dof_slope) << '\n';
    os << "residual=" << format_real(result.residual) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- alignment Monte Carlo

namespace {

constexpr std::uint64_t kCodeStream = 3;

long uniform_symbol(std::uint64_t bits, long halfwidth) {
  const auto width = static_cast<std::uint64_t>(2 * halfwidth + 1);
  return static_cast<long>(bits % width) - halfwidth;
}

LatticePoint truth(const Lattice& l, const Eigen::Vector3d& x) {
  return {std::lround(l.combos[0].dot(x)), std::lround(l.combos[1].dot(x))};
}

}  // namespace

IaErrorReport ia_symbol_error(const IaDesign& design, const SimConfig& cfg) {
  cfg.validate();
  const IaParameters& p = design.params;
  const LayeredNetwork& net = design.cond.origin;
  const auto& t = net.terminals();
  const auto signals = propagate(net, design.scheme).front();
  const auto& at_u2 = signals.received[static_cast<std::size_t>(p.roles.u2)];

  // u2 sends α G k x̂0; its effect on each destination is the condensed hop times that.
  const Eigen::Vector3d fwd = p.u2_forward.transpose();
  const double k = fwd.dot(p.at_u2.combos[0]) / p.at_u2.combos[0].squaredNorm();
  if ((fwd - k * p.at_u2.combos[0]).cwiseAbs().maxCoeff() > 1e-12 * fwd.cwiseAbs().maxCoeff())
    throw InvariantViolation("u2 forwards a combination it does not decode");

  const std::array<NodeIndex, 2> dest_nodes{t.d1, t.d2};
  std::array<const Lattice*, 2> dest_lattice{};
  for (const auto& l : p.at_destination) dest_lattice[l.node == t.d1 ? 0 : 1] = &l;

  IaErrorReport r;
  for (double power : cfg.p_grid) {
    const long m = p.halfwidth(power);
    const double g = p.amplitude(power);
    if (g * static_cast<double>(m) > 0x1.0p52) throw ValidationError("codebook half-width times G exceeds 2^52");
    std::array<std::size_t, 3> errors{};
    for (std::size_t trial = 0; trial < cfg.n_symbols; ++trial) {
      Eigen::Vector3d x;
      for (int s = 0; s < 3; ++s)
        x(s) = static_cast<double>(uniform_symbol(counter_bits(cfg.seed, kCodeStream, static_cast<std::uint64_t>(s), trial), m));
      const auto noise = [&](const LinearSignal& rx) {
        double z = 0.0;
        for (Eigen::Index j = 0; j < rx.noise.size(); ++j)
          if (rx.noise(j) != 0.0) z += rx.noise(j) * counter_normal(cfg.seed, kNoiseStream, static_cast<std::uint64_t>(j), trial);
        return cfg.noise_scale * z;
      };
      const double y_u2 = g * at_u2.symbols.head<3>().dot(x) + noise(at_u2);
      const LatticePoint want_u2 = truth(p.at_u2, x);
      const LatticePoint got_u2 = hard_decode(p.at_u2, y_u2, g, m);
      if (!(got_u2 == want_u2)) ++errors[0];
      const double slip = static_cast<double>(got_u2.x0 - want_u2.x0);
      for (std::size_t d = 0; d < 2; ++d) {
        const auto& rx = signals.received[static_cast<std::size_t>(dest_nodes[d])];
        const double y = g * rx.symbols.head<3>().dot(x) + g * p.alpha_relay * k * design.cond.gain(p.roles.u2, dest_nodes[d]) * slip + noise(rx);
        const Lattice& l = *dest_lattice[d];
        if (!(hard_decode(l, y, g, m) == truth(l, x))) ++errors[d + 1];
      }
    }
    r.powers.push_back(power);
    const std::array<const Lattice*, 3> lat{&p.at_u2, dest_lattice[0], dest_lattice[1]};
    for (std::size_t n = 0; n < 3; ++n) {
      r.error_rate[n].push_back(static_cast<double>(errors[n]) / static_cast<double>(cfg.n_symbols));
      r.dmin[n].push_back(lattice_dmin(*lat[n], g, m));
      const auto& e = r.error_rate[n];
      if (e.size() >= 2 && e[e.size() - 1] > e[e.size() - 2]) r.monotone = false;
    }
  }
  return r;
}

}  // namespace tudof
