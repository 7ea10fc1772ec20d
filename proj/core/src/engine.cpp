#include "tudof/engine.hpp"

#include <algorithm>
#include <cmath>

namespace tudof {

namespace {

LinearSignal zero_signal(Eigen::Index streams, Eigen::Index noises) {
  return {Eigen::VectorXd::Zero(streams), Eigen::VectorXd::Zero(noises)};
}

LinearSignal combination(const std::vector<StreamWeight>& weights, Eigen::Index streams, Eigen::Index noises) {
  LinearSignal s = zero_signal(streams, noises);
  for (const auto& w : weights) s.symbols(w.stream) += w.weight;
  return s;
}

}  // namespace

std::vector<ModeSignals> propagate(const LayeredNetwork& net, const Scheme& scheme) {
  const auto n = static_cast<Eigen::Index>(net.size());
  const auto streams = static_cast<Eigen::Index>(scheme.streams.size());
  const Eigen::Index noises = n * scheme.modes;
  std::vector<ModeSignals> out;
  for (int m = 0; m < scheme.modes; ++m) {
    ModeSignals mode{std::vector<LinearSignal>(net.size(), zero_signal(streams, noises)),
                     std::vector<LinearSignal>(net.size(), zero_signal(streams, noises))};
    for (std::size_t i = 0; i < net.size(); ++i) {
      const auto v = static_cast<NodeIndex>(i);
      LinearSignal& y = mode.received[i];
      for (NodeIndex u : net.inputs(v)) {
        const double h = net.gain(u, v);
        y.symbols += h * mode.transmitted[static_cast<std::size_t>(u)].symbols;
        y.noise += h * mode.transmitted[static_cast<std::size_t>(u)].noise;
      }
      if (net.layer(v) > 1) y.noise(m * n + v) += 1.0;

      const RelayProgram& p = scheme.at(m, v);
      LinearSignal& x = mode.transmitted[i];
      switch (p.kind) {
        case ProgramKind::silent:
        case ProgramKind::buffer_store:
          break;
        case ProgramKind::source:
        case ProgramKind::ia_encode:
        case ProgramKind::ia_decode_forward:
          x = combination(p.weights, streams, noises);
          break;
        case ProgramKind::scale_forward:
          x.symbols = p.x * y.symbols;
          x.noise = p.x * y.noise;
          break;
        case ProgramKind::buffer_forward: {
          const auto& stored = out[static_cast<std::size_t>(p.from_mode)].received[i];
          x.symbols = p.x * stored.symbols;
          x.noise = p.x * stored.noise;
          break;
        }
        case ProgramKind::buffer_cancel: {
          const auto& stored = out[static_cast<std::size_t>(p.from_mode)].received[i];
          x.symbols = p.x * (y.symbols - p.c * stored.symbols);
          x.noise = p.x * (y.noise - p.c * stored.noise);
          break;
        }
      }
    }
    out.push_back(std::move(mode));
  }
  return out;
}

double ChannelReport::sinr(double alpha, double power) const {
  return alpha * power * gain * gain / (noise_variance + alpha * power * interference);
}

double ChannelReport::rate(double alpha, double power) const { return 0.5 * std::log2(1.0 + sinr(alpha, power)); }

double TransferReport::rate(Pair p, int modes, double power) const {
  double total = 0.0;
  for (const auto& c : channels)
    if (c.message == p) total += c.rate(alpha, power);
  return total / modes;
}

TransferReport verify_scheme(const LayeredNetwork& net, const Scheme& scheme) {
  TransferReport report;
  report.problems = scheme_problems(net, scheme);
  if (!report.problems.empty()) return report;
  if (scheme.deliveries.empty()) report.problems.push_back("scheme delivers nothing");

  const auto signals = propagate(net, scheme);
  double max_symbols = 0.0, max_noise = 0.0;
  for (int m = 0; m < scheme.modes; ++m)
    for (std::size_t v = 0; v < net.size(); ++v) {
      const auto& x = signals[static_cast<std::size_t>(m)].transmitted[v];
      max_symbols = std::max(max_symbols, x.symbols.squaredNorm());
      max_noise = std::max(max_noise, x.noise.squaredNorm());
    }
  if (max_symbols > 0.0) {
    report.alpha = std::min(0.5, 1.0 / (2.0 * max_symbols));
    report.p0 = 2.0 * max_noise;
  }

  report.min_diagonal = scheme.deliveries.empty() ? 0.0 : INFINITY;
  report.rows.resize(static_cast<std::size_t>(scheme.modes));
  for (int m = 0; m < scheme.modes; ++m) {
    auto& rows = report.rows[static_cast<std::size_t>(m)];
    for (const auto& d : scheme.deliveries)
      if (d.mode == m && std::find(rows.begin(), rows.end(), d.node) == rows.end()) rows.push_back(d.node);
    Eigen::MatrixXd t(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(scheme.streams.size()));
    for (std::size_t r = 0; r < rows.size(); ++r)
      t.row(static_cast<Eigen::Index>(r)) = signals[static_cast<std::size_t>(m)].received[static_cast<std::size_t>(rows[r])].symbols.transpose();
    const double fro = t.norm();
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (Eigen::Index s = 0; s < t.cols(); ++s) {
        const bool wanted = std::any_of(scheme.deliveries.begin(), scheme.deliveries.end(), [&](const Delivery& d) {
          return d.mode == m && d.node == rows[r] && d.stream == s;
        });
        if (!wanted && fro > 0.0)
          report.max_offdiag_ratio = std::max(report.max_offdiag_ratio, std::abs(t(static_cast<Eigen::Index>(r), s)) / fro);
      }
    report.transfer.push_back(std::move(t));
  }

  for (const auto& d : scheme.deliveries) {
    const auto& y = signals[static_cast<std::size_t>(d.mode)].received[static_cast<std::size_t>(d.node)];
    ChannelReport c;
    c.delivery = d;
    c.message = scheme.streams[static_cast<std::size_t>(d.stream)].message;
    c.gain = y.symbols(d.stream);
    c.interference = y.symbols.squaredNorm() - c.gain * c.gain;
    c.noise_variance = y.noise.squaredNorm();
    report.min_diagonal = std::min(report.min_diagonal, std::abs(c.gain));
    report.channels.push_back(c);
  }
  return report;
}

}  // namespace tudof
