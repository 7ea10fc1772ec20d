#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tudof/classifier.hpp"
#include "tudof/network.hpp"

namespace tudof {

enum class ProgramKind { silent, source, scale_forward, buffer_store, buffer_forward, buffer_cancel, ia_encode, ia_decode_forward };
std::string to_string(ProgramKind k);

struct StreamWeight {
  int stream = 0;
  double weight = 1.0;
  friend bool operator==(const StreamWeight&, const StreamWeight&) = default;
};

// What one node does in one mode. `x` scales the forwarded signal; buffer_cancel transmits
// x · (Y − c · Y_stored); `weights` give the symbol combination sent by sources and decode-forward relays.
struct RelayProgram {
  ProgramKind kind = ProgramKind::silent;
  double x = 1.0;
  double c = 0.0;
  int from_mode = 0;
  std::vector<StreamWeight> weights;

  static RelayProgram silent() { return {}; }
  static RelayProgram forward(double x) { return {ProgramKind::scale_forward, x, 0.0, 0, {}}; }
  static RelayProgram source(std::vector<StreamWeight> w) { return {ProgramKind::source, 1.0, 0.0, 0, std::move(w)}; }
  friend bool operator==(const RelayProgram&, const RelayProgram&) = default;
};

struct Stream {
  std::string name;
  Pair message = Pair::first;
  friend bool operator==(const Stream&, const Stream&) = default;
};

// `stream` is expected in the reception of `node` during `mode`.
struct Delivery {
  NodeIndex node = 0;
  int mode = 0;
  int stream = 0;
  friend bool operator==(const Delivery&, const Delivery&) = default;
};

struct Scheme {
  int modes = 1;
  std::vector<Stream> streams;
  std::vector<std::vector<RelayProgram>> programs;  // [mode][node]
  std::vector<Delivery> deliveries;
  std::pair<Dof, Dof> predicted{Dof{0, 1}, Dof{0, 1}};
  double power_margin = 0.5;  // source power fraction α
  std::string construction;

  Scheme() = default;
  Scheme(std::size_t nodes, int mode_count)
      : modes(mode_count), programs(static_cast<std::size_t>(mode_count), std::vector<RelayProgram>(nodes)) {}

  RelayProgram& at(int mode, NodeIndex v) { return programs[static_cast<std::size_t>(mode)][static_cast<std::size_t>(v)]; }
  const RelayProgram& at(int mode, NodeIndex v) const {
    return programs[static_cast<std::size_t>(mode)][static_cast<std::size_t>(v)];
  }
  int add_stream(std::string name, Pair message);
  int stream_index(std::string_view name) const;  // -1 when absent
  bool uses_ia() const;

  friend bool operator==(const Scheme&, const Scheme&) = default;
};

// Structural problems: wrong table sizes, buffers without an earlier store, non-finite scales,
// unknown streams. Empty when the scheme is well formed.
std::vector<std::string> scheme_problems(const LayeredNetwork& net, const Scheme& scheme);

std::string serialize_scheme(const LayeredNetwork& net, const Scheme& scheme);
// Throws ParseError with the offending line.
Scheme parse_scheme(const LayeredNetwork& net, std::string_view text);

// Exchanges the message labels of streams and the predicted pair, for schemes built on swap_pairs(net).
Scheme relabel_pairs(Scheme scheme);

}  // namespace tudof
