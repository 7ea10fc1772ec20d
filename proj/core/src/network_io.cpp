#include "tudof/network_io.hpp"

#include <charconv>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "tudof/errors.hpp"

namespace tudof {

std::string format_real(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_real(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) return std::nullopt;
  return value;
}

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class Int>
Int parse_int(std::string_view token, std::size_t line_no, const char* what) {
  Int value{};
  auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    throw ParseError(line_no, std::string("bad ") + what + " '" + std::string(token) + "'");
  return value;
}

}  // namespace

ParsedNetwork parse_network_text(std::string_view text) {
  ParsedNetwork out;
  struct PendingEdge {
    std::string tail, head;
    std::optional<double> gain;
    std::size_t line;
  };
  std::vector<PendingEdge> edges;
  bool have_layers = false, have_pairs = false;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = split_tokens(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const std::string_view kw = tok[0];
    if (kw == "layers") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'layers <r>'");
      if (have_layers) throw ParseError(line_no, "layers declared twice");
      out.draft.layers(parse_int<int>(tok[1], line_no, "layer count"));
      have_layers = true;
    } else if (kw == "node") {
      if (tok.size() != 3) throw ParseError(line_no, "expected 'node <id> <layer>'");
      out.draft.node(std::string(tok[1]), parse_int<int>(tok[2], line_no, "layer"));
    } else if (kw == "edge") {
      if (tok.size() != 4) throw ParseError(line_no, "expected 'edge <tail> <head> <gain|rand>'");
      PendingEdge e{std::string(tok[1]), std::string(tok[2]), std::nullopt, line_no};
      if (tok[3] != "rand") {
        e.gain = parse_real(tok[3]);
        if (!e.gain) throw ParseError(line_no, "bad gain '" + std::string(tok[3]) + "'");
        if (*e.gain == 0.0) throw ParseError(line_no, "stored edges carry nonzero gain");
      }
      edges.push_back(std::move(e));
    } else if (kw == "pairs") {
      if (tok.size() != 5) throw ParseError(line_no, "expected 'pairs <s1> <d1> <s2> <d2>'");
      if (have_pairs) throw ParseError(line_no, "pairs declared twice");
      out.draft.pairs(std::string(tok[1]), std::string(tok[2]), std::string(tok[3]), std::string(tok[4]));
      have_pairs = true;
    } else if (kw == "seed") {
      if (tok.size() != 2) throw ParseError(line_no, "expected 'seed <u64>'");
      out.seed = parse_int<std::uint64_t>(tok[1], line_no, "seed");
    } else {
      throw ParseError(line_no, "unknown keyword '" + std::string(kw) + "'");
    }
    if (end == text.size()) break;
  }
  if (!have_layers) throw ParseError(line_no, "missing 'layers' declaration");
  if (!have_pairs) throw ParseError(line_no, "missing 'pairs' declaration");
  std::mt19937_64 rng(out.seed.value_or(0));
  for (auto& e : edges) {
    const double g = e.gain ? *e.gain : generic_gain(rng);
    out.draft.edge(std::move(e.tail), std::move(e.head), g);
  }
  return out;
}

std::string serialize_network(const LayeredNetwork& net) {
  std::ostringstream os;
  os << "layers " << net.layer_count() << '\n';
  for (std::size_t v = 0; v < net.size(); ++v) {
    const auto& n = net.node(static_cast<NodeIndex>(v));
    os << "node " << n.id << ' ' << n.layer << '\n';
  }
  for (const auto& e : net.edges())
    os << "edge " << net.id(e.tail) << ' ' << net.id(e.head) << ' ' << format_real(e.gain) << '\n';
  const auto& t = net.terminals();
  os << "pairs " << net.id(t.s1) << ' ' << net.id(t.d1) << ' ' << net.id(t.s2) << ' ' << net.id(t.d2) << '\n';
  return os.str();
}

LayeredNetwork network_from_text(std::string_view text) {
  ParsedNetwork parsed = parse_network_text(text);
  ValidationReport report = validate(parsed.draft);
  if (!report.ok()) throw ValidationError(report.errors.front());
  return std::move(*report.network);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

LayeredNetwork read_network_file(const std::filesystem::path& path) {
  return network_from_text(read_text_file(path));
}

}  // namespace tudof
