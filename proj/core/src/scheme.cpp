#include "tudof/scheme.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "tudof/errors.hpp"
#include "tudof/network_io.hpp"

namespace tudof {

namespace {

constexpr std::pair<ProgramKind, std::string_view> kProgramNames[] = {
    {ProgramKind::silent, "silent"},
    {ProgramKind::source, "source"},
    {ProgramKind::scale_forward, "scale_forward"},
    {ProgramKind::buffer_store, "buffer_store"},
    {ProgramKind::buffer_forward, "buffer_forward"},
    {ProgramKind::buffer_cancel, "buffer_cancel"},
    {ProgramKind::ia_encode, "ia_encode"},
    {ProgramKind::ia_decode_forward, "ia_decode_forward"},
};

bool reads_buffer(ProgramKind k) { return k == ProgramKind::buffer_forward || k == ProgramKind::buffer_cancel; }
bool sends_weights(ProgramKind k) {
  return k == ProgramKind::source || k == ProgramKind::ia_encode || k == ProgramKind::ia_decode_forward;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find(sep, start);
    out.push_back(s.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

int parse_int(std::size_t line, std::string_view tok) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  return v;
}

double parse_number(std::size_t line, std::string_view tok) {
  const auto v = parse_real(tok);
  if (!v) throw ParseError(line, "expected a real number, got '" + std::string(tok) + "'");
  return *v;
}

Dof parse_dof(std::size_t line, std::string_view tok) {
  const auto parts = split(tok, '/');
  if (parts.size() > 2) throw ParseError(line, "bad DoF value '" + std::string(tok) + "'");
  Dof d{parse_int(line, parts[0]), parts.size() == 2 ? parse_int(line, parts[1]) : 1};
  if (d.den <= 0) throw ParseError(line, "DoF denominator must be positive");
  return d;
}

}  // namespace

std::string to_string(ProgramKind k) {
  for (const auto& [kind, name] : kProgramNames)
    if (kind == k) return std::string(name);
  return "silent";
}

int Scheme::add_stream(std::string name, Pair message) {
  streams.push_back({std::move(name), message});
  return static_cast<int>(streams.size()) - 1;
}

int Scheme::stream_index(std::string_view name) const {
  for (std::size_t k = 0; k < streams.size(); ++k)
    if (streams[k].name == name) return static_cast<int>(k);
  return -1;
}

bool Scheme::uses_ia() const {
  for (const auto& mode : programs)
    for (const auto& p : mode)
      if (p.kind == ProgramKind::ia_encode || p.kind == ProgramKind::ia_decode_forward) return true;
  return false;
}

std::vector<std::string> scheme_problems(const LayeredNetwork& net, const Scheme& scheme) {
  std::vector<std::string> out;
  if (scheme.modes < 1 || scheme.modes > 2) out.push_back("scheme must have 1 or 2 modes");
  if (scheme.programs.size() != static_cast<std::size_t>(std::max(scheme.modes, 0))) {
    out.push_back("program table does not match the mode count");
    return out;
  }
  if (!(scheme.power_margin > 0.0 && scheme.power_margin < 1.0)) out.push_back("power margin must lie in (0, 1)");
  const int streams = static_cast<int>(scheme.streams.size());
  for (int m = 0; m < scheme.modes; ++m) {
    if (scheme.programs[static_cast<std::size_t>(m)].size() != net.size()) {
      out.push_back("mode " + std::to_string(m + 1) + " does not cover every node");
      continue;
    }
    for (std::size_t v = 0; v < net.size(); ++v) {
      const auto& p = scheme.programs[static_cast<std::size_t>(m)][v];
      const std::string where = "mode " + std::to_string(m + 1) + " node " + net.id(static_cast<NodeIndex>(v));
      if (!std::isfinite(p.x) || !std::isfinite(p.c)) out.push_back(where + ": non-finite scale");
      if (reads_buffer(p.kind)) {
        if (p.from_mode < 0 || p.from_mode >= m ||
            scheme.programs[static_cast<std::size_t>(p.from_mode)][v].kind != ProgramKind::buffer_store)
          out.push_back(where + ": reads a buffer that no earlier mode stored");
      }
      for (const auto& w : p.weights) {
        if (w.stream < 0 || w.stream >= streams) out.push_back(where + ": unknown stream");
        if (!std::isfinite(w.weight)) out.push_back(where + ": non-finite stream weight");
      }
    }
  }
  for (const auto& d : scheme.deliveries)
    if (d.mode < 0 || d.mode >= scheme.modes || d.stream < 0 || d.stream >= streams || d.node < 0 ||
        static_cast<std::size_t>(d.node) >= net.size())
      out.push_back("delivery refers to an unknown node, mode or stream");
  return out;
}

std::string serialize_scheme(const LayeredNetwork& net, const Scheme& scheme) {
  std::ostringstream os;
  os << "scheme " << scheme.modes << '\n';
  if (!scheme.construction.empty()) os << "construction " << scheme.construction << '\n';
  os << "predicted " << scheme.predicted.first.str() << ' ' << scheme.predicted.second.str() << '\n';
  os << "alpha " << format_real(scheme.power_margin) << '\n';
  for (const auto& s : scheme.streams) os << "stream " << s.name << ' ' << number(s.message) << '\n';
  for (int m = 0; m < scheme.modes; ++m) {
    for (std::size_t v = 0; v < net.size(); ++v) {
      const auto& p = scheme.programs[static_cast<std::size_t>(m)][v];
      os << "mode " << m + 1 << " node " << net.id(static_cast<NodeIndex>(v)) << ' ' << to_string(p.kind);
      if (p.kind == ProgramKind::scale_forward || reads_buffer(p.kind)) os << " x=" << format_real(p.x);
      if (p.kind == ProgramKind::buffer_cancel) os << " c=" << format_real(p.c);
      if (reads_buffer(p.kind)) os << " from=" << p.from_mode + 1;
      if (sends_weights(p.kind)) {
        os << " w=";
        for (std::size_t k = 0; k < p.weights.size(); ++k)
          os << (k ? "," : "") << scheme.streams[static_cast<std::size_t>(p.weights[k].stream)].name << ':'
             << format_real(p.weights[k].weight);
      }
      os << '\n';
    }
  }
  for (const auto& d : scheme.deliveries)
    os << "deliver " << net.id(d.node) << ' ' << d.mode + 1 << ' ' << scheme.streams[static_cast<std::size_t>(d.stream)].name << '\n';
  return os.str();
}

Scheme parse_scheme(const LayeredNetwork& net, std::string_view text) {
  Scheme scheme;
  bool have_header = false;
  std::size_t lineno = 0;
  for (std::string_view rest = text; !rest.empty() || lineno == 0;) {
    const std::size_t nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tok = tokens(line);
    if (tok.empty()) {
      if (rest.empty()) break;
      continue;
    }
    const auto need = [&](std::size_t n) {
      if (tok.size() < n) throw ParseError(lineno, "'" + std::string(tok[0]) + "' needs more fields");
    };
    const auto key = tok[0];
    if (key == "scheme") {
      need(2);
      const int modes = parse_int(lineno, tok[1]);
      if (modes < 1 || modes > 2) throw ParseError(lineno, "scheme must have 1 or 2 modes");
      scheme = Scheme(net.size(), modes);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(lineno, "expected 'scheme <modes>' first");
    if (key == "construction") {
      need(2);
      scheme.construction = std::string(tok[1]);
    } else if (key == "predicted") {
      need(3);
      scheme.predicted = {parse_dof(lineno, tok[1]), parse_dof(lineno, tok[2])};
    } else if (key == "alpha") {
      need(2);
      scheme.power_margin = parse_number(lineno, tok[1]);
    } else if (key == "stream") {
      need(3);
      const int pair = parse_int(lineno, tok[2]);
      if (pair != 1 && pair != 2) throw ParseError(lineno, "stream pair must be 1 or 2");
      if (scheme.stream_index(tok[1]) >= 0) throw ParseError(lineno, "duplicate stream " + std::string(tok[1]));
      scheme.add_stream(std::string(tok[1]), pair == 1 ? Pair::first : Pair::second);
    } else if (key == "mode") {
      need(5);
      const int m = parse_int(lineno, tok[1]) - 1;
      if (m < 0 || m >= scheme.modes) throw ParseError(lineno, "mode out of range");
      if (tok[2] != "node") throw ParseError(lineno, "expected 'node'");
      const auto v = net.find(tok[3]);
      if (!v) throw ParseError(lineno, "unknown node " + std::string(tok[3]));
      RelayProgram p;
      bool known = false;
      for (const auto& [kind, name] : kProgramNames)
        if (name == tok[4]) {
          p.kind = kind;
          known = true;
        }
      if (!known) throw ParseError(lineno, "unknown program " + std::string(tok[4]));
      for (std::size_t k = 5; k < tok.size(); ++k) {
        const auto eq = tok[k].find('=');
        if (eq == std::string_view::npos) throw ParseError(lineno, "expected key=value, got '" + std::string(tok[k]) + "'");
        const auto name = tok[k].substr(0, eq), value = tok[k].substr(eq + 1);
        if (name == "x") {
          p.x = parse_number(lineno, value);
        } else if (name == "c") {
          p.c = parse_number(lineno, value);
        } else if (name == "from") {
          p.from_mode = parse_int(lineno, value) - 1;
        } else if (name == "w") {
          for (auto item : split(value, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string_view::npos) throw ParseError(lineno, "stream weight needs name:value");
            const int s = scheme.stream_index(item.substr(0, colon));
            if (s < 0) throw ParseError(lineno, "unknown stream " + std::string(item.substr(0, colon)));
            p.weights.push_back({s, parse_number(lineno, item.substr(colon + 1))});
          }
        } else {
          throw ParseError(lineno, "unknown program option " + std::string(name));
        }
      }
      scheme.at(m, *v) = std::move(p);
    } else if (key == "deliver") {
      need(4);
      const auto v = net.find(tok[1]);
      if (!v) throw ParseError(lineno, "unknown node " + std::string(tok[1]));
      const int m = parse_int(lineno, tok[2]) - 1;
      if (m < 0 || m >= scheme.modes) throw ParseError(lineno, "mode out of range");
      const int s = scheme.stream_index(tok[3]);
      if (s < 0) throw ParseError(lineno, "unknown stream " + std::string(tok[3]));
      scheme.deliveries.push_back({*v, m, s});
    } else {
      throw ParseError(lineno, "unknown keyword '" + std::string(key) + "'");
    }
    if (rest.empty()) break;
  }
  if (!have_header) throw ParseError(lineno, "missing 'scheme' header");
  const auto problems = scheme_problems(net, scheme);
  if (!problems.empty()) throw ParseError(lineno, problems.front());
  return scheme;
}

Scheme relabel_pairs(Scheme scheme) {
  for (auto& s : scheme.streams) s.message = other(s.message);
  std::swap(scheme.predicted.first, scheme.predicted.second);
  return scheme;
}

}  // namespace tudof
