#include "cli.hpp"

#include <CLI11.hpp>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <variant>

#include "tudof/af.hpp"
#include "tudof/classifier.hpp"
#include "tudof/engine.hpp"
#include "tudof/errors.hpp"
#include "tudof/ia.hpp"
#include "tudof/network_io.hpp"
#include "tudof/simulator.hpp"

namespace tudof::cli {

namespace {

struct Options {
  std::string input;
  std::vector<std::string> inputs;
  std::string out;
  std::string format;
  std::string scheme_file;
  std::uint64_t seed = 1;
  double eps = 0.1;
  double power = 1e6;
  std::size_t samples = 100000;
  std::vector<double> p_grid;
  bool ia = false;
  std::size_t count = 100;
  std::size_t max_nodes = 12;
  RandomNetworkConfig random;
};

std::string ids(const LayeredNetwork& net, std::span<const NodeIndex> nodes) {
  std::string s;
  for (NodeIndex v : nodes) {
    if (!s.empty()) s += ',';
    s += net.id(v);
  }
  return s;
}

std::string ids(const LayeredNetwork& net, const Path& p) { return ids(net, p.nodes()); }
std::string ids(const LayeredNetwork& net, const NodeSet& s) { return ids(net, s.to_vector()); }

// Components of a witness joined by '|' in a fixed order per kind.
std::pair<std::string, std::string> witness_fields(const LayeredNetwork& net, const CaseWitness& w) {
  struct Visit {
    const LayeredNetwork& net;
    std::pair<std::string, std::string> operator()(std::monostate) const { return {"none", ""}; }
    std::pair<std::string, std::string> operator()(const CaseAWitness& a) const {
      if (a.prime) return {"cut_edge", net.id(a.tail) + "," + net.id(a.head)};
      return {"cut_node", net.id(a.node)};
    }
    std::pair<std::string, std::string> operator()(const ManageableWitness& m) const {
      return {"manageable", ids(net, m.p11) + "|" + ids(net, m.p22) + "|" + ids(net, m.subset)};
    }
    std::pair<std::string, std::string> operator()(const CrossWitness& c) const {
      if (c.butterfly)
        return {"butterfly", ids(net, c.subset) + "|" + ids(net, c.butterfly->shared) + "|" + ids(net, c.butterfly->p12) +
                                 "|" + ids(net, c.butterfly->p21)};
      if (c.grail)
        return {"grail", ids(net, c.subset) + "|" + ids(net, c.grail->p12) + "|" + ids(net, c.grail->p21) + "|" +
                             net.id(c.grail->wa) + "," + net.id(c.grail->wb)};
      return {"cross", ids(net, c.subset)};
    }
    std::pair<std::string, std::string> operator()(const C1Witness& c) const {
      const std::vector<NodeIndex> named{c.v0, c.v1, c.v2, c.v3, c.v4, c.v5, c.v6, c.vm};
      return {c.swapped ? "c1_swapped" : "c1", ids(net, c.p11) + "|" + ids(net, c.p22) + "|" + ids(net, c.feeder) + "|" +
                                                   ids(net, c.s1_to_v2) + "|" + ids(net, named)};
    }
    std::pair<std::string, std::string> operator()(const C2Witness& c) const {
      const std::vector<NodeIndex> named{c.v1, c.v2, c.v3, c.v4};
      return {c.swapped ? "c2_swapped" : "c2",
              ids(net, c.q11) + "|" + ids(net, c.z11) + "|" + ids(net, c.p22) + "|" + ids(net, named)};
    }
  };
  return std::visit(Visit{net}, w);
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_text_file(o.out, text);
  }
}

int cmd_validate(const Options& o, std::ostream& out) {
  const ParsedNetwork parsed = parse_network_text(read_text_file(o.input));
  const ValidationReport report = validate(parsed.draft);
  if (!report.ok()) {
    out << "valid=0\n";
    for (const auto& e : report.errors) out << "error=" << e << '\n';
    return usage_or_input;
  }
  const LayeredNetwork& net = *report.network;
  out << "valid=1\nnodes=" << net.size() << "\nedges=" << net.edges().size() << "\nlayers=" << net.layer_count() << '\n';
  return ok;
}

void print_classification(const LayeredNetwork& net, const Classification& c, std::ostream& out) {
  const auto [kind, witness] = witness_fields(net, c.witness);
  out << "case=" << to_string(c.kind) << "\nsum_dof=" << c.sum_dof.str() << "\nwitness_kind=" << kind
      << "\nwitness=" << witness << '\n';
}

int cmd_classify(const Options& o, std::ostream& out) {
  const LayeredNetwork net = read_network_file(o.input);
  const Classification c = classify_sum_dof(net);
  print_classification(net, c, out);
  out << "note=" << c.note << '\n';
  return c.kind == DofCase::indeterminate ? indeterminate : ok;
}

std::string vertex_list(const std::vector<std::pair<double, double>>& vertices) {
  std::string s;
  for (const auto& [a, b] : vertices) {
    if (!s.empty()) s += ',';
    s += "(" + format_real(a) + "," + format_real(b) + ")";
  }
  return s;
}

int cmd_region(const Options& o, std::ostream& out) {
  const LayeredNetwork net = read_network_file(o.input);
  const RegionClassification r = classify_region(net);
  out << "region=" << to_string(r.region) << "\nvertices=" << vertex_list(r.vertices)
      << "\nmax_sum=" << format_real(r.max_sum()) << "\nsum_dof=" << r.sum.sum_dof.str()
      << "\ncase=" << to_string(r.sum.kind) << '\n';
  return r.sum.kind == DofCase::indeterminate ? indeterminate : ok;
}

void print_report(const TransferReport& r, std::ostream& out) {
  out << "verified=" << (r.passed() ? 1 : 0) << "\nmax_offdiag_ratio=" << format_real(r.max_offdiag_ratio)
      << "\nmin_diagonal=" << format_real(r.min_diagonal) << "\nalpha=" << format_real(r.alpha)
      << "\np0=" << format_real(r.p0) << '\n';
  for (const auto& p : r.problems) out << "problem=" << p << '\n';
}

int cmd_synth_ia(const Options& o, const LayeredNetwork& net, const Classification& c, std::ostream& out) {
  const auto* w = std::get_if<C1Witness>(&c.witness);
  if (!w) {
    out << "construction=none\nnote=alignment needs a first-sub-case witness\n";
    return verification_failed;
  }
  const IaDesign d = synth_ia(net, *w, o.eps);
  const IaParameters& p = d.params;
  const std::vector<double> grid = o.p_grid.empty() ? std::vector<double>{1e6, 1e8, 1e10, 1e12} : o.p_grid;
  const IaReport r = verify_ia(d, grid);
  out << "construction=" << d.scheme.construction << "\nia_case=" << p.ia_case << "\nepsilon=" << format_real(p.epsilon)
      << "\nper_message_dof=" << format_real(p.per_message_dof()) << "\nT=" << format_real(p.irrational_t)
      << "\nT2=" << format_real(p.t2) << "\nbeta=" << format_real(p.beta)
      << "\nalpha_relay=" << format_real(p.alpha_relay) << "\np0=" << format_real(p.p0)
      << "\nu2_alignment=" << format_real(r.u2_alignment) << "\nleak=" << format_real(r.leak)
      << "\nmax_residual=" << format_real(r.max_residual) << "\npower_ok=" << (r.power_ok ? 1 : 0) << '\n';
  if (!o.out.empty()) write_text_file(o.out, serialize_scheme(net, d.scheme));
  return r.aligned() && r.power_ok ? ok : verification_failed;
}

int cmd_synth(const Options& o, std::ostream& out) {
  const LayeredNetwork net = read_network_file(o.input);
  const Classification c = classify_sum_dof(net);
  out << "case=" << to_string(c.kind) << "\nsum_dof=" << c.sum_dof.str() << '\n';
  if (c.kind == DofCase::indeterminate) return indeterminate;
  if (o.ia) return cmd_synth_ia(o, net, c, out);
  const Synthesis s = synthesize(net, c);
  if (!s.scheme) {
    out << "construction=none\n";
    if (s.directive) out << "directive=" << s.directive->reason << "\ndirective_nodes=" << ids(net, s.directive->nodes) << '\n';
    out << "note=" << s.note << '\n';
    return verification_failed;
  }
  const TransferReport r = verify_scheme(net, *s.scheme);
  out << "construction=" << s.scheme->construction << "\nmodes=" << s.scheme->modes
      << "\npredicted=" << s.scheme->predicted.first.str() << "," << s.scheme->predicted.second.str() << '\n';
  print_report(r, out);
  if (!o.out.empty()) write_text_file(o.out, serialize_scheme(net, *s.scheme));
  return r.passed() ? ok : verification_failed;
}

Scheme load_or_synthesize(const Options& o, const LayeredNetwork& net) {
  if (!o.scheme_file.empty()) return parse_scheme(net, read_text_file(o.scheme_file));
  const Synthesis s = synthesize(net, classify_sum_dof(net));
  if (!s.scheme) throw ValidationError("no scheme could be synthesized: " + s.note);
  return *s.scheme;
}

SimConfig sim_config(const Options& o) {
  SimConfig cfg;
  cfg.power = o.power;
  cfg.n_symbols = o.samples;
  cfg.seed = o.seed;
  if (!o.p_grid.empty()) cfg.p_grid = o.p_grid;
  return cfg;
}

std::string ia_csv(const IaErrorReport& r) {
  std::ostringstream os;
  os << "P,err_u2,err_d1,err_d2,dmin_u2,dmin_d1,dmin_d2\n";
  for (std::size_t k = 0; k < r.powers.size(); ++k) {
    os << format_real(r.powers[k]);
    for (const auto& e : r.error_rate) os << ',' << format_real(e[k]);
    for (const auto& d : r.dmin) os << ',' << format_real(d[k]);
    os << '\n';
  }
  return os.str();
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const LayeredNetwork net = read_network_file(o.input);
  if (o.ia) {
    const Classification c = classify_sum_dof(net);
    const auto* w = std::get_if<C1Witness>(&c.witness);
    if (!w) throw ValidationError("alignment runs need a first-sub-case network");
    SimConfig cfg = sim_config(o);
    if (o.p_grid.empty()) cfg.p_grid = {1e6, 1e8, 1e10, 1e12};
    const IaErrorReport r = ia_symbol_error(synth_ia(net, *w, o.eps), cfg);
    emit(o, out, ia_csv(r));
    return ok;
  }
  const SimResult r = simulate_rates(net, load_or_synthesize(o, net), sim_config(o));
  emit(o, out, o.format == "kv" ? rates_kv(r) : rates_csv(r));
  return ok;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  const LayeredNetwork net = read_network_file(o.input);
  const SimResult r = estimate_dof(net, load_or_synthesize(o, net), sim_config(o));
  emit(o, out, o.format == "kv" ? rates_kv(r) : rates_csv(r));
  return ok;
}

int cmd_randgen(const Options& o, std::ostream& out) {
  emit(o, out, serialize_network(random_network(o.random, o.seed)));
  return ok;
}

int cmd_oracle(const Options& o, std::ostream& out) {
  std::vector<LayeredNetwork> nets;
  for (const auto& f : o.inputs) nets.push_back(read_network_file(f));
  for (std::uint64_t s = o.seed; o.inputs.empty() && nets.size() < o.count; ++s) {
    LayeredNetwork net = random_network(o.random, s);
    if (net.size() <= o.max_nodes) nets.push_back(std::move(net));
  }
  std::size_t checked = 0, mismatches = 0;
  for (const auto& net : nets) {
    if (net.size() > kBruteForceMaxNodes) continue;
    ++checked;
    const RegionClassification fast = classify_region(net);
    const Classification slow = brute_force_classify(net);
    const RegionKind slow_region = brute_force_region(net);
    if (fast.sum.kind != slow.kind || !(fast.sum.sum_dof == slow.sum_dof) || fast.region != slow_region) {
      ++mismatches;
      out << "mismatch=" << to_string(fast.sum.kind) << "/" << to_string(fast.region) << " vs "
          << to_string(slow.kind) << "/" << to_string(slow_region) << '\n';
    }
  }
  out << "checked=" << checked << "\nmismatches=" << mismatches << '\n';
  return mismatches == 0 ? ok : oracle_mismatch;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sum-DoF classification and scheme synthesis for two-unicast layered networks", "tudof"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&, std::ostream&)> action;

  const auto verb = [&](const char* name, const char* help, auto fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };
  const auto input = [&](CLI::App* sub) { sub->add_option("network", o.input, "network file")->required()->check(CLI::ExistingFile); };
  const auto output = [&](CLI::App* sub) { sub->add_option("--out", o.out, "output path"); };
  const auto format = [&](CLI::App* sub) {
    o.format = "csv";
    sub->add_option("--format", o.format, "csv or kv")->check(CLI::IsMember({"csv", "kv"}));
  };
  const auto grid = [&](CLI::App* sub) { sub->add_option("--p-grid", o.p_grid, "comma-separated powers")->delimiter(','); };

  input(verb("validate", "parse and validate a network file", cmd_validate));
  input(verb("classify", "sum-DoF case and witness", cmd_classify));
  input(verb("region", "DoF region label and vertices", cmd_region));

  CLI::App* synth = verb("synth", "synthesize and verify a scheme", cmd_synth);
  input(synth);
  output(synth);
  synth->add_flag("--ia", o.ia, "alignment scheme instead of the two-mode scheme");
  synth->add_option("--eps", o.eps, "alignment epsilon")->check(CLI::Range(0.0, 1.0));
  grid(synth);

  CLI::App* sim = verb("simulate", "rates by analytic and sampled transmission", cmd_simulate);
  input(sim);
  output(sim);
  format(sim);
  grid(sim);
  sim->add_option("--scheme", o.scheme_file, "scheme file (synthesized when absent)")->check(CLI::ExistingFile);
  sim->add_option("--power", o.power, "transmit power P");
  sim->add_option("--samples", o.samples, "sampled symbols per channel")->check(CLI::PositiveNumber);
  sim->add_option("--seed", o.seed, "master seed");
  sim->add_flag("--ia", o.ia, "alignment symbol-error run over the P grid");
  sim->add_option("--eps", o.eps, "alignment epsilon")->check(CLI::Range(0.0, 1.0));

  CLI::App* est = verb("estimate-dof", "sum-rate slope over a P grid", cmd_estimate);
  input(est);
  output(est);
  format(est);
  grid(est);
  est->add_option("--scheme", o.scheme_file, "scheme file (synthesized when absent)")->check(CLI::ExistingFile);

  CLI::App* oracle = verb("oracle-check", "compare the classifier with exhaustive search", cmd_oracle);
  oracle->add_option("networks", o.inputs, "network files (random networks when absent)")->check(CLI::ExistingFile);
  oracle->add_option("--seed", o.seed, "first random seed");
  oracle->add_option("--count", o.count, "random networks to check");
  oracle->add_option("--max-nodes", o.max_nodes, "node limit for random networks")->check(CLI::Range(4, 14));
  oracle->add_option("--edge-prob", o.random.edge_probability, "edge probability")->check(CLI::Range(0.0, 1.0));

  CLI::App* rand = verb("randgen", "write a seeded random network", cmd_randgen);
  output(rand);
  rand->add_option("--seed", o.seed, "seed");
  rand->add_option("--min-layers", o.random.min_layers, "fewest layers")->check(CLI::Range(2, 64));
  rand->add_option("--max-layers", o.random.max_layers, "most layers")->check(CLI::Range(2, 64));
  rand->add_option("--width", o.random.max_width, "most nodes per layer")->check(CLI::Range(1, 16));
  rand->add_option("--edge-prob", o.random.edge_probability, "edge probability")->check(CLI::Range(0.0, 1.0));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return usage_or_input;
  }
  try {
    return action(o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return usage_or_input;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return usage_or_input;
  } catch (const SizeLimitError& e) {
    err << "error: " << e.what() << '\n';
    return indeterminate;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return usage_or_input;
  }
}

}  // namespace tudof::cli
