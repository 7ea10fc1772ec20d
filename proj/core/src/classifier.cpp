#include "tudof/classifier.hpp"

#include <algorithm>
#include <map>

#include "tudof/errors.hpp"

namespace tudof {

std::string to_string(DofCase c) {
  switch (c) {
    case DofCase::disconnected: return "disconnected";
    case DofCase::A: return "A";
    case DofCase::A_prime: return "A'";
    case DofCase::B: return "B";
    case DofCase::B_prime: return "B'";
    case DofCase::C1: return "C1";
    case DofCase::C2: return "C2";
    case DofCase::indeterminate: return "indeterminate";
  }
  return "?";
}

std::string to_string(RegionKind r) {
  switch (r) {
    case RegionKind::degenerate: return "degenerate";
    case RegionKind::I: return "I";
    case RegionKind::II: return "II";
    case RegionKind::III: return "III";
    case RegionKind::IV: return "IV";
    case RegionKind::V: return "V";
  }
  return "?";
}

double RegionClassification::max_sum() const {
  double best = 0.0;
  for (const auto& [a, b] : vertices) best = std::max(best, a + b);
  return best;
}

bool PropertyReport::all_hold() const {
  return !results.empty() && std::all_of(results.begin(), results.end(), [](const auto& r) { return r.second; });
}

// ---------------------------------------------------------------- case A

std::optional<CaseAWitness> detect_case_A(const LayeredNetwork& net, const NodeSet& within) {
  const auto& t = net.terminals();
  const std::vector<NodeIndex> nodes = within.to_vector();
  // dest_cut[i][v]: removing v cuts d_i from both sources; src_cut[i][v]: removing v cuts s_i from both destinations.
  std::array<std::vector<bool>, 2> dest_cut, src_cut;
  for (auto& v : dest_cut) v.assign(net.size(), false);
  for (auto& v : src_cut) v.assign(net.size(), false);
  for (NodeIndex v : nodes) {
    NodeSet w = within;
    w.erase(v);
    const NodeSet from_sources = reach_forward(net, NodeSet{t.s1, t.s2}, w);
    dest_cut[0][static_cast<std::size_t>(v)] = !from_sources.contains(t.d1);
    dest_cut[1][static_cast<std::size_t>(v)] = !from_sources.contains(t.d2);
    const NodeSet to_dests = reach_backward(net, NodeSet{t.d1, t.d2}, w);
    src_cut[0][static_cast<std::size_t>(v)] = !to_dests.contains(t.s1);
    src_cut[1][static_cast<std::size_t>(v)] = !to_dests.contains(t.s2);
  }
  for (Pair p : {Pair::first, Pair::second}) {
    const auto i = static_cast<std::size_t>(p), j = static_cast<std::size_t>(other(p));
    for (NodeIndex v : nodes)
      if (dest_cut[i][static_cast<std::size_t>(v)] && src_cut[j][static_cast<std::size_t>(v)])
        return CaseAWitness{false, p, v, 0, 0};
  }
  for (Pair p : {Pair::first, Pair::second}) {
    const auto i = static_cast<std::size_t>(p), j = static_cast<std::size_t>(other(p));
    for (const auto& e : net.edges()) {
      if (!within.contains(e.tail) || !within.contains(e.head)) continue;
      if (dest_cut[i][static_cast<std::size_t>(e.head)] && src_cut[j][static_cast<std::size_t>(e.tail)])
        return CaseAWitness{true, p, 0, e.tail, e.head};
    }
  }
  return std::nullopt;
}

std::optional<CaseAWitness> detect_case_A(const LayeredNetwork& net) { return detect_case_A(net, net.all()); }

// ---------------------------------------------------------------- butterfly / grail

namespace {

constexpr std::size_t kWitnessPathCap = 4096;
constexpr std::size_t kWitnessComboCap = 400000;

bool contiguous_segment(const LayeredNetwork& net, const std::vector<NodeIndex>& shared) {
  for (std::size_t k = 1; k < shared.size(); ++k)
    if (net.layer(shared[k]) != net.layer(shared[k - 1]) + 1) return false;
  return true;
}

}  // namespace

std::optional<ButterflyWitness> detect_butterfly(const LayeredNetwork& net, const NodeSet& within) {
  const auto& t = net.terminals();
  const auto p11s = enumerate_paths(net, t.s1, t.d1, within, kWitnessPathCap);
  const auto p22s = enumerate_paths(net, t.s2, t.d2, within, kWitnessPathCap);
  std::map<std::vector<NodeIndex>, std::optional<PathPair>> cross_memo;
  std::optional<ButterflyWitness> best;
  std::size_t combos = 0;
  for (const auto& p11 : p11s)
    for (const auto& p22 : p22s) {
      if (++combos > kWitnessComboCap) return best;
      const NodeSet shared = p11.mask() & p22.mask();
      if (shared.empty()) continue;
      const auto seg = shared.to_vector();
      if (!contiguous_segment(net, seg)) continue;
      if (best && net.layer(seg.back()) <= net.layer(best->u1)) continue;
      auto it = cross_memo.find(seg);
      if (it == cross_memo.end())
        it = cross_memo.emplace(seg, find_disjoint_paths(net, {t.s1, t.s2}, {t.d2, t.d1}, within - shared)).first;
      if (!it->second) continue;
      best = ButterflyWitness{seg.front(), seg.back(), Path(net, seg), p11, p22, it->second->first, it->second->second};
    }
  return best;
}

std::optional<ButterflyWitness> detect_butterfly(const LayeredNetwork& net) { return detect_butterfly(net, net.all()); }

namespace {

std::optional<GrailWitness> grail_one_way(const LayeredNetwork& net, const NodeSet& within) {
  const auto& t = net.terminals();
  const NodeSet from_s2 = reach_forward(net, NodeSet{t.s2}, within);
  const NodeSet to_d2 = reach_backward(net, NodeSet{t.d2}, within);
  std::size_t combos = 0;
  for (const auto& p12 : enumerate_paths(net, t.s1, t.d2, within, kWitnessPathCap)) {
    for (const auto& p21 : enumerate_paths(net, t.s2, t.d1, within - p12.mask(), kWitnessPathCap)) {
      if (++combos > kWitnessComboCap) return std::nullopt;
      for (NodeIndex wa : p12.nodes()) {
        if (!from_s2.contains(wa)) continue;
        const NodeSet from_wa = reach_forward(net, NodeSet{wa}, within);
        for (NodeIndex wb : p21.nodes()) {
          if (!from_wa.contains(wb) || !to_d2.contains(wb)) continue;
          GrailWitness w;
          w.p12 = p12;
          w.p21 = p21;
          w.wa = wa;
          w.wb = wb;
          w.to_wa = *find_path(net, t.s2, wa, within);
          w.wa_to_wb = *find_path(net, wa, wb, within);
          w.from_wb = *find_path(net, wb, t.d2, within);
          return w;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<GrailWitness> detect_grail(const LayeredNetwork& net, const NodeSet& within) {
  if (auto w = grail_one_way(net, within)) return w;
  if (auto w = grail_one_way(swap_pairs(net), within)) {
    w->mirrored = true;
    std::swap(w->p12, w->p21);
    return w;
  }
  return std::nullopt;
}

std::optional<GrailWitness> detect_grail(const LayeredNetwork& net) { return detect_grail(net, net.all()); }

bool butterfly_valid(const LayeredNetwork& net, const ButterflyWitness& w) {
  const auto& t = net.terminals();
  const auto ends = [](const Path& p, NodeIndex a, NodeIndex b) { return !p.empty() && p.front() == a && p.back() == b; };
  if (!ends(w.p11, t.s1, t.d1) || !ends(w.p22, t.s2, t.d2) || !ends(w.p12, t.s1, t.d2) || !ends(w.p21, t.s2, t.d1))
    return false;
  if (!ends(w.shared, w.u0, w.u1)) return false;
  if ((w.p11.mask() & w.p22.mask()) != w.shared.mask()) return false;
  if (w.p12.mask().intersects(w.p21.mask())) return false;
  return !w.p12.mask().intersects(w.shared.mask()) && !w.p21.mask().intersects(w.shared.mask());
}

bool grail_valid(const LayeredNetwork& net, const GrailWitness& w) {
  const auto& t = net.terminals();
  const NodeIndex from = w.mirrored ? t.s1 : t.s2;
  const NodeIndex to = w.mirrored ? t.d1 : t.d2;
  const Path& holds_wa = w.mirrored ? w.p21 : w.p12;
  const Path& holds_wb = w.mirrored ? w.p12 : w.p21;
  if (w.p12.empty() || w.p21.empty()) return false;
  if (w.p12.front() != t.s1 || w.p12.back() != t.d2 || w.p21.front() != t.s2 || w.p21.back() != t.d1) return false;
  if (w.p12.mask().intersects(w.p21.mask())) return false;
  if (!holds_wa.contains(w.wa) || !holds_wb.contains(w.wb)) return false;
  const auto ends = [](const Path& p, NodeIndex a, NodeIndex b) { return !p.empty() && p.front() == a && p.back() == b; };
  return ends(w.to_wa, from, w.wa) && ends(w.wa_to_wb, w.wa, w.wb) && ends(w.from_wb, w.wb, to);
}

// ---------------------------------------------------------------- subnetwork search for B′

namespace {

template <class Visit>
bool combinations(const std::vector<NodeIndex>& pool, std::size_t k, Visit&& visit) {
  const std::size_t n = pool.size();
  if (k > n) return false;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    NodeSet chosen;
    for (std::size_t i : idx) chosen.insert(pool[i]);
    if (visit(chosen)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

bool cross_candidate(const LayeredNetwork& net, const NodeSet& s) {
  const auto& t = net.terminals();
  if (!reachable_within(net, t.s1, t.d1, s) || !reachable_within(net, t.s2, t.d2, s)) return false;
  if (find_unicast_pair(net, s)) return false;
  return !detect_case_A(net, s);
}

}  // namespace

CrossSearch find_cross_subnetwork(const LayeredNetwork& net, std::size_t max_pool) {
  CrossSearch out;
  const NodeSet terminals = net.terminal_set();
  const std::vector<NodeIndex> pool = (net.all() - terminals).to_vector();
  if (pool.size() > max_pool) {
    out.exhaustive = false;
    std::vector<NodeSet> candidates;
    if (auto b = detect_butterfly(net))
      candidates.push_back(b->p11.mask() | b->p22.mask() | b->p12.mask() | b->p21.mask());
    if (auto g = detect_grail(net)) candidates.push_back(g->nodes());
    candidates.push_back(net.all());
    for (const auto& s : candidates)
      if (cross_candidate(net, s | terminals)) {
        out.subset = s | terminals;
        break;
      }
    return out;
  }
  for (std::size_t k = 0; k <= pool.size(); ++k) {
    const bool found = combinations(pool, k, [&](const NodeSet& extra) {
      if (!cross_candidate(net, terminals | extra)) return false;
      out.subset = terminals | extra;
      return true;
    });
    if (found) break;
  }
  return out;
}

// ---------------------------------------------------------------- C sub-case witnesses

namespace {

bool cut(const LayeredNetwork& net, const NodeSet& removed, NodeIndex from, NodeIndex to) {
  return !reachable_within(net, from, to, net.all() - removed);
}

}  // namespace

PropertyReport c1_properties(const LayeredNetwork& g, const C1Witness& w) {
  const auto& t = g.terminals();
  PropertyReport r;
  r.results.emplace_back("structure", w.p11.contains(w.v4) && w.p22.contains(w.v3) && g.has_edge(w.v3, w.v4) &&
                                          g.has_edge(w.v2, w.v0) && w.p22.contains(w.v0) && w.p11.contains(w.v5) &&
                                          g.has_edge(w.v5, w.v6) && !w.p22.contains(w.v2));
  r.results.emplace_back("P1", cut(g, {w.v2}, t.s1, t.d2) && cut(g, {w.v0}, t.s1, t.d2));
  r.results.emplace_back("P2", cut(g, {w.v5}, t.s1, t.d2) && cut(g, {w.v6}, t.s1, t.d2));
  bool p3 = true;
  for (NodeIndex a : {w.v6, w.v2})
    for (NodeIndex b : {w.v3, w.v4}) p3 = p3 && cut(g, {a, b}, t.s2, t.d1);
  r.results.emplace_back("P3", p3);
  r.results.emplace_back("P4", cut(g, {w.v0}, t.s1, t.d2) && cut(g, {w.v0}, t.s2, t.d2));
  r.results.emplace_back("P5", cut(g, {w.v5}, t.s1, t.d1) && cut(g, {w.v5}, t.s1, t.d2));
  r.results.emplace_back("P6", cut(g, {w.v2, w.v3}, t.s1, t.d2) && cut(g, {w.v2, w.v3}, t.s2, t.d2));
  r.results.emplace_back("P7", cut(g, {w.v2, w.v4}, t.s1, t.d1) && cut(g, {w.v2, w.v4}, t.s2, t.d1));
  r.results.emplace_back("P8", cut(g, {w.v6}, t.s1, w.v2) && cut(g, {w.v6}, t.s2, w.v2));
  return r;
}

PropertyReport c2_properties(const LayeredNetwork& g, const C2Witness& w) {
  const auto& t = g.terminals();
  PropertyReport r;
  r.results.emplace_back("structure", g.has_edge(w.v2, w.v1) && w.p22.contains(w.v2) && w.z11.contains(w.v1) &&
                                          g.has_edge(w.v3, w.v4) && w.q11.contains(w.v3) && w.p22.contains(w.v4));
  r.results.emplace_back("P1", cut(g, {w.v2}, t.s2, t.d1) && cut(g, {w.v1}, t.s2, t.d1));
  r.results.emplace_back("P2", !w.q11.contains(w.v1) && !w.q11.mask().intersects(w.p22.mask()));
  r.results.emplace_back("P3", direct_interference(g, w.p22, w.q11) == 0 && direct_interference(g, w.q11, w.p22) == 1);
  r.results.emplace_back("P4", cut(g, {w.v3}, t.s1, t.d2) && cut(g, {w.v4}, t.s1, t.d2));
  r.results.emplace_back("P5", !w.z11.contains(w.v3) && !w.z11.mask().intersects(w.p22.mask()));
  r.results.emplace_back("P6", direct_interference(g, w.p22, w.z11) == 1 && direct_interference(g, w.z11, w.p22) == 0);
  r.results.emplace_back("P7", cut(g, {w.v4}, t.s1, t.d2) && cut(g, {w.v4}, t.s2, t.d2));
  r.results.emplace_back("P8", cut(g, {w.v2}, t.s2, t.d1) && cut(g, {w.v2}, t.s2, t.d2));
  r.results.emplace_back("P9", cut(g, {w.v1, w.v3}, t.s1, t.d1) && cut(g, {w.v1, w.v3}, t.s2, t.d1));
  r.results.emplace_back("P10", !reachable(g, w.v1, w.v3));
  return r;
}

std::optional<C1Witness> build_c1_witness(const LayeredNetwork& g, const Path& p11, const Path& p22) {
  const auto& t = g.terminals();
  const InterferenceProfile prof = interference_profile(g, g.all(), p11, p22);
  const auto& on_first = prof.witnesses[0];
  const auto direct = std::find_if(on_first.begin(), on_first.end(), [](const auto& w) { return w.direct; });
  if (direct == on_first.end()) return std::nullopt;
  std::optional<C1Witness> fallback;
  for (const auto& ind : on_first) {
    if (ind.direct) continue;
    for (const auto& feeder : enumerate_paths(g, t.s2, ind.interferer, g.all() - p11.mask(), 64)) {
      NodeIndex vm = feeder.front();
      for (NodeIndex v : feeder.nodes())
        if (p22.contains(v)) vm = v;
      const Path seg = slice(g, feeder, vm, ind.interferer);
      const NodeSet star = p11.mask() | p22.mask() | seg.mask();
      const InterferenceProfile sp = interference_profile(g, star, p11, p22);
      if (sp.count(Pair::second) != 1) continue;
      const auto& w2 = sp.witnesses[1].front();
      if (!seg.contains(w2.interferer) || w2.interferer == vm) continue;
      C1Witness w;
      w.p11 = p11;
      w.p22 = p22;
      w.v1 = ind.interferer;
      w.v3 = direct->interferer;
      w.v4 = direct->target;
      w.vm = vm;
      w.v2 = w2.interferer;
      w.v0 = w2.target;
      w.feeder = feeder;
      w.s1_to_v2 = w2.feeder;
      for (std::size_t k = 0; k + 1 < w.s1_to_v2.size(); ++k)
        if (p11.contains(w.s1_to_v2[k])) {
          w.v5 = w.s1_to_v2[k];
          w.v6 = w.s1_to_v2[k + 1];
        }
      w.certified = c1_properties(g, w).all_hold();
      if (w.certified) return w;
      if (!fallback) fallback = w;
    }
  }
  return fallback;
}

std::optional<C2Witness> build_c2_witness(const LayeredNetwork& g, const Path& q11, const Path& z11, const Path& p22) {
  C2Witness w{false, q11, z11, p22, 0, 0, 0, 0, false};
  std::vector<std::pair<NodeIndex, NodeIndex>> into_z, into_p;
  for (NodeIndex v : p22.nodes())
    for (NodeIndex h : g.outputs(v))
      if (z11.contains(h)) into_z.emplace_back(v, h);
  for (NodeIndex v : q11.nodes())
    for (NodeIndex h : g.outputs(v))
      if (p22.contains(h)) into_p.emplace_back(v, h);
  if (into_z.empty() || into_p.empty()) return std::nullopt;
  std::tie(w.v2, w.v1) = into_z.front();
  std::tie(w.v3, w.v4) = into_p.front();
  w.certified = into_z.size() == 1 && into_p.size() == 1 && c2_properties(g, w).all_hold();
  return w;
}

PropertyReport verify_structural_properties(const LayeredNetwork& net, const Classification& c) {
  if (const auto* w = std::get_if<C1Witness>(&c.witness)) return c1_properties(w->swapped ? swap_pairs(net) : net, *w);
  if (const auto* w = std::get_if<C2Witness>(&c.witness)) return c2_properties(w->swapped ? swap_pairs(net) : net, *w);
  return {};
}

// ---------------------------------------------------------------- sum-DoF classification

namespace {

struct PairList {
  std::vector<PathPair> pairs;
  bool complete = true;
};

PairList disjoint_pairs(const LayeredNetwork& net, const ClassifierLimits& limits) {
  const auto& t = net.terminals();
  PairList out;
  if (count_paths(net, t.s1, t.d1, net.all()) > limits.max_paths) out.complete = false;
  for (const auto& p11 : enumerate_paths(net, t.s1, t.d1, net.all(), limits.max_paths)) {
    const NodeSet rest = net.all() - p11.mask();
    if (count_paths(net, t.s2, t.d2, rest) > limits.max_paths) out.complete = false;
    for (auto& p22 : enumerate_paths(net, t.s2, t.d2, rest, limits.max_paths)) {
      if (out.pairs.size() >= limits.max_pairs) {
        out.complete = false;
        return out;
      }
      out.pairs.emplace_back(p11, std::move(p22));
    }
  }
  return out;
}

struct COrientation {
  bool swapped;
  Path p11, p22;
};

std::optional<COrientation> c1_shape(const LayeredNetwork& net, const PathPair& pair) {
  const auto counts = interference_counts(net, net.all(), pair.first.mask(), pair.second.mask());
  const int d1 = direct_interference(net, pair.second, pair.first);
  const int d2 = direct_interference(net, pair.first, pair.second);
  if (counts[0] >= 2 && d1 == 1 && counts[1] == 1 && d2 == 0) return COrientation{false, pair.first, pair.second};
  if (counts[1] >= 2 && d2 == 1 && counts[0] == 1 && d1 == 0) return COrientation{true, pair.second, pair.first};
  return std::nullopt;
}

std::optional<C2Witness> search_c2_bundle(const LayeredNetwork& g, const ClassifierLimits& limits) {
  const auto& t = g.terminals();
  std::optional<C2Witness> fallback;
  for (const auto& p22 : enumerate_paths(g, t.s2, t.d2, g.all(), limits.max_paths)) {
    std::vector<Path> qs, zs;
    for (auto& p : enumerate_paths(g, t.s1, t.d1, g.all() - p22.mask(), limits.max_paths)) {
      const int into_p = direct_interference(g, p, p22), into_self = direct_interference(g, p22, p);
      if (into_self == 0 && into_p == 1) qs.push_back(p);
      if (into_self == 1 && into_p == 0) zs.push_back(std::move(p));
    }
    for (const auto& q : qs)
      for (const auto& z : zs) {
        auto w = build_c2_witness(g, q, z, p22);
        if (!w) continue;
        if (w->certified) return w;
        if (!fallback) fallback = w;
      }
  }
  return fallback;
}

Classification fallback_or_indeterminate(const LayeredNetwork& net, const ClassifierLimits& limits,
                                         const std::string& why) {
  if (limits.brute_force_fallback && net.size() <= kBruteForceMaxNodes) {
    Classification c = brute_force_classify(net);
    c.note = why + "; resolved by exhaustive enumeration";
    return c;
  }
  Classification c;
  c.kind = DofCase::indeterminate;
  c.note = why;
  return c;
}

}  // namespace

Classification classify_sum_dof(const LayeredNetwork& net, const ClassifierLimits& limits) {
  const auto& t = net.terminals();
  Classification out;
  const bool first = reachable(net, t.s1, t.d1), second = reachable(net, t.s2, t.d2);
  if (!first || !second) {
    out.kind = DofCase::disconnected;
    out.sum_dof = Dof{(first ? 1 : 0) + (second ? 1 : 0), 1};
    return out;
  }
  if (auto a = detect_case_A(net)) {
    out.kind = a->prime ? DofCase::A_prime : DofCase::A;
    out.sum_dof = Dof{1, 1};
    out.witness = *a;
    return out;
  }
  const PairList pairs = disjoint_pairs(net, limits);
  bool exhaustive = pairs.complete;
  for (const auto& [p11, p22] : pairs.pairs) {
    const SubsetSearch s = find_manageable_subset(net, p11, p22, ManageMode::both);
    exhaustive = exhaustive && s.exhaustive;
    if (s.subset) {
      out.kind = DofCase::B;
      out.sum_dof = Dof{2, 1};
      out.witness = ManageableWitness{p11, p22, *s.subset};
      return out;
    }
  }
  const CrossSearch cross = find_cross_subnetwork(net, limits.max_cross_pool);
  exhaustive = exhaustive && cross.exhaustive;
  if (cross.subset) {
    CrossWitness w{*cross.subset, detect_butterfly(net, *cross.subset), std::nullopt};
    if (!w.butterfly) w.grail = detect_grail(net, *cross.subset);
    out.kind = DofCase::B_prime;
    out.sum_dof = Dof{2, 1};
    if (!w.butterfly && !w.grail) out.note = "no butterfly or grail located in the cross subnetwork";
    out.witness = std::move(w);
    return out;
  }
  if (!exhaustive) return fallback_or_indeterminate(net, limits, "search caps reached");
  if (pairs.pairs.empty()) throw InvariantViolation("connected network without case A, disjoint pair or cross subnetwork");

  out.sum_dof = Dof{3, 2};
  std::optional<C1Witness> c1_fallback;
  for (const auto& pair : pairs.pairs) {
    const auto shape = c1_shape(net, pair);
    if (!shape) continue;
    const LayeredNetwork oriented = shape->swapped ? swap_pairs(net) : net;
    auto w = build_c1_witness(oriented, shape->p11, shape->p22);
    if (!w) {
      if (!c1_fallback) c1_fallback = C1Witness{shape->swapped, shape->p11, shape->p22, 0, 0, 0, 0, 0, 0, 0, 0, {}, {}, false};
      continue;
    }
    w->swapped = shape->swapped;
    if (w->certified) {
      out.kind = DofCase::C1;
      out.witness = *w;
      return out;
    }
    if (!c1_fallback) c1_fallback = w;
  }
  if (c1_fallback) {
    out.kind = DofCase::C1;
    out.witness = *c1_fallback;
    out.note = "no pair produced a witness satisfying every structural property";
    return out;
  }
  out.kind = DofCase::C2;
  std::optional<C2Witness> bundle = search_c2_bundle(net, limits);
  if (!bundle || !bundle->certified) {
    auto mirrored = search_c2_bundle(swap_pairs(net), limits);
    if (mirrored && (!bundle || mirrored->certified)) {
      mirrored->swapped = true;
      bundle = mirrored;
    }
  }
  if (bundle) out.witness = *bundle;
  if (!bundle || !bundle->certified) out.note = "no witness satisfying every structural property";
  return out;
}

// ---------------------------------------------------------------- region classification

namespace {

std::optional<RegionWitness> single_pair_manageable(const LayeredNetwork& net, const ClassifierLimits& limits) {
  for (const auto& [p11, p22] : disjoint_pairs(net, limits).pairs) {
    const auto a = find_manageable_subset(net, p11, p22, ManageMode::first_only);
    if (!a.subset) continue;
    const auto b = find_manageable_subset(net, p11, p22, ManageMode::second_only);
    if (!b.subset) continue;
    return RegionWitness{p11, p22, *a.subset, *b.subset, std::nullopt};
  }
  return std::nullopt;
}

// Q, Z disjoint from a common companion path, manageable for the first and second session respectively.
std::optional<C2Witness> qz_system(const LayeredNetwork& g, const ClassifierLimits& limits) {
  const auto& t = g.terminals();
  std::optional<C2Witness> fallback;
  for (const auto& p22 : enumerate_paths(g, t.s2, t.d2, g.all(), limits.max_paths)) {
    std::vector<Path> qs, zs;
    for (auto& p : enumerate_paths(g, t.s1, t.d1, g.all() - p22.mask(), limits.max_paths)) {
      if (find_manageable_subset(g, p, p22, ManageMode::first_only).subset) qs.push_back(p);
      if (find_manageable_subset(g, p, p22, ManageMode::second_only).subset) zs.push_back(std::move(p));
    }
    for (const auto& q : qs)
      for (const auto& z : zs) {
        auto w = build_c2_witness(g, q, z, p22);
        if (w && w->certified) return w;
        if (!fallback) fallback = w ? *w : C2Witness{false, q, z, p22, 0, 0, 0, 0, false};
      }
  }
  return fallback;
}

}  // namespace

RegionClassification classify_region(const LayeredNetwork& net, const ClassifierLimits& limits) {
  RegionClassification out;
  out.sum = classify_sum_dof(net, limits);
  switch (out.sum.kind) {
    case DofCase::disconnected: {
      const auto& t = net.terminals();
      out.region = RegionKind::degenerate;
      if (reachable(net, t.s1, t.d1)) out.vertices.emplace_back(1.0, 0.0);
      if (reachable(net, t.s2, t.d2)) out.vertices.emplace_back(0.0, 1.0);
      if (out.vertices.empty()) out.vertices.emplace_back(0.0, 0.0);
      return out;
    }
    case DofCase::indeterminate:
      out.region = RegionKind::degenerate;
      out.note = "sum classification indeterminate";
      return out;
    case DofCase::A:
    case DofCase::A_prime:
      out.region = RegionKind::I;
      out.vertices = {{1.0, 0.0}, {0.0, 1.0}};
      return out;
    case DofCase::B:
    case DofCase::B_prime:
      out.region = RegionKind::II;
      out.vertices = {{1.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
      return out;
    case DofCase::C1:
    case DofCase::C2: break;
  }
  if (auto w = single_pair_manageable(net, limits)) {
    out.region = RegionKind::III;
    out.vertices = {{1.0, 0.5}, {0.5, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
    out.witness = std::move(w);
    return out;
  }
  if (auto q = qz_system(net, limits)) {
    out.region = RegionKind::IV;
    out.vertices = {{1.0, 0.5}, {1.0, 0.0}, {0.0, 1.0}};
    out.witness = RegionWitness{{}, {}, {}, {}, q};
    return out;
  }
  if (auto q = qz_system(swap_pairs(net), limits)) {
    q->swapped = true;
    out.region = RegionKind::V;
    out.vertices = {{0.5, 1.0}, {1.0, 0.0}, {0.0, 1.0}};
    out.witness = RegionWitness{{}, {}, {}, {}, q};
    out.note = "labeled by exchanging the pairs";
    return out;
  }
  out.region = RegionKind::degenerate;
  out.note = "no region witness found for a case-C network";
  return out;
}

}  // namespace tudof
