#include "tudof/interference.hpp"

#include <algorithm>

#include "tudof/errors.hpp"

namespace tudof {

int InterferenceProfile::direct_count(Pair p) const {
  const auto& list = witnesses[static_cast<std::size_t>(p)];
  return static_cast<int>(std::count_if(list.begin(), list.end(), [](const auto& w) { return w.direct; }));
}

namespace {

void check_pair(const LayeredNetwork& net, const NodeSet& subset, const Path& p11, const Path& p22) {
  if (p11.mask().intersects(p22.mask())) throw ValidationError("paths are not disjoint");
  if (!subset.contains_all(p11.mask() | p22.mask())) throw ValidationError("subset does not contain both paths");
  const auto& t = net.terminals();
  if (p11.front() != t.s1 || p11.back() != t.d1 || p22.front() != t.s2 || p22.back() != t.d2)
    throw ValidationError("paths must join s1 to d1 and s2 to d2");
}

int count_on(const LayeredNetwork& net, const NodeSet& subset, const NodeSet& target, NodeIndex source) {
  const NodeSet reached = reach_forward(net, NodeSet{source}, subset - target);
  int n = 0;
  for (NodeIndex v : reached.to_vector())
    if (net.output_mask(v).intersects(target)) ++n;
  return n;
}

}  // namespace

std::array<int, 2> interference_counts(const LayeredNetwork& net, const NodeSet& subset, const NodeSet& p11,
                                       const NodeSet& p22) {
  const auto& t = net.terminals();
  return {count_on(net, subset, p11, t.s2), count_on(net, subset, p22, t.s1)};
}

InterferenceProfile interference_profile(const LayeredNetwork& net, const NodeSet& subset, const Path& p11,
                                         const Path& p22) {
  check_pair(net, subset, p11, p22);
  InterferenceProfile profile;
  profile.subset = subset;
  for (Pair p : {Pair::first, Pair::second}) {
    const Path& target = p == Pair::first ? p11 : p22;
    const Path& companion = p == Pair::first ? p22 : p11;
    const NodeSet within = subset - target.mask();
    const NodeIndex source = net.source(other(p));
    const NodeSet reached = reach_forward(net, NodeSet{source}, within);
    for (NodeIndex v : reached.to_vector()) {
      const NodeSet hits = net.output_mask(v) & target.mask();
      if (hits.empty()) continue;
      auto feeder = find_path(net, source, v, within);
      if (!feeder) throw InvariantViolation("reached node without a feeder path");
      profile.witnesses[static_cast<std::size_t>(p)].push_back(
          {v, hits.to_vector().front(), std::move(*feeder), companion.contains(v)});
    }
  }
  return profile;
}

int direct_interference(const LayeredNetwork& net, const Path& companion, const Path& target) {
  int n = 0;
  for (NodeIndex v : companion.nodes())
    if (net.output_mask(v).intersects(target.mask())) ++n;
  return n;
}

bool witness_valid(const LayeredNetwork& net, const NodeSet& subset, const Path& target, const Path& companion,
                   const InterfererWitness& w) {
  if (!subset.contains(w.interferer) || target.contains(w.interferer)) return false;
  if (!target.contains(w.target) || !net.has_edge(w.interferer, w.target)) return false;
  if (w.feeder.empty() || w.feeder.back() != w.interferer) return false;
  if (w.feeder.front() != companion.front()) return false;
  if (!subset.contains_all(w.feeder.mask()) || w.feeder.mask().intersects(target.mask())) return false;
  return w.direct == companion.contains(w.interferer);
}

bool counts_manageable(const std::array<int, 2>& counts, ManageMode mode) {
  switch (mode) {
    case ManageMode::both: return counts[0] != 1 && counts[1] != 1;
    case ManageMode::first_only: return counts[0] != 1;
    case ManageMode::second_only: return counts[1] != 1;
  }
  return false;
}

namespace {

// Visits k-subsets of `pool` in lexicographic order; stops when visit returns true.
template <class Visit>
bool for_each_combination(const std::vector<NodeIndex>& pool, std::size_t k, Visit&& visit) {
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

}  // namespace

SubsetSearch find_manageable_subset(const LayeredNetwork& net, const Path& p11, const Path& p22, ManageMode mode) {
  const NodeSet base = p11.mask() | p22.mask();
  check_pair(net, base, p11, p22);
  const std::vector<NodeIndex> pool = (net.all() - base).to_vector();
  SubsetSearch result;
  auto qualifies = [&](const NodeSet& s) {
    return counts_manageable(interference_counts(net, s, p11.mask(), p22.mask()), mode);
  };
  if (pool.size() <= kExhaustiveComplementLimit) {
    for (std::size_t k = 0; k <= pool.size(); ++k) {
      const bool found = for_each_combination(pool, k, [&](const NodeSet& extra) {
        if (!qualifies(base | extra)) return false;
        result.subset = base | extra;
        return true;
      });
      if (found) break;
    }
    return result;
  }
  // Large complement: try the path union, the whole network and the path union grown by feeder paths.
  result.exhaustive = false;
  std::vector<NodeSet> candidates{base, net.all()};
  const InterferenceProfile full = interference_profile(net, net.all(), p11, p22);
  for (const auto& list : full.witnesses)
    for (const auto& w : list) candidates.push_back(base | w.feeder.mask());
  for (const auto& a : full.witnesses[0])
    for (const auto& b : full.witnesses[1]) candidates.push_back(base | a.feeder.mask() | b.feeder.mask());
  std::sort(candidates.begin(), candidates.end(), [](const NodeSet& a, const NodeSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.to_vector() < b.to_vector();
  });
  for (const auto& s : candidates)
    if (qualifies(s)) {
      result.subset = s;
      break;
    }
  return result;
}

std::optional<KeyNode> find_key_node(const LayeredNetwork& net, const NodeSet& subset, const Path& path, Pair pair) {
  const NodeIndex cross_source = net.source(other(pair));
  const NodeIndex dest = net.destination(pair);
  if (!reachable_within(net, cross_source, dest, subset)) return std::nullopt;
  for (NodeIndex v : path.nodes()) {
    NodeSet without = subset;
    without.erase(v);
    if (!reachable_within(net, cross_source, dest, without)) return KeyNode{v, pair, net.layer(v) - 1};
  }
  return std::nullopt;
}

KeyNodeWitness key_node_witnesses(const LayeredNetwork& net, const NodeSet& subset, const KeyNode& key) {
  const auto& t = net.terminals();
  std::vector<NodeIndex> inputs;
  for (NodeIndex u : net.inputs(key.node))
    if (subset.contains(u)) inputs.push_back(u);
  NodeSet without = subset;
  without.erase(key.node);
  std::optional<KeyNodeWitness> out;
  for (std::size_t a = 0; a < inputs.size() && !out; ++a)
    for (std::size_t b = 0; b < inputs.size() && !out; ++b) {
      if (a == b) continue;
      auto pair = find_disjoint_paths(net, {t.s1, t.s2}, {inputs[a], inputs[b]}, without);
      if (!pair) continue;
      std::vector<NodeIndex> n1(pair->first.nodes().begin(), pair->first.nodes().end());
      std::vector<NodeIndex> n2(pair->second.nodes().begin(), pair->second.nodes().end());
      n1.push_back(key.node);
      n2.push_back(key.node);
      out = KeyNodeWitness{{Path(net, std::move(n1)), Path(net, std::move(n2))}, {}};
    }
  if (!out) throw InvariantViolation("no pair of paths meeting only at key node " + net.id(key.node));
  const NodeIndex cross_source = net.source(other(key.pair));
  for (NodeIndex u : inputs)
    if (reachable_within(net, cross_source, u, subset)) out->reached_inputs.push_back(u);
  if (out->reached_inputs.size() < 2)
    throw InvariantViolation("fewer than two inputs of key node " + net.id(key.node) + " reached by the cross source");
  return *out;
}

}  // namespace tudof
