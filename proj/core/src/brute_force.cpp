#include <algorithm>
#include <functional>

#include "tudof/classifier.hpp"
#include "tudof/errors.hpp"

// Reference classifier: plain depth-first path enumeration and subset loops, sharing no search code
// with the main classifier.

namespace tudof {

namespace {

using NodeList = std::vector<NodeIndex>;

class Naive {
 public:
  explicit Naive(const LayeredNetwork& net) : net_(net), t_(net.terminals()) {}

  bool reach(NodeIndex u, NodeIndex v, const NodeSet& within) const {
    if (!within.contains(u) || !within.contains(v)) return false;
    if (u == v) return true;
    for (NodeIndex w : net_.outputs(u))
      if (within.contains(w) && net_.layer(w) <= net_.layer(v) && reach(w, v, within)) return true;
    return false;
  }

  std::vector<NodeList> paths(NodeIndex u, NodeIndex v, const NodeSet& within) const {
    std::vector<NodeList> out;
    NodeList stack{u};
    std::function<void(NodeIndex)> go = [&](NodeIndex at) {
      if (at == v) {
        out.push_back(stack);
        return;
      }
      for (NodeIndex w : net_.outputs(at)) {
        if (!within.contains(w) || net_.layer(w) > net_.layer(v)) continue;
        stack.push_back(w);
        go(w);
        stack.pop_back();
      }
    };
    if (within.contains(u) && within.contains(v)) go(u);
    return out;
  }

  static NodeSet mask(const NodeList& p) {
    NodeSet s;
    for (NodeIndex v : p) s.insert(v);
    return s;
  }

  std::vector<std::pair<NodeList, NodeList>> disjoint_pairs(const NodeSet& within) const {
    std::vector<std::pair<NodeList, NodeList>> out;
    const auto first = paths(t_.s1, t_.d1, within);
    const auto second = paths(t_.s2, t_.d2, within);
    for (const auto& a : first)
      for (const auto& b : second)
        if (!mask(a).intersects(mask(b))) out.emplace_back(a, b);
    return out;
  }

  // 0: none, 1: a cut node, 2: a cut edge.
  int case_a(const NodeSet& within) const {
    const NodeList nodes = within.to_vector();
    auto dest_cut = [&](NodeIndex removed, NodeIndex d) {
      NodeSet w = within;
      w.erase(removed);
      return !reach(t_.s1, d, w) && !reach(t_.s2, d, w);
    };
    auto src_cut = [&](NodeIndex removed, NodeIndex s) {
      NodeSet w = within;
      w.erase(removed);
      return !reach(s, t_.d1, w) && !reach(s, t_.d2, w);
    };
    for (int i = 0; i < 2; ++i)
      for (NodeIndex v : nodes)
        if (dest_cut(v, i == 0 ? t_.d1 : t_.d2) && src_cut(v, i == 0 ? t_.s2 : t_.s1)) return 1;
    for (int i = 0; i < 2; ++i)
      for (NodeIndex a : nodes)
        for (NodeIndex b : nodes)
          if (net_.has_edge(a, b) && dest_cut(b, i == 0 ? t_.d1 : t_.d2) && src_cut(a, i == 0 ? t_.s2 : t_.s1))
            return 2;
    return 0;
  }

  // Interferers on `target` inside `subset`, found by looking for an explicit feeder path per candidate.
  int interferers(const NodeSet& subset, const NodeSet& target, NodeIndex source) const {
    int n = 0;
    const NodeSet allowed = subset - target;
    for (NodeIndex v : allowed.to_vector()) {
      bool hits = false;
      for (NodeIndex w : net_.outputs(v)) hits = hits || target.contains(w);
      if (hits && !paths(source, v, allowed).empty()) ++n;
    }
    return n;
  }

  int direct(const NodeList& companion, const NodeSet& target) const {
    int n = 0;
    for (NodeIndex v : companion) {
      bool hits = false;
      for (NodeIndex w : net_.outputs(v)) hits = hits || target.contains(w);
      if (hits) ++n;
    }
    return n;
  }

  template <class Pred>
  bool some_superset(const NodeSet& base, Pred&& pred) const {
    const NodeList pool = (net_.all() - base).to_vector();
    const std::size_t n = pool.size();
    for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
      NodeSet s = base;
      for (std::size_t k = 0; k < n; ++k)
        if (bits >> k & 1U) s.insert(pool[k]);
      if (pred(s)) return true;
    }
    return false;
  }

  bool manageable(const NodeList& p11, const NodeList& p22, int which) const {
    const NodeSet m11 = mask(p11), m22 = mask(p22);
    return some_superset(m11 | m22, [&](const NodeSet& s) {
      const int n1 = interferers(s, m11, t_.s2), n2 = interferers(s, m22, t_.s1);
      if (which == 0) return n1 != 1 && n2 != 1;
      return which == 1 ? n1 != 1 : n2 != 1;
    });
  }

  const LayeredNetwork& net_;
  Terminals t_;
};

bool qz_exists(const LayeredNetwork& g) {
  const Naive nv(g);
  const auto& t = g.terminals();
  for (const auto& p22 : nv.paths(t.s2, t.d2, g.all())) {
    bool q = false, z = false;
    for (const auto& p : nv.paths(t.s1, t.d1, g.all() - Naive::mask(p22))) {
      q = q || nv.manageable(p, p22, 1);
      z = z || nv.manageable(p, p22, 2);
    }
    if (q && z) return true;
  }
  return false;
}

}  // namespace

Classification brute_force_classify(const LayeredNetwork& net) {
  if (net.size() > kBruteForceMaxNodes)
    throw SizeLimitError("exhaustive classification refuses networks above " + std::to_string(kBruteForceMaxNodes) +
                         " nodes (got " + std::to_string(net.size()) + ")");
  const Naive nv(net);
  const auto& t = net.terminals();
  Classification out;
  const bool first = nv.reach(t.s1, t.d1, net.all()), second = nv.reach(t.s2, t.d2, net.all());
  if (!first || !second) {
    out.kind = DofCase::disconnected;
    out.sum_dof = Dof{(first ? 1 : 0) + (second ? 1 : 0), 1};
    return out;
  }
  if (const int a = nv.case_a(net.all()); a != 0) {
    out.kind = a == 1 ? DofCase::A : DofCase::A_prime;
    out.sum_dof = Dof{1, 1};
    return out;
  }
  const auto pairs = nv.disjoint_pairs(net.all());
  for (const auto& [p11, p22] : pairs)
    if (nv.manageable(p11, p22, 0)) {
      out.kind = DofCase::B;
      out.sum_dof = Dof{2, 1};
      return out;
    }
  const bool cross = nv.some_superset(net.terminal_set(), [&](const NodeSet& s) {
    return nv.reach(t.s1, t.d1, s) && nv.reach(t.s2, t.d2, s) && nv.disjoint_pairs(s).empty() && nv.case_a(s) == 0;
  });
  if (cross) {
    out.kind = DofCase::B_prime;
    out.sum_dof = Dof{2, 1};
    return out;
  }
  out.sum_dof = Dof{3, 2};
  out.kind = DofCase::C2;
  for (const auto& [p11, p22] : pairs) {
    const NodeSet m11 = Naive::mask(p11), m22 = Naive::mask(p22);
    const int n1 = nv.interferers(net.all(), m11, t.s2), n2 = nv.interferers(net.all(), m22, t.s1);
    const int d1 = nv.direct(p22, m11), d2 = nv.direct(p11, m22);
    if ((n1 >= 2 && d1 == 1 && n2 == 1 && d2 == 0) || (n2 >= 2 && d2 == 1 && n1 == 1 && d1 == 0)) {
      out.kind = DofCase::C1;
      break;
    }
  }
  return out;
}

RegionKind brute_force_region(const LayeredNetwork& net) {
  const Classification c = brute_force_classify(net);
  switch (c.kind) {
    case DofCase::disconnected:
    case DofCase::indeterminate: return RegionKind::degenerate;
    case DofCase::A:
    case DofCase::A_prime: return RegionKind::I;
    case DofCase::B:
    case DofCase::B_prime: return RegionKind::II;
    default: break;
  }
  const Naive nv(net);
  for (const auto& [p11, p22] : nv.disjoint_pairs(net.all()))
    if (nv.manageable(p11, p22, 1) && nv.manageable(p11, p22, 2)) return RegionKind::III;
  if (qz_exists(net)) return RegionKind::IV;
  if (qz_exists(swap_pairs(net))) return RegionKind::V;
  return RegionKind::degenerate;
}

}  // namespace tudof
