#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tudof/interference.hpp"
#include "tudof/network.hpp"
#include "tudof/paths.hpp"

namespace tudof {

struct Dof {
  int num = 0;
  int den = 1;
  double value() const { return static_cast<double>(num) / den; }
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const Dof& a, const Dof& b) { return a.num * b.den == b.num * a.den; }
};

enum class DofCase { disconnected, A, A_prime, B, B_prime, C1, C2, indeterminate };
std::string to_string(DofCase c);

// Case A: removing `node` cuts d_i from both sources and s_ī from both destinations.
// Case A′: removing `head` cuts d_i from both sources and removing `tail` cuts s_ī from both destinations.
struct CaseAWitness {
  bool prime = false;
  Pair pair = Pair::first;
  NodeIndex node = 0;
  NodeIndex tail = 0, head = 0;
};

struct ManageableWitness {
  Path p11, p22;
  NodeSet subset;
};

// Shared segment u0 ⇝ u1 of p11 and p22, with disjoint cross paths avoiding it.
struct ButterflyWitness {
  NodeIndex u0 = 0, u1 = 0;
  Path shared, p11, p22, p12, p21;
};

// Disjoint cross paths with s2 ⇝ wa ∈ p12, wa ⇝ wb ∈ p21, wb ⇝ d2.
// When mirrored the pair roles are exchanged: s1 ⇝ wa ∈ p21, wa ⇝ wb ∈ p12, wb ⇝ d1.
struct GrailWitness {
  bool mirrored = false;
  Path p12, p21;
  NodeIndex wa = 0, wb = 0;
  Path to_wa, wa_to_wb, from_wb;

  NodeSet nodes() const { return p12.mask() | p21.mask() | to_wa.mask() | wa_to_wb.mask() | from_wb.mask(); }
};

struct CrossWitness {
  NodeSet subset;  // induced subnetwork with no disjoint unicast pair
  std::optional<ButterflyWitness> butterfly;
  std::optional<GrailWitness> grail;
};

// Node names of the first C sub-case; all refer to the oriented network (pairs exchanged when `swapped`).
struct C1Witness {
  bool swapped = false;
  Path p11, p22;
  NodeIndex v0 = 0, v1 = 0, v2 = 0, v3 = 0, v4 = 0, v5 = 0, v6 = 0, vm = 0;
  Path feeder;   // s2 ⇝ v1 avoiding p11
  Path s1_to_v2; // inside p11 ∪ p22 ∪ feeder[vm, v1], avoiding p22
  bool certified = false;
};

// Paths and edges (v2,v1), (v3,v4) of the second C sub-case, in the oriented network.
struct C2Witness {
  bool swapped = false;
  Path q11, z11, p22;
  NodeIndex v1 = 0, v2 = 0, v3 = 0, v4 = 0;
  bool certified = false;
};

using CaseWitness = std::variant<std::monostate, CaseAWitness, ManageableWitness, CrossWitness, C1Witness, C2Witness>;

struct Classification {
  DofCase kind = DofCase::indeterminate;
  Dof sum_dof;
  CaseWitness witness;
  std::string note;
};

enum class RegionKind { degenerate, I, II, III, IV, V };
std::string to_string(RegionKind r);

struct RegionWitness {
  Path p11, p22;                         // III: pair manageable for each session separately
  NodeSet first_subset, second_subset;
  std::optional<C2Witness> paths;        // IV/V: Q, Z and the shared companion path
};

struct RegionClassification {
  RegionKind region = RegionKind::degenerate;
  std::vector<std::pair<double, double>> vertices;  // nonzero extreme points
  std::optional<RegionWitness> witness;
  Classification sum;
  std::string note;

  double max_sum() const;
};

std::optional<CaseAWitness> detect_case_A(const LayeredNetwork& net);
std::optional<CaseAWitness> detect_case_A(const LayeredNetwork& net, const NodeSet& within);

std::optional<ButterflyWitness> detect_butterfly(const LayeredNetwork& net, const NodeSet& within);
std::optional<ButterflyWitness> detect_butterfly(const LayeredNetwork& net);
std::optional<GrailWitness> detect_grail(const LayeredNetwork& net, const NodeSet& within);
std::optional<GrailWitness> detect_grail(const LayeredNetwork& net);
bool butterfly_valid(const LayeredNetwork& net, const ButterflyWitness& w);
bool grail_valid(const LayeredNetwork& net, const GrailWitness& w);

struct ClassifierLimits {
  std::size_t max_paths = 4096;           // per endpoint pair
  std::size_t max_pairs = 200000;         // disjoint pairs examined
  std::size_t max_cross_pool = 22;        // non-terminal nodes for the cross-subnetwork search
  bool brute_force_fallback = true;
};

Classification classify_sum_dof(const LayeredNetwork& net, const ClassifierLimits& limits = {});
RegionClassification classify_region(const LayeredNetwork& net, const ClassifierLimits& limits = {});

// Smallest S ⊇ terminals whose induced subnetwork is connected for both pairs, has no disjoint
// unicast pair and no case-A/A′ structure. nullopt in `subset` when none; `exhaustive` false when the pool is too big.
struct CrossSearch {
  std::optional<NodeSet> subset;
  bool exhaustive = true;
};
CrossSearch find_cross_subnetwork(const LayeredNetwork& net, std::size_t max_pool);

std::optional<C1Witness> build_c1_witness(const LayeredNetwork& oriented, const Path& p11, const Path& p22);
std::optional<C2Witness> build_c2_witness(const LayeredNetwork& oriented, const Path& q11, const Path& z11,
                                          const Path& p22);

struct PropertyReport {
  std::vector<std::pair<std::string, bool>> results;
  bool all_hold() const;
};

// Graph predicates for the C sub-case witnesses. `net` is the network as given; swapped witnesses are
// evaluated on the exchanged network.
PropertyReport verify_structural_properties(const LayeredNetwork& net, const Classification& c);
PropertyReport c1_properties(const LayeredNetwork& oriented, const C1Witness& w);
PropertyReport c2_properties(const LayeredNetwork& oriented, const C2Witness& w);

// Reference classifier resolving every existential by explicit enumeration. Throws SizeLimitError above 14 nodes.
inline constexpr std::size_t kBruteForceMaxNodes = 14;
Classification brute_force_classify(const LayeredNetwork& net);
RegionKind brute_force_region(const LayeredNetwork& net);

}  // namespace tudof
