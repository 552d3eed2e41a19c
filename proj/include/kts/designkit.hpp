#pragma once

// Difference families and difference matrices over the groups of groups.hpp,
// with brute-force predicates that serve as oracles for every construction.
//
// Differences are right differences x - y = x + (-y); development is by right
// translation B + g, which preserves them.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "kts/groups.hpp"

namespace kts {

using Block = std::array<Element, 3>;

enum class FamilyKind { DF, RDF, PRDF, DDDF, SDF };

std::string to_string(FamilyKind k);
FamilyKind family_kind_from_string(const std::string& s);

// {mu_s : s in <generators>} acting on ring atom `atom`.
struct MultiplierGroup {
  size_t atom = 0;
  std::vector<RingElement> generators;
  int64_t order = 1;
  bool strong = false;
};

struct FamilyWitness {
  Group group;
  FamilyKind kind = FamilyKind::DF;
  std::vector<Block> blocks;
  // Relative subgroup H given by generators; ignored when spread_x is set.
  std::vector<Element> relative;
  // {2^3,3} spread: the three order-2 subgroups and {0, x, -x}.
  std::optional<Element> spread_x;
  std::optional<Element> j;
  std::optional<Element> a;
  std::optional<Element> b;
  std::optional<Element> j_alpha;
  std::optional<Element> j_beta;
  // DDDF: blocks[i] + translates[i] is the strongly equivalent twin.
  std::vector<Element> translates;
  int lambda = 1;
  std::optional<MultiplierGroup> multipliers;
};

struct Diagnosis {
  bool ok = true;
  std::vector<std::string> problems;
  // Spread-variant resolvability: all (a, b) found; PRDF: all (j_alpha, j_beta).
  std::vector<std::pair<Element, Element>> solutions;

  void fail(std::string msg) {
    ok = false;
    if (problems.size() < 10) problems.push_back(std::move(msg));
  }
  explicit operator bool() const { return ok; }
  std::string summary() const;
};

// r - c for every ordered pair (r, c) of distinct positions.
std::vector<Element> delta(const Group& g, const Block& b);
std::vector<Element> delta_family(const Group& g, const std::vector<Block>& blocks);
std::vector<Element> flatten(const std::vector<Block>& blocks);

Block canonical_block(Block b);
// Sorted canonical blocks.
std::vector<Block> canonical_family(std::vector<Block> blocks);

// Members of H, or of the spread union.
std::vector<char> excluded_set(const FamilyWitness& w);

Diagnosis is_df(const FamilyWitness& w);
// Throws PreconditionError when j is absent or not an involution.
Diagnosis is_j_resolvable(const FamilyWitness& w);
Diagnosis is_pseudo_resolvable(const FamilyWitness& w);
// Throws PreconditionError when translates are missing.
Diagnosis is_doubly_disjoint(const FamilyWitness& w);
// Throws PreconditionError when |G| is odd or j is not an involution.
Diagnosis is_resolvable_sdf(const Group& g, const std::vector<Block>& blocks, int lambda, const Element& j);
// Each generator permutes the blocks; strong ones fix H pointwise.
Diagnosis check_multipliers(const FamilyWitness& w);
// The predicate matching w.kind, plus multipliers when declared.
Diagnosis check_declared(const FamilyWitness& w);

struct DifferenceMatrix {
  Group group;
  std::array<std::vector<Element>, 3> rows;
  std::optional<Element> j;  // splitting involution when declared
};

struct DmReport {
  bool valid = false;
  bool homogeneous = false;
  bool splittable = false;
  std::vector<std::string> problems;
};

// Throws PreconditionError on a malformed shape.
DmReport dm_check(const DifferenceMatrix& m);
// Any number of rows; pairwise right differences are permutations.
bool is_difference_matrix(const Group& h, const std::vector<std::vector<Element>>& rows);

}  // namespace kts
