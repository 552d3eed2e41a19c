#pragma once

// Construction-agnostic checks of a Kirkman system. Only points, blocks,
// classes and the group descriptor are read; no family witness is consulted.

#include <string>
#include <utility>
#include <vector>

#include "kts/designkit.hpp"
#include "kts/system.hpp"

namespace kts {

struct Report {
  std::string name;
  bool ok = true;
  std::vector<std::pair<std::string, int64_t>> counts;
  int64_t violation_count = 0;
  std::vector<std::string> violations;  // first 10

  void fail(std::string msg);
  void count(const std::string& key, int64_t value);
  int64_t get(const std::string& key) const;  // -1 when absent
  std::string summary() const;
};

enum class VerifyLevel { Sts, Kts, Pyramidal, Full };
std::string to_string(VerifyLevel l);
// Throws MalformedInput.
VerifyLevel verify_level_from_string(const std::string& s);

// Blocks of three distinct points; every pair in exactly one block.
Report verify_sts(const KirkmanSystem& s);
// Every class partitions the points, every block in one class, (v-1)/2 classes.
Report verify_resolution(const KirkmanSystem& s);
// Points decode to the elements of G plus three labels; right translation by
// a generating set of G preserves blocks and classes and fixes the three
// labels; the orbit of the first point is all of G.
Report verify_3pyramidal(const KirkmanSystem& s);
// Each generator is a permutation preserving blocks and classes; counts
// "group_order" of the generated group (Schreier-Sims).
Report verify_automorphisms(const KirkmanSystem& s, const std::vector<std::vector<int32_t>>& generators);

// Sts: sts. Kts: + resolution. Pyramidal: + 3-pyramidal. Full: + the
// translations generate a group of order |G|, so the action is sharply transitive.
std::vector<Report> verify_system(const KirkmanSystem& s, VerifyLevel level);
bool all_ok(const std::vector<Report>& reports);

// Order of the permutation group generated on {0..degree-1}.
int64_t permutation_group_order(const std::vector<std::vector<int32_t>>& generators, size_t degree);

// G-orbit representatives (least block of each orbit) of the blocks avoiding
// the fixed points whose orbit has full length |G|.
std::vector<Block> extract_base_blocks(const KirkmanSystem& s);

}  // namespace kts
