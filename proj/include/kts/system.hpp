#pragma once

// Plain data shared by pipeline, verify and serialization: a Kirkman triple
// system over G plus three fixed points, and the tree of construction steps.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kts/groups.hpp"

namespace kts {

struct TraceNode {
  // "catalog", "direct", "empty", "matrix", "compose", "chain", "pertinent-union", "transport"
  std::string step;
  std::string detail;
  std::string group;
  std::string relative;
  std::vector<std::string> catalog_ids;
  std::string digest;
  std::vector<TraceNode> children;
};

using Triple = std::array<int32_t, 3>;

// Points 0..|G|-1 are the elements of G in index order, followed by the three
// fixed points. Blocks are sorted triples of point indices in increasing
// order; each class lists block indices in increasing order, classes sorted.
struct KirkmanSystem {
  int64_t order = 0;
  Group group;
  std::vector<std::string> points;
  std::vector<Triple> blocks;
  std::vector<std::vector<int32_t>> resolution;
  std::optional<TraceNode> trace;

  int64_t group_order() const { return order - 3; }
};

inline constexpr const char* kInfinityLabels[3] = {"inf1", "inf2", "inf3"};

}  // namespace kts
