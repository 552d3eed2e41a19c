#include "kts/verify.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include "kts/errors.hpp"

namespace kts {

void Report::fail(std::string msg) {
  ok = false;
  ++violation_count;
  if (violations.size() < 10) violations.push_back(std::move(msg));
}

void Report::count(const std::string& key, int64_t value) {
  for (auto& kv : counts)
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  counts.emplace_back(key, value);
}

int64_t Report::get(const std::string& key) const {
  for (const auto& kv : counts)
    if (kv.first == key) return kv.second;
  return -1;
}

std::string Report::summary() const {
  std::string s = name + (ok ? ": pass" : ": FAIL");
  for (const auto& [k, v] : counts) s += ", " + k + "=" + std::to_string(v);
  if (!ok) {
    s += ", violations=" + std::to_string(violation_count);
    for (const auto& v : violations) s += "; " + v;
  }
  return s;
}

std::string to_string(VerifyLevel l) {
  switch (l) {
    case VerifyLevel::Sts: return "sts";
    case VerifyLevel::Kts: return "kts";
    case VerifyLevel::Pyramidal: return "pyramidal";
    case VerifyLevel::Full: return "full";
  }
  return "?";
}

VerifyLevel verify_level_from_string(const std::string& s) {
  for (auto l : {VerifyLevel::Sts, VerifyLevel::Kts, VerifyLevel::Pyramidal, VerifyLevel::Full})
    if (to_string(l) == s) return l;
  throw MalformedInput("unknown verify level '" + s + "'");
}

namespace {

using Perm = std::vector<int32_t>;

uint64_t key_of(Triple t) {
  std::sort(t.begin(), t.end());
  return (static_cast<uint64_t>(t[0]) << 42) | (static_cast<uint64_t>(t[1]) << 21) | static_cast<uint64_t>(t[2]);
}

bool triple_ok(const Triple& t, int64_t v) {
  for (int32_t p : t)
    if (p < 0 || p >= v) return false;
  return t[0] != t[1] && t[0] != t[2] && t[1] != t[2];
}

// Sorted block keys with their indices.
class BlockIndex {
 public:
  explicit BlockIndex(const KirkmanSystem& s) {
    keys_.reserve(s.blocks.size());
    for (size_t i = 0; i < s.blocks.size(); ++i) keys_.emplace_back(key_of(s.blocks[i]), static_cast<int32_t>(i));
    std::sort(keys_.begin(), keys_.end());
  }
  int32_t find(const Triple& t) const {
    const uint64_t k = key_of(t);
    auto it = std::lower_bound(keys_.begin(), keys_.end(), std::make_pair(k, int32_t{-1}));
    return it != keys_.end() && it->first == k ? it->second : -1;
  }

 private:
  std::vector<std::pair<uint64_t, int32_t>> keys_;
};

// Class of each block; -1 when unassigned or out of range.
std::vector<int32_t> class_of(const KirkmanSystem& s) {
  std::vector<int32_t> c(s.blocks.size(), -1);
  for (size_t k = 0; k < s.resolution.size(); ++k)
    for (int32_t b : s.resolution[k])
      if (b >= 0 && static_cast<size_t>(b) < c.size()) c[static_cast<size_t>(b)] = static_cast<int32_t>(k);
  return c;
}

// Checks that `perm` maps blocks to blocks and classes to classes.
void check_action(const KirkmanSystem& s, const BlockIndex& index, const std::vector<int32_t>& cls, const Perm& perm,
                  const std::string& label, Report& r) {
  const int64_t v = s.order;
  if (static_cast<int64_t>(perm.size()) != v) {
    r.fail(label + ": not a map on " + std::to_string(v) + " points");
    return;
  }
  std::vector<char> hit(static_cast<size_t>(v), 0);
  for (int32_t p : perm) {
    if (p < 0 || p >= v || hit[static_cast<size_t>(p)]) {
      r.fail(label + ": not a permutation");
      return;
    }
    hit[static_cast<size_t>(p)] = 1;
  }
  std::vector<int32_t> image(s.blocks.size(), -1);
  for (size_t b = 0; b < s.blocks.size(); ++b) {
    const Triple& t = s.blocks[b];
    if (!triple_ok(t, v)) {
      r.fail(label + ": block " + std::to_string(b) + " is malformed");
      return;
    }
    const Triple u{perm[static_cast<size_t>(t[0])], perm[static_cast<size_t>(t[1])], perm[static_cast<size_t>(t[2])]};
    image[b] = index.find(u);
    if (image[b] < 0) {
      r.fail(label + ": block " + std::to_string(b) + " is not mapped to a block");
      return;
    }
  }
  for (size_t k = 0; k < s.resolution.size(); ++k) {
    const auto& c = s.resolution[k];
    if (c.empty()) continue;
    if (std::any_of(c.begin(), c.end(), [&](int32_t b) { return b < 0 || static_cast<size_t>(b) >= s.blocks.size(); })) {
      r.fail(label + ": class " + std::to_string(k) + " names a missing block");
      return;
    }
    const int32_t target = cls[static_cast<size_t>(image[static_cast<size_t>(c[0])])];
    if (target < 0 || s.resolution[static_cast<size_t>(target)].size() != c.size()) {
      r.fail(label + ": class " + std::to_string(k) + " is not mapped to a class");
      return;
    }
    for (int32_t b : c)
      if (cls[static_cast<size_t>(image[static_cast<size_t>(b)])] != target) {
        r.fail(label + ": class " + std::to_string(k) + " is split by the map");
        return;
      }
  }
}

struct Decoded {
  std::vector<int64_t> element_of;  // point -> group index, -1 for the fixed points
  std::vector<int32_t> point_of;    // group index -> point
  std::vector<int32_t> fixed;       // the three labelled points
};

std::optional<Decoded> decode_points(const KirkmanSystem& s, Report& r) {
  const Group& g = s.group;
  Decoded d;
  if (static_cast<int64_t>(s.points.size()) != s.order || g.order() + 3 != s.order) {
    r.fail("point count " + std::to_string(s.points.size()) + " is not |G| + 3 = " + std::to_string(g.order() + 3));
    return std::nullopt;
  }
  d.element_of.assign(s.points.size(), -1);
  d.point_of.assign(static_cast<size_t>(g.order()), -1);
  d.fixed.assign(3, -1);
  for (size_t p = 0; p < s.points.size(); ++p) {
    bool label = false;
    for (int i = 0; i < 3; ++i)
      if (s.points[p] == kInfinityLabels[i]) {
        if (d.fixed[static_cast<size_t>(i)] >= 0) r.fail("label " + s.points[p] + " repeated");
        d.fixed[static_cast<size_t>(i)] = static_cast<int32_t>(p);
        label = true;
      }
    if (label) continue;
    int64_t idx;
    try {
      idx = g.index(g.decode(s.points[p]));
    } catch (const std::exception& e) {
      r.fail("point " + std::to_string(p) + " does not decode: " + e.what());
      return std::nullopt;
    }
    if (d.point_of[static_cast<size_t>(idx)] >= 0) {
      r.fail("element " + s.points[p] + " appears twice");
      return std::nullopt;
    }
    d.point_of[static_cast<size_t>(idx)] = static_cast<int32_t>(p);
    d.element_of[p] = idx;
  }
  for (int i = 0; i < 3; ++i)
    if (d.fixed[static_cast<size_t>(i)] < 0) {
      r.fail(std::string("missing point ") + kInfinityLabels[i]);
      return std::nullopt;
    }
  return d;
}

Perm translation(const Group& g, const Decoded& d, const Element& t) {
  Perm perm(d.element_of.size());
  for (size_t p = 0; p < perm.size(); ++p) {
    const int64_t e = d.element_of[p];
    perm[p] = e < 0 ? static_cast<int32_t>(p) : d.point_of[static_cast<size_t>(g.index(g.add(g.at(e), t)))];
  }
  return perm;
}

}  // namespace

Report verify_sts(const KirkmanSystem& s) {
  Report r;
  r.name = "sts";
  const int64_t v = s.order;
  r.count("points", v);
  r.count("blocks", static_cast<int64_t>(s.blocks.size()));
  if (v < 3 || static_cast<int64_t>(s.points.size()) != v) {
    r.fail("point list has " + std::to_string(s.points.size()) + " entries, order says " + std::to_string(v));
    return r;
  }
  std::vector<uint8_t> cover(static_cast<size_t>(v * v), 0);
  for (size_t b = 0; b < s.blocks.size(); ++b) {
    const Triple& t = s.blocks[b];
    if (!triple_ok(t, v)) {
      r.fail("block " + std::to_string(b) + " is not three distinct points");
      continue;
    }
    for (int i = 0; i < 3; ++i)
      for (int k = i + 1; k < 3; ++k) {
        const auto x = std::min(t[i], t[k]), y = std::max(t[i], t[k]);
        auto& c = cover[static_cast<size_t>(x * v + y)];
        if (c < 255) ++c;
      }
  }
  int64_t uncovered = 0, repeated = 0;
  for (int64_t x = 0; x < v; ++x)
    for (int64_t y = x + 1; y < v; ++y) {
      const uint8_t c = cover[static_cast<size_t>(x * v + y)];
      if (c == 1) continue;
      if (c == 0) {
        ++uncovered;
        r.fail("pair {" + std::to_string(x) + "," + std::to_string(y) + "} uncovered");
      } else {
        ++repeated;
        r.fail("pair {" + std::to_string(x) + "," + std::to_string(y) + "} covered " + std::to_string(c) + " times");
      }
    }
  r.count("uncovered_pairs", uncovered);
  r.count("repeated_pairs", repeated);
  if (static_cast<int64_t>(s.blocks.size()) * 6 != v * (v - 1)) r.fail("block count is not v(v-1)/6");
  return r;
}

Report verify_resolution(const KirkmanSystem& s) {
  Report r;
  r.name = "resolution";
  const int64_t v = s.order;
  r.count("classes", static_cast<int64_t>(s.resolution.size()));
  if (v % 2 == 0 || static_cast<int64_t>(s.resolution.size()) != (v - 1) / 2)
    r.fail("class count " + std::to_string(s.resolution.size()) + " is not (v-1)/2");
  std::vector<int32_t> owner(s.blocks.size(), -1);
  for (size_t k = 0; k < s.resolution.size(); ++k) {
    std::vector<char> seen(static_cast<size_t>(std::max<int64_t>(v, 0)), 0);
    int64_t covered = 0;
    bool bad = false;
    for (int32_t b : s.resolution[k]) {
      if (b < 0 || static_cast<size_t>(b) >= s.blocks.size()) {
        r.fail("class " + std::to_string(k) + " names block " + std::to_string(b));
        bad = true;
        continue;
      }
      if (owner[static_cast<size_t>(b)] >= 0)
        r.fail("block " + std::to_string(b) + " lies in classes " + std::to_string(owner[static_cast<size_t>(b)]) + " and " +
               std::to_string(k));
      owner[static_cast<size_t>(b)] = static_cast<int32_t>(k);
      for (int32_t p : s.blocks[static_cast<size_t>(b)]) {
        if (p < 0 || p >= v) continue;
        if (seen[static_cast<size_t>(p)]) {
          r.fail("class " + std::to_string(k) + " repeats point " + std::to_string(p));
          bad = true;
        }
        seen[static_cast<size_t>(p)] = 1;
        ++covered;
      }
    }
    if (!bad && covered != v) r.fail("class " + std::to_string(k) + " covers " + std::to_string(covered) + " of " + std::to_string(v) + " points");
  }
  for (size_t b = 0; b < owner.size(); ++b)
    if (owner[b] < 0) r.fail("block " + std::to_string(b) + " lies in no class");
  return r;
}

Report verify_3pyramidal(const KirkmanSystem& s) {
  Report r;
  r.name = "3-pyramidal";
  const Group& g = s.group;
  r.count("group_order", g.order());
  const auto d = decode_points(s, r);
  if (!d) return r;
  const BlockIndex index(s);
  const auto cls = class_of(s);
  const auto gens = generating_set(g);
  r.count("generators", static_cast<int64_t>(gens.size()));
  for (const auto& t : gens) {
    const Perm perm = translation(g, *d, t);
    for (int32_t f : d->fixed)
      if (perm[static_cast<size_t>(f)] != f) r.fail("translation moves a fixed point");
    for (size_t p = 0; p < perm.size(); ++p)
      if (d->element_of[p] >= 0 && perm[p] == static_cast<int32_t>(p) && !(t == g.zero()))
        r.fail("translation by " + g.encode(t) + " fixes point " + std::to_string(p));
    check_action(s, index, cls, perm, "translation by " + g.encode(t), r);
  }
  // Orbit of the point carrying 0.
  std::vector<char> seen(s.points.size(), 0);
  std::vector<int32_t> queue{d->point_of[0]};
  seen[static_cast<size_t>(queue[0])] = 1;
  std::vector<Perm> perms;
  for (const auto& t : gens) perms.push_back(translation(g, *d, t));
  for (size_t head = 0; head < queue.size(); ++head)
    for (const auto& perm : perms) {
      const int32_t q = perm[static_cast<size_t>(queue[head])];
      if (!seen[static_cast<size_t>(q)]) {
        seen[static_cast<size_t>(q)] = 1;
        queue.push_back(q);
      }
    }
  r.count("orbit", static_cast<int64_t>(queue.size()));
  if (static_cast<int64_t>(queue.size()) != g.order()) r.fail("G is not transitive on the non-fixed points");
  r.count("fixed_points", 3);
  return r;
}

Report verify_automorphisms(const KirkmanSystem& s, const std::vector<std::vector<int32_t>>& generators) {
  Report r;
  r.name = "automorphisms";
  r.count("generators", static_cast<int64_t>(generators.size()));
  const BlockIndex index(s);
  const auto cls = class_of(s);
  for (size_t k = 0; k < generators.size(); ++k) check_action(s, index, cls, generators[k], "generator " + std::to_string(k), r);
  if (r.ok) r.count("group_order", permutation_group_order(generators, static_cast<size_t>(s.order)));
  return r;
}

std::vector<Report> verify_system(const KirkmanSystem& s, VerifyLevel level) {
  std::vector<Report> out{verify_sts(s)};
  if (level == VerifyLevel::Sts) return out;
  out.push_back(verify_resolution(s));
  if (level == VerifyLevel::Kts) return out;
  out.push_back(verify_3pyramidal(s));
  if (level == VerifyLevel::Pyramidal) return out;
  Report r;
  r.name = "sharp transitivity";
  const auto d = decode_points(s, r);
  if (d) {
    std::vector<Perm> perms;
    for (const auto& t : generating_set(s.group)) perms.push_back(translation(s.group, *d, t));
    const int64_t order = permutation_group_order(perms, s.points.size());
    r.count("group_order", order);
    if (order != s.group.order()) r.fail("translations generate a group of order " + std::to_string(order));
  }
  out.push_back(r);
  return out;
}

bool all_ok(const std::vector<Report>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const Report& r) { return r.ok; });
}

// Knuth's formulation of Schreier-Sims: level k holds permutations fixing
// every point above k; sigma[k][j] maps k to j. Composition is left to right.
int64_t permutation_group_order(const std::vector<std::vector<int32_t>>& generators, size_t degree) {
  const size_t n = degree;
  for (const auto& g : generators)
    if (g.size() != n) throw PreconditionError("permutation_group_order: generator of wrong degree");
  if (n == 0) return 1;
  std::vector<std::unordered_map<int32_t, Perm>> sigma(n);
  std::vector<std::vector<Perm>> gens(n);
  auto compose = [n](const Perm& a, const Perm& b) {
    Perm c(n);
    for (size_t x = 0; x < n; ++x) c[x] = b[static_cast<size_t>(a[x])];
    return c;
  };
  auto inverse = [n](const Perm& a) {
    Perm c(n);
    for (size_t x = 0; x < n; ++x) c[static_cast<size_t>(a[x])] = static_cast<int32_t>(x);
    return c;
  };
  // Strips pi through levels k..0; true when it reduces to the identity.
  auto member = [&](size_t k, Perm pi) {
    for (size_t level = k + 1; level-- > 0;) {
      const int32_t j = pi[level];
      if (j == static_cast<int32_t>(level)) continue;
      auto it = sigma[level].find(j);
      if (it == sigma[level].end()) return false;
      pi = compose(pi, inverse(it->second));
    }
    return true;
  };
  // Highest point moved, or -1.
  auto top = [n](const Perm& p) {
    for (size_t x = n; x-- > 0;)
      if (p[x] != static_cast<int32_t>(x)) return static_cast<int64_t>(x);
    return int64_t{-1};
  };
  struct Task {
    bool add;  // A(k, pi) when true, B(k, pi) otherwise
    size_t k;
    Perm pi;
  };
  std::vector<Task> stack;
  for (const auto& g : generators) {
    const int64_t t = top(g);
    if (t >= 0) stack.push_back({true, static_cast<size_t>(t), g});
  }
  while (!stack.empty()) {
    Task task = std::move(stack.back());
    stack.pop_back();
    const size_t k = task.k;
    if (task.add) {
      if (member(k, task.pi)) continue;
      gens[k].push_back(task.pi);
      stack.push_back({false, k, task.pi});  // identity coset representative times pi
      for (const auto& [j, s] : sigma[k]) stack.push_back({false, k, compose(s, task.pi)});
    } else {
      const int32_t j = task.pi[k];
      if (j == static_cast<int32_t>(k)) {
        const int64_t t = top(task.pi);
        if (t >= 0) stack.push_back({true, static_cast<size_t>(t), task.pi});
        continue;
      }
      auto it = sigma[k].find(j);
      if (it == sigma[k].end()) {
        sigma[k].emplace(j, task.pi);
        for (const auto& tau : gens[k]) stack.push_back({false, k, compose(task.pi, tau)});
      } else {
        Perm rest = compose(task.pi, inverse(it->second));
        const int64_t t = top(rest);
        if (t >= 0) stack.push_back({true, static_cast<size_t>(t), std::move(rest)});
      }
    }
  }
  int64_t order = 1;
  for (size_t k = 0; k < n; ++k) order *= static_cast<int64_t>(sigma[k].size() + 1);
  return order;
}

std::vector<Block> extract_base_blocks(const KirkmanSystem& s) {
  Report r;
  const auto d = decode_points(s, r);
  if (!d) throw MalformedInput("extract_base_blocks: " + r.summary());
  const Group& g = s.group;
  const int64_t n = g.order();
  const BlockIndex index(s);
  std::vector<Perm> trans;
  for (int64_t t = 0; t < n; ++t) trans.push_back(translation(g, *d, g.at(t)));
  std::vector<char> done(s.blocks.size(), 0);
  std::vector<Block> reps;
  for (size_t b = 0; b < s.blocks.size(); ++b) {
    const Triple& t = s.blocks[b];
    if (done[b] || d->element_of[static_cast<size_t>(t[0])] < 0 || d->element_of[static_cast<size_t>(t[1])] < 0 ||
        d->element_of[static_cast<size_t>(t[2])] < 0)
      continue;
    std::vector<int32_t> orbit;
    for (const auto& perm : trans) {
      const int32_t img = index.find({perm[static_cast<size_t>(t[0])], perm[static_cast<size_t>(t[1])], perm[static_cast<size_t>(t[2])]});
      if (img < 0) throw MalformedInput("extract_base_blocks: the block set is not G-invariant");
      orbit.push_back(img);
    }
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    for (int32_t o : orbit) done[static_cast<size_t>(o)] = 1;
    if (static_cast<int64_t>(orbit.size()) != n) continue;
    Block rep;
    for (size_t i = 0; i < 3; ++i) rep[i] = g.at(d->element_of[static_cast<size_t>(t[i])]);
    reps.push_back(rep);
  }
  return reps;
}

}  // namespace kts
