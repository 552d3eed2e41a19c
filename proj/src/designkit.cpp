#include "kts/designkit.hpp"

#include <algorithm>
#include <set>

#include "kts/errors.hpp"

namespace kts {

std::string to_string(FamilyKind k) {
  switch (k) {
    case FamilyKind::DF: return "DF";
    case FamilyKind::RDF: return "RDF";
    case FamilyKind::PRDF: return "PRDF";
    case FamilyKind::DDDF: return "DDDF";
    case FamilyKind::SDF: return "SDF";
  }
  return "?";
}

FamilyKind family_kind_from_string(const std::string& s) {
  for (auto k : {FamilyKind::DF, FamilyKind::RDF, FamilyKind::PRDF, FamilyKind::DDDF, FamilyKind::SDF})
    if (to_string(k) == s) return k;
  throw MalformedInput("unknown family kind '" + s + "'");
}

std::string Diagnosis::summary() const {
  if (ok) return "ok";
  std::string s;
  for (const auto& p : problems) {
    if (!s.empty()) s += "; ";
    s += p;
  }
  return s;
}

std::vector<Element> delta(const Group& g, const Block& b) {
  std::vector<Element> out;
  out.reserve(6);
  for (size_t r = 0; r < 3; ++r)
    for (size_t c = 0; c < 3; ++c)
      if (r != c) out.push_back(g.sub(b[r], b[c]));
  return out;
}

std::vector<Element> delta_family(const Group& g, const std::vector<Block>& blocks) {
  std::vector<Element> out;
  out.reserve(6 * blocks.size());
  for (const auto& b : blocks) {
    auto d = delta(g, b);
    out.insert(out.end(), d.begin(), d.end());
  }
  return out;
}

std::vector<Element> flatten(const std::vector<Block>& blocks) {
  std::vector<Element> out;
  out.reserve(3 * blocks.size());
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

Block canonical_block(Block b) {
  std::sort(b.begin(), b.end());
  return b;
}

std::vector<Block> canonical_family(std::vector<Block> blocks) {
  for (auto& b : blocks) b = canonical_block(b);
  std::sort(blocks.begin(), blocks.end());
  return blocks;
}

namespace {

bool is_involution(const Group& g, const Element& x) {
  return g.contains(x) && !(x == g.zero()) && g.add(x, x) == g.zero();
}

void check_blocks_in_group(const FamilyWitness& w, Diagnosis& d, bool distinct) {
  for (size_t i = 0; i < w.blocks.size(); ++i) {
    const auto& b = w.blocks[i];
    for (const auto& x : b)
      if (!w.group.contains(x)) d.fail("block " + std::to_string(i) + " has an element outside " + w.group.name());
    if (distinct && (b[0] == b[1] || b[0] == b[2] || b[1] == b[2]))
      d.fail("block " + std::to_string(i) + " has repeated elements");
  }
}

// Each element of `cover` must be hit exactly once and nothing else.
void expect_exact_cover(const Group& g, const std::vector<int>& hits, const std::vector<char>& target, const std::string& what,
                        Diagnosis& d) {
  for (int64_t i = 0; i < g.order(); ++i) {
    const int want = target[i] ? 1 : 0;
    if (hits[i] == want) continue;
    const std::string e = g.encode(g.at(i));
    if (!target[i])
      d.fail(what + ": " + e + " should not appear but appears " + std::to_string(hits[i]) + " time(s)");
    else if (hits[i] == 0)
      d.fail(what + ": " + e + " is missing");
    else
      d.fail(what + ": " + e + " appears " + std::to_string(hits[i]) + " times");
  }
}

std::vector<char> complement(const std::vector<char>& s) {
  std::vector<char> c(s.size());
  for (size_t i = 0; i < s.size(); ++i) c[i] = !s[i];
  return c;
}

}  // namespace

std::vector<char> excluded_set(const FamilyWitness& w) {
  const Group& g = w.group;
  std::vector<char> ex(g.order(), 0);
  if (w.spread_x) {
    ex[g.index(g.zero())] = 1;
    for (const auto& j : g.involutions()) ex[g.index(j)] = 1;
    ex[g.index(*w.spread_x)] = 1;
    ex[g.index(g.neg(*w.spread_x))] = 1;
    return ex;
  }
  const auto h = SubgroupView::generated(g, w.relative);
  for (const auto& x : h.elements()) ex[g.index(x)] = 1;
  return ex;
}

Diagnosis is_df(const FamilyWitness& w) {
  Diagnosis d;
  const Group& g = w.group;
  check_blocks_in_group(w, d, true);
  if (!d) return d;
  if (w.spread_x && g.element_order(*w.spread_x) != 3) d.fail("spread generator does not have order 3");
  std::vector<int> hits(g.order(), 0);
  for (const auto& b : w.blocks)
    for (const auto& x : delta(g, b)) ++hits[g.index(x)];
  expect_exact_cover(g, hits, complement(excluded_set(w)), "differences", d);
  return d;
}

Diagnosis is_j_resolvable(const FamilyWitness& w) {
  const Group& g = w.group;
  if (!w.j || !is_involution(g, *w.j)) throw PreconditionError("is_j_resolvable: j must be an involution of " + g.name());
  const Element j = *w.j;
  Diagnosis d;
  check_blocks_in_group(w, d, true);
  if (!d) return d;
  std::vector<int> hits(g.order(), 0);
  for (const auto& x : flatten(w.blocks)) {
    ++hits[g.index(x)];
    ++hits[g.index(g.add(x, j))];
  }
  if (!w.spread_x) {
    const auto ex = excluded_set(w);
    if (!ex[g.index(j)]) d.fail("j does not belong to H");
    expect_exact_cover(g, hits, complement(ex), "flatten + J", d);
    return d;
  }

  const auto inv = g.involutions();
  auto conjugates_ok = [&](const Element& a, const Element& b) {
    std::set<Element> s{j, g.conjugate(a, j), g.conjugate(b, j)};
    return s.size() == 3 && std::equal(s.begin(), s.end(), inv.begin(), inv.end());
  };
  auto covers_with = [&](const Element& a, const Element& b) {
    std::vector<int> h = hits;
    for (const auto& x : {g.zero(), a, b}) {
      ++h[g.index(x)];
      ++h[g.index(g.add(x, j))];
    }
    return std::all_of(h.begin(), h.end(), [](int c) { return c == 1; });
  };
  if (w.a && w.b) {
    if (!conjugates_ok(*w.a, *w.b)) d.fail("J, a+J-a, b+J-b are not the three subgroups of order 2");
    if (!covers_with(*w.a, *w.b)) {
      std::vector<int> h = hits;
      for (const auto& x : {g.zero(), *w.a, *w.b}) {
        ++h[g.index(x)];
        ++h[g.index(g.add(x, j))];
      }
      std::vector<char> all(g.order(), 1);
      expect_exact_cover(g, h, all, "flatten + {0,a,b} + J", d);
    }
    if (d) d.solutions.push_back({*w.a, *w.b});
    return d;
  }
  // a and b are existential: they lie in the two cosets not met by the flatten.
  std::vector<Element> free;
  for (int64_t i = 0; i < g.order(); ++i)
    if (hits[i] == 0) free.push_back(g.at(i));
  for (const auto& a : free)
    for (const auto& b : free)
      if (a < b && conjugates_ok(a, b) && covers_with(a, b)) {
        d.solutions.push_back({a, b});
        d.solutions.push_back({b, a});
      }
  std::sort(d.solutions.begin(), d.solutions.end());
  if (d.solutions.empty()) d.fail("no elements a, b complete the flatten to a transversal of the cosets of J");
  return d;
}

Diagnosis is_pseudo_resolvable(const FamilyWitness& w) {
  const Group& g = w.group;
  Diagnosis d;
  if (!w.spread_x) {
    d.fail("pseudo-resolvability needs a {2^3,3} spread");
    return d;
  }
  if (g.order() % 4 != 0) d.fail("group order is not doubly even");
  Diagnosis df = is_df(w);
  if (!df) return df;
  const auto inv = g.involutions();
  if (inv.size() != 3) {
    d.fail("group does not have exactly three involutions");
    return d;
  }
  const auto phi = flatten(w.blocks);
  for (const auto& ja : inv)
    for (const auto& jb : inv) {
      if (ja == jb) continue;
      std::vector<int> hits(g.order(), 0);
      for (const auto& x : phi) {
        ++hits[g.index(x)];
        ++hits[g.index(g.add(x, jb))];
      }
      for (const auto& x : {g.zero(), ja, *w.spread_x}) {
        ++hits[g.index(x)];
        ++hits[g.index(g.add(x, jb))];
      }
      if (std::all_of(hits.begin(), hits.end(), [](int c) { return c == 1; })) d.solutions.push_back({ja, jb});
    }
  if (d.solutions.empty()) d.fail("no ordered pair of involutions makes the flatten pseudo-resolvable");
  if (w.j_alpha && w.j_beta &&
      std::find(d.solutions.begin(), d.solutions.end(), std::pair{*w.j_alpha, *w.j_beta}) == d.solutions.end())
    d.fail("recorded (j_alpha, j_beta) does not satisfy the definition");
  return d;
}

Diagnosis is_doubly_disjoint(const FamilyWitness& w) {
  const Group& g = w.group;
  if (w.translates.size() != w.blocks.size())
    throw PreconditionError("is_doubly_disjoint: one translate per block is required");
  Diagnosis d = is_df(w);
  if (!d) return d;
  FamilyWitness twin = w;
  for (size_t i = 0; i < w.blocks.size(); ++i)
    for (size_t k = 0; k < 3; ++k) twin.blocks[i][k] = g.add(w.blocks[i][k], w.translates[i]);
  Diagnosis dt = is_df(twin);
  for (const auto& p : dt.problems) d.fail("twin: " + p);
  std::vector<int> hits(g.order(), 0);
  for (const auto& x : flatten(w.blocks)) ++hits[g.index(x)];
  for (const auto& x : flatten(twin.blocks)) ++hits[g.index(x)];
  expect_exact_cover(g, hits, complement(excluded_set(w)), "flatten of family and twin", d);
  return d;
}

Diagnosis is_resolvable_sdf(const Group& g, const std::vector<Block>& blocks, int lambda, const Element& j) {
  if (g.order() % 2 != 0) throw PreconditionError("is_resolvable_sdf: J needs a group of even order");
  if (!is_involution(g, j)) throw PreconditionError("is_resolvable_sdf: j must be an involution");
  Diagnosis d;
  if (lambda % 2 != 0) d.fail("lambda must be even");
  std::vector<int> hits(g.order(), 0);
  for (const auto& b : blocks)
    for (const auto& x : delta(g, b)) ++hits[g.index(x)];
  for (int64_t i = 0; i < g.order(); ++i)
    if (hits[i] != lambda)
      d.fail("difference " + g.encode(g.at(i)) + " appears " + std::to_string(hits[i]) + " times, expected " +
             std::to_string(lambda));
  std::vector<int> per_coset(g.order(), 0);
  for (const auto& x : flatten(blocks)) {
    const Element y = g.add(x, j);
    ++per_coset[g.index(std::min(x, y))];
  }
  for (int64_t i = 0; i < g.order(); ++i) {
    const Element x = g.at(i);
    if (g.add(x, j) < x) continue;
    if (per_coset[i] != lambda)
      d.fail("left coset of " + g.encode(x) + " holds " + std::to_string(per_coset[i]) + " flatten elements, expected " +
             std::to_string(lambda));
  }
  return d;
}

Diagnosis check_multipliers(const FamilyWitness& w) {
  Diagnosis d;
  if (!w.multipliers) return d;
  const auto& m = *w.multipliers;
  const Group& g = w.group;
  if (m.atom >= g.atoms().size() || g.atoms()[m.atom].kind != AtomKind::Ring) {
    d.fail("multiplier atom is not V_n");
    return d;
  }
  const Ring& ring = *g.atoms()[m.atom].ring;
  const auto family = canonical_family(w.blocks);
  const auto relative = SubgroupView::generated(g, w.relative);
  for (const auto& s : m.generators) {
    if (!ring.is_unit(s)) {
      d.fail("multiplier generator is not a unit");
      continue;
    }
    std::vector<Block> image = w.blocks;
    for (auto& b : image)
      for (auto& x : b) x = g.scale(x, m.atom, s);
    if (canonical_family(image) != family) d.fail("a multiplier does not fix the family");
    if (m.strong && !w.spread_x)
      for (const auto& h : relative.elements())
        if (!(g.scale(h, m.atom, s) == h)) {
          d.fail("a strong multiplier moves " + g.encode(h));
          break;
        }
  }
  std::set<RingElement> closure{ring.one()};
  std::vector<RingElement> frontier{ring.one()};
  while (!frontier.empty()) {
    std::vector<RingElement> next;
    for (const auto& x : frontier)
      for (const auto& s : m.generators) {
        auto y = ring.mul(x, s);
        if (closure.insert(y).second) next.push_back(y);
      }
    frontier = std::move(next);
  }
  if (static_cast<int64_t>(closure.size()) != m.order)
    d.fail("multiplier group has order " + std::to_string(closure.size()) + ", declared " + std::to_string(m.order));
  return d;
}

Diagnosis check_declared(const FamilyWitness& w) {
  Diagnosis d;
  switch (w.kind) {
    case FamilyKind::DF: d = is_df(w); break;
    case FamilyKind::RDF:
      d = is_df(w);
      if (d) d = is_j_resolvable(w);
      break;
    case FamilyKind::PRDF: d = is_pseudo_resolvable(w); break;
    case FamilyKind::DDDF: d = is_doubly_disjoint(w); break;
    case FamilyKind::SDF:
      if (!w.j) throw PreconditionError("SDF check needs j");
      d = is_resolvable_sdf(w.group, w.blocks, w.lambda, *w.j);
      break;
  }
  if (d && w.multipliers) {
    Diagnosis dm = check_multipliers(w);
    if (!dm) return dm;
  }
  return d;
}

bool is_difference_matrix(const Group& h, const std::vector<std::vector<Element>>& rows) {
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t s = r + 1; s < rows.size(); ++s) {
      std::vector<char> seen(h.order(), 0);
      for (size_t c = 0; c < rows[r].size(); ++c) {
        char& f = seen[h.index(h.sub(rows[r][c], rows[s][c]))];
        if (f) return false;
        f = 1;
      }
    }
  return true;
}

DmReport dm_check(const DifferenceMatrix& m) {
  const Group& h = m.group;
  for (const auto& row : m.rows) {
    if (static_cast<int64_t>(row.size()) != h.order())
      throw PreconditionError("dm_check: each row needs |H| = " + std::to_string(h.order()) + " entries");
    for (const auto& x : row)
      if (!h.contains(x)) throw PreconditionError("dm_check: entry outside " + h.name());
  }
  DmReport rep;
  rep.valid = is_difference_matrix(h, {m.rows[0], m.rows[1], m.rows[2]});
  if (!rep.valid) rep.problems.push_back("some row difference is not a permutation of " + h.name());
  rep.homogeneous = std::all_of(m.rows.begin(), m.rows.end(), [&](const std::vector<Element>& row) {
    std::set<Element> s(row.begin(), row.end());
    return static_cast<int64_t>(s.size()) == h.order();
  });
  if (m.j) {
    if (!is_involution(h, *m.j)) throw PreconditionError("dm_check: j must be an involution");
    const size_t half = static_cast<size_t>(h.order() / 2);
    rep.splittable = h.order() % 2 == 0;
    for (const auto& row : m.rows)
      for (size_t part = 0; part < 2 && rep.splittable; ++part) {
        std::vector<int> hits(h.order(), 0);
        for (size_t c = part * half; c < (part + 1) * half; ++c) {
          ++hits[h.index(row[c])];
          ++hits[h.index(h.add(row[c], *m.j))];
        }
        if (!std::all_of(hits.begin(), hits.end(), [](int k) { return k == 1; })) rep.splittable = false;
      }
    if (!rep.splittable) rep.problems.push_back("some half-row is not a transversal of the cosets of J");
  }
  return rep;
}

}  // namespace kts
