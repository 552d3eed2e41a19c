#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "kts/catalog.hpp"
#include "kts/designkit.hpp"
#include "kts/errors.hpp"

using namespace kts;

namespace {

Element el(const Group& g, std::vector<int> lit) { return g.from_literal(lit); }

std::vector<Element> sorted(std::vector<Element> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("delta of the G1 block matches its difference table") {
  const Group g = Group::parse("G1");
  const Block b{el(g, {0, 0, 1}), el(g, {1, 1, 0}), el(g, {2, 1, 1})};
  const std::vector<Element> expected{el(g, {2, 0, 1}), el(g, {1, 0, 1}), el(g, {1, 1, 1}),
                                      el(g, {2, 1, 1}), el(g, {2, 1, 0}), el(g, {1, 1, 0})};
  CHECK(delta(g, b) == expected);
}

TEST_CASE("delta in Z7 is plus or minus 1, 2, 3") {
  const Group z = Group::parse("Z7");
  const auto d = sorted(delta(z, {el(z, {0}), el(z, {1}), el(z, {3})}));
  CHECK(d == sorted({el(z, {1}), el(z, {6}), el(z, {2}), el(z, {5}), el(z, {3}), el(z, {4})}));
}

TEST_CASE("sizes of delta and flatten") {
  for (const auto& id : catalog_ids()) {
    const auto& e = catalog_entry(id);
    if (!e.family) continue;
    CHECK(delta_family(e.family->group, e.family->blocks).size() == 6 * e.family->blocks.size());
    CHECK(flatten(e.family->blocks).size() == 3 * e.family->blocks.size());
  }
  const auto& w = catalog_family("rdf:G1xV3");
  const auto phi = flatten(w.blocks);
  CHECK(std::set<Element>(phi.begin(), phi.end()).size() == 15);
}

TEST_CASE("every catalog entry passes its declared predicate") {
  const auto report = catalog_self_check();
  CHECK(report.total == 14);
  CHECK(report.ok());
  for (const auto& line : report.lines) INFO(line);
}

TEST_CASE("recorded resolving elements") {
  const auto& g1 = catalog_family("rdf:G1");
  const Diagnosis d = is_j_resolvable(g1);
  CHECK(d.ok);
  // Without recorded a, b the search finds the printed pair among all solutions.
  FamilyWitness open = g1;
  open.a.reset();
  open.b.reset();
  const Diagnosis s = is_j_resolvable(open);
  REQUIRE(s.ok);
  CHECK(std::find(s.solutions.begin(), s.solutions.end(), std::pair{*g1.a, *g1.b}) != s.solutions.end());
  const auto& dv5 = catalog_family("rdf:DxV5");
  CHECK(is_j_resolvable(dv5).ok);
}

TEST_CASE("empty family over D is a resolvable spread family") {
  const auto& w = catalog_family("rdf:D:empty");
  CHECK(w.blocks.empty());
  CHECK(is_df(w).ok);
  CHECK(is_j_resolvable(w).ok);
}

TEST_CASE("perturbing one element breaks the family") {
  FamilyWitness w = catalog_family("rdf:DxV5");
  w.blocks[1][2] = el(w.group, {1, 2, 3});
  CHECK_FALSE(is_df(w).ok);
  CHECK_FALSE(is_df(w).problems.empty());
}

TEST_CASE("resolvability needs an involution") {
  FamilyWitness w = catalog_family("rdf:G2xV3:rel-G1xV3");
  CHECK(check_declared(w).ok);
  w.j = el(w.group, {1, 0, 0, 0});
  CHECK_THROWS_AS(is_j_resolvable(w), PreconditionError);
}

TEST_CASE("pseudo-resolvable and resolvable are exclusive") {
  CHECK(is_pseudo_resolvable(catalog_family("prdf:G1xV3")).ok);
  CHECK(is_pseudo_resolvable(catalog_family("prdf:G2")).ok);
  CHECK(is_pseudo_resolvable(catalog_family("prdf:G1xV9")).ok);
  CHECK_FALSE(is_pseudo_resolvable(catalog_family("rdf:G1")).ok);
  FamilyWitness p = catalog_family("prdf:G1xV3");
  p.j = *p.group.canonical_involution();
  p.a.reset();
  p.b.reset();
  CHECK_FALSE(is_j_resolvable(p).ok);
}

TEST_CASE("resolvable families are doubly disjoint with every translate j") {
  for (const char* id : {"rdf:G2:rel-G1", "rdf:G2xV3:rel-G1xV3", "rdf:G3:rel-G2"}) {
    FamilyWitness w = catalog_family(id);
    w.kind = FamilyKind::DDDF;
    w.translates.assign(w.blocks.size(), *w.j);
    CHECK(is_doubly_disjoint(w).ok);
    w.translates.pop_back();
    CHECK_THROWS_AS(is_doubly_disjoint(w), PreconditionError);
  }
}

TEST_CASE("overlapping blocks are not doubly disjoint") {
  FamilyWitness w = catalog_family("rdf:G2:rel-G1");
  // The twin of block 0 under translate 0 is block 0 itself.
  w.translates.assign(w.blocks.size(), *w.j);
  w.translates[0] = w.group.zero();
  CHECK_FALSE(is_doubly_disjoint(w).ok);
}

TEST_CASE("strong difference family in Z3 and the parity precondition") {
  const Group z = Group::parse("Z3");
  const std::vector<Block> b{{el(z, {0}), el(z, {1}), el(z, {2})}};
  CHECK_THROWS_AS(is_resolvable_sdf(z, b, 2, el(z, {1})), PreconditionError);
  const Group z6 = Group::parse("Z6");
  const std::vector<Block> b6{{el(z6, {0}), el(z6, {1}), el(z6, {3})}};
  CHECK_FALSE(is_resolvable_sdf(z6, b6, 2, el(z6, {3})).ok);
}

TEST_CASE("fixed difference matrices") {
  const auto g1 = dm_check(catalog_matrix("dm:G1"));
  CHECK(g1.valid);
  CHECK(g1.splittable);
  const auto z26 = dm_check(catalog_matrix("dm:Z2xZ6"));
  CHECK(z26.valid);
  CHECK(z26.splittable);
  const auto z44 = dm_check(catalog_matrix("dm:Z4xZ4"));
  CHECK(z44.valid);
  CHECK(z44.splittable);
  CHECK(z44.homogeneous);
  const Group one(std::vector<Atom>{});
  DifferenceMatrix trivial{one, {std::vector<Element>{one.zero()}, {one.zero()}, {one.zero()}}, std::nullopt};
  const auto t = dm_check(trivial);
  CHECK(t.valid);
  CHECK(t.homogeneous);
  DifferenceMatrix bad = catalog_matrix("dm:Z4xZ4");
  bad.rows[0].pop_back();
  CHECK_THROWS_AS(dm_check(bad), PreconditionError);
}

TEST_CASE("homogeneous matrix plus a zero row is a four-row matrix and back") {
  const auto& m = catalog_matrix("dm:Z4xZ4");
  const Group& h = m.group;
  std::vector<std::vector<Element>> rows(m.rows.begin(), m.rows.end());
  rows.push_back(std::vector<Element>(h.order(), h.zero()));
  CHECK(is_difference_matrix(h, rows));
  // Subtracting the last row of a four-row matrix gives a homogeneous three-row one.
  std::array<std::vector<Element>, 3> back;
  for (size_t r = 0; r < 3; ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) back[r].push_back(h.sub(rows[r][c], rows[3][c]));
  const auto rep = dm_check({h, back, std::nullopt});
  CHECK(rep.valid);
  CHECK(rep.homogeneous);
}

TEST_CASE("catalog lookup errors and quarantine") {
  CHECK_THROWS_AS(catalog_entry("rdf:nope"), UnknownId);
  CHECK_THROWS_AS(catalog_family("dm:G1"), PreconditionError);
  CatalogEntry raw = catalog_raw("rdf:G1xV3");
  CHECK(catalog_check(raw).ok);
  raw.family->blocks[0][0] = el(raw.family->group, {0, 0, 0, 1});
  CHECK_FALSE(catalog_check(raw).ok);
}

TEST_CASE("multiplier check rejects a non-fixing unit") {
  FamilyWitness w = catalog_family("rdf:DxV5");
  MultiplierGroup m;
  m.atom = 1;
  m.generators = {RingElement{4}};
  m.order = 2;
  w.multipliers = m;
  // The four blocks are not closed under negation of the ring coordinate.
  CHECK_FALSE(check_multipliers(w).ok);
  m.generators = {RingElement{1}};
  m.order = 1;
  w.multipliers = m;
  CHECK(check_multipliers(w).ok);
}
