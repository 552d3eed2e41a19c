#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "kts/errors.hpp"
#include "kts/groups.hpp"

using namespace kts;

namespace {

Element el(const Group& g, std::vector<int> lit) { return g.from_literal(lit); }

// Direct transcription of the twisted D law, independent of Group::add.
std::pair<int, int> d_add(std::pair<int, int> x, std::pair<int, int> y) {
  const int sign = y.first ? -1 : 1;
  return {(x.first + y.first) % 2, ((sign * x.second + y.second) % 3 + 3) % 3};
}

void check_axioms(const Group& g, const Element& x, const Element& y, const Element& z) {
  CHECK(g.add(g.add(x, y), z) == g.add(x, g.add(y, z)));
  CHECK(g.add(x, g.zero()) == x);
  CHECK(g.add(g.zero(), x) == x);
  CHECK(g.add(x, g.neg(x)) == g.zero());
  CHECK(g.add(g.neg(x), x) == g.zero());
}

}  // namespace

TEST_CASE("D conjugation example") {
  const Group d = Group::parse("D");
  const Element lhs = d.sub(d.add(el(d, {1, 1}), el(d, {1, 0})), el(d, {1, 1}));
  CHECK(lhs == el(d, {1, 2}));
}

TEST_CASE("D addition agrees with the twisted law on every pair") {
  const Group d = Group::parse("D");
  for (const auto& x : d.elements())
    for (const auto& y : d.elements()) {
      const auto r = d_add({x[0], x[1]}, {y[0], y[1]});
      CHECK(d.add(x, y) == el(d, {r.first, r.second}));
    }
}

TEST_CASE("G_alpha conjugation moves (0,h,0) to (0,h,h)") {
  for (int alpha = 1; alpha <= 4; ++alpha) {
    const Group g({Atom::galpha(alpha)});
    const int h = 1 << (alpha - 1);
    const Element x = el(g, {1, 0, 0});
    CHECK(g.sub(g.add(x, el(g, {0, h, 0})), x) == el(g, {0, h, h}));
  }
}

TEST_CASE("right difference reproduces the G1 difference table") {
  const Group g = Group::parse("G1");
  CHECK(g.sub(el(g, {0, 0, 1}), el(g, {1, 1, 0})) == el(g, {2, 0, 1}));
  CHECK(g.sub(el(g, {0, 0, 1}), el(g, {2, 1, 1})) == el(g, {1, 0, 1}));
  CHECK(g.sub(el(g, {1, 1, 0}), el(g, {0, 0, 1})) == el(g, {1, 1, 1}));
  CHECK(g.sub(el(g, {1, 1, 0}), el(g, {2, 1, 1})) == el(g, {2, 1, 1}));
  CHECK(g.sub(el(g, {2, 1, 1}), el(g, {0, 0, 1})) == el(g, {2, 1, 0}));
  CHECK(g.sub(el(g, {2, 1, 1}), el(g, {1, 1, 0})) == el(g, {1, 1, 0}));
}

TEST_CASE("involutions and pertinence") {
  const Group d = Group::parse("D");
  CHECK(d.involutions() == std::vector<Element>{el(d, {1, 0}), el(d, {1, 1}), el(d, {1, 2})});
  CHECK(d.is_pertinent());
  const Group g = Group::parse("G1xV3");
  CHECK(g.involutions().size() == 3);
  CHECK(g.is_pertinent());
  const Group z4 = Group::parse("Z4");
  CHECK(z4.involutions().size() == 1);
  CHECK_FALSE(z4.is_pertinent());
  const Group g2 = Group::parse("G2");
  CHECK(g2.involutions() == std::vector<Element>{el(g2, {0, 0, 2}), el(g2, {0, 2, 0}), el(g2, {0, 2, 2})});
  CHECK(*g2.canonical_involution() == el(g2, {0, 2, 2}));
  CHECK_FALSE(d.canonical_involution().has_value());
}

TEST_CASE("pertinent orders") {
  for (int n : {6, 12, 30, 36, 48}) CHECK(pertinent_order(n));
  CHECK_FALSE(pertinent_order(24));
  // 192 = 4^3 * 3 is the order of G3.
  CHECK(pertinent_order(192));
  CHECK(pertinent_witness(192).name() == "G3");
  CHECK_FALSE(pertinent_order(96));
  CHECK(pertinent_witness(30).name() == "DxZ5");
  CHECK(pertinent_witness(48).name() == "G2");
  CHECK(pertinent_witness(36).name() == "G1xZ3");
  CHECK_THROWS_AS(pertinent_witness(24), PreconditionError);
}

TEST_CASE("pertinent witnesses up to order 1000 have three conjugate involutions") {
  int count = 0;
  for (int n = 1; n <= 1000; ++n) {
    // Oracle: the order predicate by its literal definition.
    bool expected = n % 12 == 6;
    for (int64_t p = 4; p <= n && !expected; p *= 4)
      if (n % p == 0 && (n / p) % 6 == 3) expected = true;
    CHECK(pertinent_order(n) == expected);
    if (!expected) continue;
    const Group g = pertinent_witness(n);
    CHECK(g.order() == n);
    CHECK(g.is_pertinent());
    ++count;
  }
  CHECK(count > 100);
}

TEST_CASE("subgroup Z3x2Z4x2Z4 of G2 is isomorphic to G1") {
  const Group g2 = Group::parse("G2");
  const Group g1 = Group::parse("G1");
  const auto h = SubgroupView::generated(g2, {el(g2, {1, 0, 0}), el(g2, {0, 2, 0}), el(g2, {0, 0, 2})});
  CHECK(h.order() == 12);
  // Only the Klein part is normal; the relative subgroup need not be.
  CHECK_FALSE(h.is_normal());
  CHECK(SubgroupView::generated(g2, {el(g2, {0, 2, 0}), el(g2, {0, 0, 2})}).is_normal());
  const auto f = atom_embedding(g1, g2, {0}, {2});
  std::set<Element> image;
  for (const auto& x : g1.elements()) {
    image.insert(f(x));
    CHECK(h.contains(f(x)));
    for (const auto& y : g1.elements()) CHECK(f(g1.add(x, y)) == g2.add(f(x), f(y)));
  }
  CHECK(image.size() == 12);
}

TEST_CASE("quotient G1xV3 / G1 is V3") {
  const Group g = Group::parse("G1xV3");
  const Group v3 = Group::parse("V3");
  const auto k = SubgroupView::generated(g, {el(g, {1, 0, 0, 0}), el(g, {0, 1, 0, 0}), el(g, {0, 0, 1, 0})});
  CHECK(k.order() == 12);
  QuotientView q(k, v3, [&](const Element& x) { return el(v3, {x[3]}); });
  CHECK(q.validate().empty());
  QuotientView bad(k, v3, [&](const Element& x) { return el(v3, {x[0]}); });
  CHECK_FALSE(bad.validate().empty());
}

TEST_CASE("left cosets of J in G1") {
  const Group g = Group::parse("G1");
  const auto j = SubgroupView::generated(g, {el(g, {0, 1, 1})});
  const auto cosets = left_cosets(j);
  std::vector<std::vector<Element>> expected = {
      {el(g, {0, 0, 0}), el(g, {0, 1, 1})}, {el(g, {0, 0, 1}), el(g, {0, 1, 0})},
      {el(g, {1, 0, 0}), el(g, {1, 1, 1})}, {el(g, {1, 0, 1}), el(g, {1, 1, 0})},
      {el(g, {2, 0, 0}), el(g, {2, 1, 1})}, {el(g, {2, 0, 1}), el(g, {2, 1, 0})}};
  CHECK(cosets == expected);
}

TEST_CASE("non-closed carriers are rejected") {
  const Group g = Group::parse("G1");
  CHECK_THROWS_AS(SubgroupView::from_carrier(g, {el(g, {0, 0, 0}), el(g, {1, 0, 0})}), PreconditionError);
  CHECK(SubgroupView::from_carrier(g, {el(g, {0, 0, 0}), el(g, {0, 1, 1})}).order() == 2);
}

TEST_CASE("group axioms exhaustively for small groups") {
  for (const char* name : {"D", "G1", "DxV5", "Z2xZ6", "Z4xZ4", "DxV9"}) {
    const Group g = Group::parse(name);
    const auto all = g.elements();
    CHECK(static_cast<int64_t>(all.size()) == g.order());
    for (const auto& x : all)
      for (const auto& y : all) {
        CHECK(g.sub(x, y) == g.add(x, g.neg(y)));
        check_axioms(g, x, y, all[(g.index(x) * 7 + g.index(y)) % all.size()]);
      }
  }
}

TEST_CASE("subtraction in G_alpha follows the explicit case table, alpha <= 3") {
  for (int alpha = 1; alpha <= 3; ++alpha) {
    const Group g({Atom::galpha(alpha)});
    const int m = 1 << alpha;
    auto md = [m](int v) { return ((v % m) + m) % m; };
    for (const auto& x : g.elements())
      for (const auto& y : g.elements()) {
        const int a = x[0], b = x[1], c = x[2], d = y[0], e = y[1], f = y[2];
        std::vector<int> want{((a - d) % 3 + 3) % 3, 0, 0};
        if (d == 0) {
          want[1] = md(b - e);
          want[2] = md(c - f);
        } else if (d == 1) {
          want[1] = md(e - b + c - f);
          want[2] = md(e - b);
        } else {
          want[1] = md(f - c);
          want[2] = md(b - e + f - c);
        }
        REQUIRE(g.sub(x, y) == el(g, want));
        REQUIRE(g.sub(x, y) == g.add(x, g.neg(y)));
      }
  }
}

TEST_CASE("random axiom triples in larger products") {
  std::mt19937_64 rng(11);
  for (const char* name : {"G2xV3", "G3", "G1xV3xV7", "DxV25", "G2xV5xV7", "G1xV9xV11"}) {
    const Group g = Group::parse(name);
    for (int t = 0; t < 1000; ++t) {
      const Element x = g.at(static_cast<int64_t>(rng() % g.order()));
      const Element y = g.at(static_cast<int64_t>(rng() % g.order()));
      const Element z = g.at(static_cast<int64_t>(rng() % g.order()));
      check_axioms(g, x, y, z);
    }
  }
}

TEST_CASE("index and at are inverse and order-preserving") {
  const Group g = Group::parse("G1xV9");
  Element prev;
  for (int64_t i = 0; i < g.order(); ++i) {
    const Element x = g.at(i);
    CHECK(g.index(x) == i);
    if (i) CHECK(prev < x);
    prev = x;
  }
}

TEST_CASE("multiplier scaling is an automorphism exactly for units") {
  const Group g = Group::parse("G1xV15");
  const Ring& r = *g.atoms()[1].ring;
  for (const auto& s : r.elements()) {
    std::set<Element> image;
    for (const auto& x : g.elements()) image.insert(g.scale(x, 1, s));
    CHECK((static_cast<int64_t>(image.size()) == g.order()) == r.is_unit(s));
    const Element a = g.at(17), b = g.at(101);
    CHECK(g.scale(g.add(a, b), 1, s) == g.add(g.scale(a, 1, s), g.scale(b, 1, s)));
  }
}

TEST_CASE("encode and decode round trip") {
  const Group g = Group::parse("G1xV5");
  const Element x = el(g, {2, 1, 1, 3});
  CHECK(g.encode(x) == "G1:(2,1,1)|V5:3");
  for (const char* name : {"G1xV5", "DxV9", "G2xV3xV25", "Z2xZ6"}) {
    const Group h = Group::parse(name);
    for (int64_t i = 0; i < h.order(); i += 7) CHECK(h.decode(h.encode(h.at(i))) == h.at(i));
  }
  CHECK(Group::parse("DxV9").encode(el(Group::parse("DxV9"), {1, 2, 0, 1})) == "D:(1,2)|V9:(0,1)");
  CHECK_THROWS_AS(g.decode("G1:(2,1,1)|V7:3"), MalformedInput);
  CHECK_THROWS_AS(g.decode("G1:(2,1,5)|V5:3"), MalformedInput);
  CHECK_THROWS_AS(Group::parse("GxV5"), MalformedInput);
  CHECK_THROWS_AS(Group::parse("V4"), MalformedInput);
}
