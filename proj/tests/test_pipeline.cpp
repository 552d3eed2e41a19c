#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "golden_tables.hpp"
#include "kts/catalog.hpp"
#include "kts/errors.hpp"
#include "kts/pipeline.hpp"
#include "kts/verify.hpp"

using namespace kts;

namespace {

std::vector<Element> sorted_delta(const Group& g, const std::vector<Block>& blocks) {
  auto d = delta_family(g, blocks);
  std::sort(d.begin(), d.end());
  return d;
}

void check_full(const KirkmanSystem& s) {
  for (const auto& r : verify_system(s, VerifyLevel::Full)) {
    INFO(s.order << " " << r.summary());
    CHECK(r.ok);
  }
}

}  // namespace

TEST_CASE("classify_order") {
  CHECK(classify_order(9).kind == OrderCase::NineMod24);
  CHECK(classify_order(9).n == 0);
  const auto c39 = classify_order(39);
  CHECK(c39.kind == OrderCase::FifteenMod24);
  CHECK(c39.n == 1);
  CHECK(c39.route == "ii.1");
  const auto c99 = classify_order(99);
  CHECK(c99.kind == OrderCase::NotPyramidal);
  CHECK(c99.explanation.find("n=2 not of form 4^e*odd") != std::string::npos);
  CHECK(classify_order(75).kind == OrderCase::NotPyramidal);  // 72 = 24 * 3
  const auto c195 = classify_order(195);
  CHECK(c195.kind == OrderCase::FortyEightPlus3);
  CHECK(c195.e == 1);
  CHECK(c195.m == 1);
  CHECK_FALSE(classify_order(129).covered);
  CHECK(classify_order(153).covered);
  CHECK_THROWS_AS(classify_order(10), PreconditionError);
  CHECK_THROWS_AS(classify_order(3), PreconditionError);
  // Pertinence of v - 3 is necessary; beyond it only v = 21 (mod 24) is excluded.
  CHECK(classify_order(21).kind == OrderCase::NotPyramidal);
  CHECK(pertinent_order(18));
  for (int64_t v = 9; v <= 3000; v += 6)
    CHECK((classify_order(v).kind != OrderCase::NotPyramidal) == (pertinent_order(v - 3) && v % 24 != 21));
}

TEST_CASE("sum_of_two_squares") {
  CHECK(sum_of_two_squares(5));
  CHECK_FALSE(sum_of_two_squares(21));
  CHECK(sum_of_two_squares(45));
  CHECK(sum_of_two_squares(1));
  // Brute force for small k.
  for (int64_t k = 1; k < 500; ++k) {
    bool found = false;
    for (int64_t a = 0; a * a <= k && !found; ++a)
      for (int64_t b = a; a * a + b * b <= k; ++b)
        if (a * a + b * b == k) found = true;
    CHECK(sum_of_two_squares(k) == found);
  }
}

TEST_CASE("golden KTS(9) and KTS(15)") {
  const auto s9 = build_kts(catalog_family("rdf:D:empty"));
  CHECK(golden::canonical(s9) == golden::canonical(s9.group, golden::kts9));
  CHECK(s9.blocks.size() == 12);
  CHECK(s9.resolution.size() == 4);
  check_full(s9);
  const auto s15 = build_kts(catalog_family("rdf:G1"));
  CHECK(golden::canonical(s15) == golden::canonical(s15.group, golden::kts15));
  CHECK(s15.blocks.size() == 35);
  CHECK(s15.resolution.size() == 7);
  check_full(s15);
}

TEST_CASE("KTS(33) from the seed family") {
  const auto& w = catalog_family("rdf:DxV5");
  const auto s = build_kts(w);
  CHECK(s.resolution.size() == 16);
  check_full(s);
  const auto aut = automorphism_lower_bound(s, w);
  CHECK(aut.bound == 30);
}

TEST_CASE("pipeline routes for small orders") {
  for (int64_t v : {9, 15, 33, 39, 51, 57, 63, 81, 87, 105, 111, 135, 147, 153, 159, 183, 195, 207, 231, 243, 255}) {
    INFO("v=" << v);
    const auto c = classify_order(v);
    if (!c.covered) continue;
    const auto r = construct_for_order(v);
    CHECK(r.family.group.order() == v - 3);
    const auto s = build_kts(r.family);
    CHECK(s.order == v);
    check_full(s);
  }
}

TEST_CASE("route shapes") {
  CHECK(construct_case_iii(0, 1).trace.catalog_ids == std::vector<std::string>{"rdf:G2"});
  const auto r39 = construct_case_ii(1);
  CHECK(r39.trace.catalog_ids == std::vector<std::string>{"rdf:G1xV3"});
  const auto r195 = construct_case_iii(1, 1);
  CHECK(r195.family.group.name() == "G3");
  CHECK(r195.trace.step == "pertinent-union");
  // Same order, same trace and bytes.
  const auto again = construct_case_iii(1, 1);
  CHECK(again.trace.digest == r195.trace.digest);
  CHECK(build_kts(again.family).blocks == build_kts(r195.family).blocks);
}

TEST_CASE("uncovered and non-pyramidal orders") {
  CHECK_THROWS_AS(construct_for_order(129), NotCovered);
  CHECK_THROWS_AS(construct_for_order(99), NotCovered);
  CHECK_THROWS_AS(construct_case_i(5), NotCovered);
  // 2n+1 = 11 is prime to 3 and 11 (mod 12).
  CHECK_THROWS_AS(construct_case_ii(5), NotCovered);
}

TEST_CASE("automorphism bounds") {
  const auto s9 = build_kts(catalog_family("rdf:D:empty"));
  const auto a9 = automorphism_lower_bound(s9, catalog_family("rdf:D:empty"));
  CHECK(a9.bound == 6);
  const auto r9 = verify_automorphisms(s9, a9.generators);
  CHECK(r9.ok);
  CHECK(r9.get("group_order") == 6);

  const auto r153 = construct_for_order(153);
  const auto s153 = build_kts(r153.family);
  const auto a153 = automorphism_lower_bound(s153, r153.family);
  CHECK(a153.bound == 450);
  const auto rep = verify_automorphisms(s153, a153.generators);
  CHECK(rep.ok);
  CHECK(rep.get("group_order") == 450);
}

TEST_CASE("identity passes, a transposition fails") {
  const auto s = build_kts(catalog_family("rdf:G1"));
  std::vector<int32_t> id(static_cast<size_t>(s.order));
  for (size_t i = 0; i < id.size(); ++i) id[i] = static_cast<int32_t>(i);
  CHECK(verify_automorphisms(s, {id}).ok);
  auto swap = id;
  std::swap(swap[0], swap[1]);
  CHECK_FALSE(verify_automorphisms(s, {swap}).ok);
}

TEST_CASE("verification rejects damaged systems") {
  const auto s = build_kts(catalog_family("rdf:D:empty"));
  auto missing = s;
  missing.blocks.erase(missing.blocks.begin() + 5);
  const auto r = verify_sts(missing);
  CHECK_FALSE(r.ok);
  CHECK(r.get("uncovered_pairs") == 3);

  auto repeated = s;
  repeated.resolution[1][0] = repeated.resolution[1][1];
  CHECK_FALSE(verify_resolution(repeated).ok);

  // Exchange two points inside one block of the data: blocks stay blocks,
  // but the translation action breaks.
  auto shuffled = build_kts(catalog_family("rdf:G1"));
  std::swap(shuffled.points[0], shuffled.points[1]);
  CHECK(verify_sts(shuffled).ok);
  CHECK_FALSE(verify_3pyramidal(shuffled).ok);
}

TEST_CASE("base blocks extracted from the design regenerate the witness differences") {
  for (int64_t v : {15, 33, 39, 51, 57, 87, 111, 147, 195}) {
    INFO("v=" << v);
    const auto r = construct_for_order(v);
    const auto s = build_kts(r.family);
    const auto reps = extract_base_blocks(s);
    CHECK(reps.size() == r.family.blocks.size());
    CHECK(sorted_delta(s.group, reps) == sorted_delta(r.family.group, r.family.blocks));
  }
}

TEST_CASE("ring transport") {
  const Group from = Group::parse("G1xV45");
  const Group to = Group({Atom::galpha(1), Atom::vn(9), Atom::vn(5)});
  const auto f = ring_transport(from, to);
  const auto els = from.elements();
  std::vector<char> hit(static_cast<size_t>(to.order()), 0);
  for (const auto& x : els) hit[static_cast<size_t>(to.index(f(x)))] = 1;
  CHECK(std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; }));
  for (size_t i = 0; i < els.size(); i += 7)
    for (size_t k = 0; k < els.size(); k += 11) CHECK(f(from.add(els[i], els[k])) == to.add(f(els[i]), f(els[k])));
  CHECK_THROWS_AS(ring_transport(from, Group::parse("G1xV5")), PreconditionError);
  const Group v27 = Group::parse("V27");
  const Group v3v9 = Group({Atom::vn(3), Atom::vn(9)});
  const auto g = ring_transport(v3v9, v27);
  for (const auto& x : v3v9.elements())
    for (const auto& y : v3v9.elements()) CHECK(g(v3v9.add(x, y)) == v27.add(g(x), g(y)));
}
