#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "golden_tables.hpp"
#include "json.hpp"
#include "kts/catalog.hpp"
#include "kts/errors.hpp"
#include "kts/serialize.hpp"

using namespace kts;
using Json = nlohmann::ordered_json;

namespace {

KirkmanSystem constructed(int64_t v) {
  auto c = construct_for_order(v);
  auto s = build_kts(c.family);
  s.trace = c.trace;
  return s;
}

std::string edited(const std::string& text, const std::function<void(Json&)>& f) {
  Json j = Json::parse(text);
  f(j);
  return j.dump();
}

}  // namespace

TEST_CASE("system round trip keeps every field and the bytes") {
  for (int64_t v : {9, 15, 39, 51, 63}) {
    const auto s = constructed(v);
    const std::string text = system_to_json(s);
    const auto back = system_from_json(text);
    CHECK(back.order == s.order);
    CHECK(back.group == s.group);
    CHECK(back.points == s.points);
    CHECK(back.blocks == s.blocks);
    CHECK(back.resolution == s.resolution);
    REQUIRE(back.trace);
    CHECK(back.trace->digest == s.trace->digest);
    CHECK(system_to_json(back) == text);
    CHECK(all_ok(verify_system(back, VerifyLevel::Full)));
  }
}

TEST_CASE("key order and layout are fixed") {
  const std::string text = system_to_json(build_kts(catalog_family("rdf:D:empty")));
  CHECK(text.rfind(R"x({"order":9,"group":"D","points":["D:(0,0)",)x", 0) == 0);
  CHECK(text.back() == '\n');
  CHECK(text.find("trace") == std::string::npos);
}

TEST_CASE("automorphism witnesses are written and read") {
  const auto c = construct_for_order(153);
  const auto s = build_kts(c.family);
  const auto aut = automorphism_lower_bound(s, c.family);
  const std::string text = system_to_json(s, &aut);
  AutomorphismWitness back;
  const auto sys = system_from_json(text, &back);
  CHECK(back.bound == 450);
  CHECK(back.generators == aut.generators);
  CHECK(back.labels == aut.labels);
  CHECK(verify_automorphisms(sys, back.generators).ok);
}

TEST_CASE("trace round trip") {
  const auto c = construct_for_order(195);
  const std::string text = trace_to_json(c.trace);
  const TraceNode t = trace_from_json(text);
  CHECK(trace_to_json(t) == text);
  CHECK(t.step == c.trace.step);
  CHECK(t.children.size() == c.trace.children.size());
  CHECK_THROWS_AS(trace_from_json("[1,2]"), MalformedInput);
  CHECK_THROWS_AS(trace_from_json(R"({"detail":"no step"})"), MalformedInput);
}

TEST_CASE("malformed systems are rejected as malformed input") {
  const std::string good = system_to_json(build_kts(catalog_family("rdf:G1")));
  CHECK_NOTHROW(system_from_json(good));
  const std::vector<std::string> bad = {
      "",
      "{",
      "[]",
      "{\"order\":15}",
      edited(good, [](Json& j) { j["order"] = "fifteen"; }),
      edited(good, [](Json& j) { j["order"] = 16; }),
      edited(good, [](Json& j) { j["group"] = "Q8"; }),
      edited(good, [](Json& j) { j["group"] = "D"; }),
      edited(good, [](Json& j) { j["points"][0] = "G1:(9,9,9)"; }),
      edited(good, [](Json& j) { j["points"][1] = "nonsense"; }),
      edited(good, [](Json& j) { j["blocks"][0] = Json::array({0, 1}); }),
      edited(good, [](Json& j) { j["blocks"][0][2] = 15; }),
      edited(good, [](Json& j) { j["blocks"][0][2] = -1; }),
      edited(good, [](Json& j) { j["blocks"][0][2] = "x"; }),
      edited(good, [](Json& j) { j["resolution"][0][0] = 35; }),
      edited(good, [](Json& j) { j["resolution"] = 7; }),
      edited(good, [](Json& j) { j["trace"] = Json::array(); }),
  };
  for (const auto& text : bad) {
    INFO(text.substr(0, 80));
    CHECK_THROWS_AS(system_from_json(text), MalformedInput);
  }
}

TEST_CASE("well-formed but wrong systems load and fail verification") {
  const std::string good = system_to_json(build_kts(catalog_family("rdf:G1")));
  const auto duplicated = system_from_json(edited(good, [](Json& j) { j["blocks"][0] = j["blocks"][1]; }));
  CHECK_FALSE(verify_sts(duplicated).ok);
  const auto relabeled = system_from_json(edited(good, [](Json& j) { std::swap(j["points"][0], j["points"][1]); }));
  CHECK(verify_sts(relabeled).ok);
  CHECK_FALSE(verify_3pyramidal(relabeled).ok);
}

TEST_CASE("reports, classifications and catalog entries") {
  const auto reports = verify_system(build_kts(catalog_family("rdf:D:empty")), VerifyLevel::Kts);
  const Json r = Json::parse(reports_to_json(reports));
  REQUIRE(r.size() == 2);
  CHECK(r[0]["check"] == "sts");
  CHECK(r[0]["counts"]["blocks"] == 12);
  CHECK(r[1]["counts"]["classes"] == 4);
  const Json c = Json::parse(order_class_to_json(classify_order(195)));
  CHECK(c["route"] == "iii.1");
  CHECK(c["e"] == 1);
  const Json e = Json::parse(catalog_entry_to_json(catalog_entry("rdf:G1")));
  CHECK(e["verified"] == true);
  CHECK(e["family"]["blocks"].size() == 1);
  CHECK(e["family"]["j"] == "G1:(0,1,1)");
  const Json m = Json::parse(catalog_entry_to_json(catalog_entry("dm:Z4xZ4")));
  CHECK(m["matrix"]["rows"].size() == 3);
  CHECK(m["matrix"]["rows"][0].size() == 16);
}
