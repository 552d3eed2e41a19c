#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "json.hpp"
#include "kts/kts.h"

using Json = nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  kts_string_free(s);
  return out;
}

std::string construct_json(int64_t v, int trace, int aut) {
  kts_system* h = nullptr;
  REQUIRE(kts_construct(v, &h) == KTS_OK);
  char* js = nullptr;
  REQUIRE(kts_system_to_json(h, trace, aut, &js) == KTS_OK);
  kts_system_free(h);
  return take(js);
}

}  // namespace

TEST_CASE("construct, serialize, reload and verify") {
  for (int64_t v : {9, 15, 33, 51, 195}) {
    const std::string text = construct_json(v, 1, 1);
    CHECK(construct_json(v, 1, 1) == text);
    kts_system* h = nullptr;
    REQUIRE(kts_system_from_json(text.c_str(), &h) == KTS_OK);
    int64_t order = 0;
    CHECK(kts_system_order(h, &order) == KTS_OK);
    CHECK(order == v);
    char* report = nullptr;
    CHECK(kts_verify(h, "full", &report) == KTS_OK);
    const Json r = Json::parse(take(report));
    CHECK(r.size() == 5);
    CHECK(r.back()["check"] == "automorphisms");
    char* again = nullptr;
    CHECK(kts_system_to_json(h, 1, 1, &again) == KTS_OK);
    CHECK(take(again) == text);
    kts_system_free(h);
  }
}

TEST_CASE("trace is optional in the output") {
  const Json with = Json::parse(construct_json(39, 1, 0));
  const Json without = Json::parse(construct_json(39, 0, 0));
  CHECK(with.contains("trace"));
  CHECK_FALSE(without.contains("trace"));
  CHECK_FALSE(with.contains("automorphisms"));
}

TEST_CASE("automorphism bounds through the interface") {
  kts_system* h = nullptr;
  REQUIRE(kts_construct(153, &h) == KTS_OK);
  int64_t bound = 0, order = 0;
  CHECK(kts_automorphisms(h, &bound, &order) == KTS_OK);
  CHECK(bound == 450);
  CHECK(order == 450);
  char* js = nullptr;
  REQUIRE(kts_system_to_json(h, 0, 0, &js) == KTS_OK);
  kts_system_free(h);
  // Reloaded without a witness, only the translations remain.
  kts_system* bare = nullptr;
  REQUIRE(kts_system_from_json(take(js).c_str(), &bare) == KTS_OK);
  CHECK(kts_automorphisms(bare, &bound, &order) == KTS_OK);
  CHECK(bound == 150);
  CHECK(order == 150);
  kts_system_free(bare);
}

TEST_CASE("status codes") {
  kts_system* h = nullptr;
  CHECK(kts_construct(129, &h) == KTS_NOT_COVERED);
  CHECK(h == nullptr);
  CHECK(std::string(kts_last_error()).find("sum of two squares") != std::string::npos);
  CHECK(kts_construct(99, &h) == KTS_NOT_COVERED);
  CHECK(kts_construct(10, &h) == KTS_INVALID);
  CHECK(kts_construct(9, nullptr) == KTS_INVALID);
  CHECK(kts_system_from_json("{\"order\":", &h) == KTS_MALFORMED);
  CHECK(h == nullptr);
  char* js = nullptr;
  CHECK(kts_catalog_show("rdf:none", &js) == KTS_UNKNOWN_ID);
  CHECK(kts_classify(12, &js) == KTS_INVALID);
  CHECK(std::string(kts_status_name(KTS_NOT_COVERED)) == "not covered");
}

TEST_CASE("verification failures carry a report") {
  Json j = Json::parse(construct_json(15, 0, 0));
  j["blocks"][0][0] = j["blocks"][0][1].get<int>() == 0 ? 1 : 0;
  j["blocks"][0][1] = 0;
  kts_system* h = nullptr;
  REQUIRE(kts_system_from_json(j.dump().c_str(), &h) == KTS_OK);
  char* report = nullptr;
  CHECK(kts_verify(h, "sts", &report) == KTS_VERIFY_FAILED);
  const Json r = Json::parse(take(report));
  CHECK(r[0]["ok"] == false);
  CHECK(kts_verify(h, "everything", &report) == KTS_MALFORMED);
  kts_system_free(h);
}

TEST_CASE("classification, coverage and catalog") {
  char* js = nullptr;
  REQUIRE(kts_classify(99, &js) == KTS_OK);
  const Json c = Json::parse(take(js));
  CHECK(c["covered"] == false);
  CHECK(c["explanation"] == "48n+3 with n=2 not of form 4^e*odd");
  REQUIRE(kts_coverage(200, 0, &js) == KTS_OK);
  const Json rows = Json::parse(take(js));
  std::vector<int64_t> orders;
  for (const auto& r : rows) orders.push_back(r["order"]);
  CHECK(std::vector<int64_t>(orders.begin(), orders.begin() + 5) == std::vector<int64_t>{9, 15, 33, 39, 51});
  REQUIRE(kts_coverage(200, 1, &js) == KTS_OK);
  CHECK(Json::parse(take(js)).size() == 32);
  REQUIRE(kts_catalog_list(&js) == KTS_OK);
  CHECK(Json::parse(take(js)).size() == 14);
  REQUIRE(kts_catalog_show("rdf:G2", &js) == KTS_OK);
  CHECK(Json::parse(take(js))["family"]["blocks"].size() == 7);
}

TEST_CASE("selftest of single criteria") {
  const int ids[] = {1, 2, 8};
  char* text = nullptr;
  CHECK(kts_selftest(ids, 3, 1, &text) == KTS_OK);
  const std::string t = take(text);
  CHECK(t.find("criterion 1 PASS") != std::string::npos);
  CHECK(t.find("criterion 8 PASS") != std::string::npos);
  const int bad[] = {9};
  CHECK(kts_selftest(bad, 1, 1, &text) == KTS_INVALID);
}
