// Command-line front end over the C interface.
//
// Exit codes: 0 success, 1 usage or internal error, 2 verification failure,
// 3 malformed input, 4 order not covered.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kts/kts.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitVerify = 2;
constexpr int kExitMalformed = 3;
constexpr int kExitNotCovered = 4;

int exit_code(kts_status st) {
  switch (st) {
    case KTS_OK: return 0;
    case KTS_VERIFY_FAILED: return kExitVerify;
    case KTS_MALFORMED:
    case KTS_UNKNOWN_ID: return kExitMalformed;
    case KTS_NOT_COVERED: return kExitNotCovered;
    default: return kExitUsage;
  }
}

int report_error(kts_status st) {
  std::cerr << "ktsctl: " << kts_status_name(st) << ": " << kts_last_error() << "\n";
  return exit_code(st);
}

// Takes ownership of a string returned by the library.
std::string take(char* s) {
  std::string out = s ? s : "";
  kts_string_free(s);
  return out;
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return static_cast<bool>(std::cout);
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  return static_cast<bool>(f);
}

// Admissible orders that no route covers, and orders that are not 3 mod 6,
// both exit as "not covered" with the classification's explanation.
int unsupported(int64_t order) {
  char* js = nullptr;
  if (kts_classify(order, &js) == KTS_OK) {
    const auto c = nlohmann::json::parse(take(js));
    std::cerr << "ktsctl: order " << order << " not covered: " << c.at("explanation").get<std::string>() << "\n";
  } else {
    std::cerr << "ktsctl: order " << order << " not covered: " << kts_last_error() << "\n";
  }
  return kExitNotCovered;
}

int cmd_construct(int64_t order, bool trace, bool automorphisms, const std::string& out) {
  kts_system* s = nullptr;
  const kts_status st = kts_construct(order, &s);
  if (st == KTS_NOT_COVERED || st == KTS_INVALID) return unsupported(order);
  if (st != KTS_OK) return report_error(st);
  char* js = nullptr;
  const kts_status st2 = kts_system_to_json(s, trace, automorphisms, &js);
  kts_system_free(s);
  if (st2 != KTS_OK) return report_error(st2);
  if (!write_output(out, take(js))) {
    std::cerr << "ktsctl: cannot write " << out << "\n";
    return kExitUsage;
  }
  return 0;
}

int cmd_verify(const std::string& input, const std::string& level, bool automorphisms) {
  std::ifstream f(input, std::ios::binary);
  if (!f) {
    std::cerr << "ktsctl: cannot read " << input << "\n";
    return kExitMalformed;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  kts_system* s = nullptr;
  const kts_status st = kts_system_from_json(buf.str().c_str(), &s);
  if (st != KTS_OK) return report_error(st);
  char* report = nullptr;
  const kts_status vs = kts_verify(s, level.c_str(), &report);
  if (report) std::cout << take(report);
  int code = vs == KTS_OK ? 0 : report_error(vs);
  if (code == 0 && automorphisms) {
    int64_t bound = 0, order = 0;
    const kts_status as = kts_automorphisms(s, &bound, &order);
    if (as == KTS_OK)
      std::cout << "{\"automorphism_bound\":" << bound << ",\"generated_group_order\":" << order << "}\n";
    else
      code = report_error(as);
  }
  kts_system_free(s);
  return code;
}

int cmd_catalog_list() {
  char* js = nullptr;
  const kts_status st = kts_catalog_list(&js);
  if (st != KTS_OK) return report_error(st);
  for (const auto& e : nlohmann::json::parse(take(js)))
    std::printf("%-24s %-10s %s\n", e.at("id").get<std::string>().c_str(), e.at("verified").get<bool>() ? "verified" : "QUARANTINED",
                e.at("description").get<std::string>().c_str());
  return 0;
}

int cmd_catalog_show(const std::string& id) {
  char* js = nullptr;
  const kts_status st = kts_catalog_show(id.c_str(), &js);
  if (st != KTS_OK) return report_error(st);
  std::cout << take(js);
  return 0;
}

int cmd_coverage(int64_t max_order, bool all, bool json) {
  char* js = nullptr;
  const kts_status st = kts_coverage(max_order, all, &js);
  if (st != KTS_OK) return report_error(st);
  const std::string text = take(js);
  if (json) {
    std::cout << text;
    return 0;
  }
  std::printf("%8s  %-14s  %-9s  %-7s  %s\n", "order", "case", "covered", "route", "explanation");
  for (const auto& c : nlohmann::json::parse(text))
    std::printf("%8lld  %-14s  %-9s  %-7s  %s\n", static_cast<long long>(c.at("order").get<int64_t>()),
                c.at("case").get<std::string>().c_str(), c.at("covered").get<bool>() ? "yes" : "no",
                c.at("route").get<std::string>().c_str(), c.at("explanation").get<std::string>().c_str());
  return 0;
}

int cmd_selftest(const std::vector<int>& ids, uint64_t seed) {
  char* text = nullptr;
  const kts_status st = kts_selftest(ids.data(), ids.size(), seed, &text);
  if (text) std::cout << take(text);
  if (st == KTS_VERIFY_FAILED) return kExitVerify;
  return st == KTS_OK ? 0 : report_error(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct and verify 3-pyramidal Kirkman triple systems"};
  app.require_subcommand(1);

  int64_t order = 0;
  bool trace = false, with_aut = false;
  std::string out;
  auto* construct = app.add_subcommand("construct", "build the system of the given order and print it as JSON");
  construct->add_option("--order", order, "number of points v")->required();
  construct->add_flag("--trace", trace, "include the construction trace");
  construct->add_flag("--automorphisms", with_aut, "include the automorphism generators");
  construct->add_option("--out", out, "write to FILE instead of standard output");

  std::string input, level = "full";
  bool verify_aut = false;
  auto* verify = app.add_subcommand("verify", "check a system stored as JSON");
  verify->add_option("--input", input, "JSON file")->required();
  verify->add_option("--level", level, "sts, kts, pyramidal or full")
      ->check(CLI::IsMember({"sts", "kts", "pyramidal", "full"}));
  verify->add_flag("--automorphisms", verify_aut, "also report the automorphism bound");

  std::string show_id;
  auto* catalog = app.add_subcommand("catalog", "seed families and difference matrices");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "list catalog entries");
  auto* show = catalog->add_subcommand("show", "print one entry as JSON");
  show->add_option("id", show_id, "catalog id")->required();

  int64_t max_order = 0;
  bool all = false, json = false;
  auto* coverage = app.add_subcommand("coverage", "classify every order up to a bound");
  coverage->add_option("--max", max_order, "largest order")->required();
  coverage->add_flag("--all", all, "include orders that are not 3-pyramidal");
  coverage->add_flag("--json", json, "print JSON instead of a table");

  int64_t classify_v = 0;
  auto* classify = app.add_subcommand("classify", "print the classification of one order");
  classify->add_option("--order", classify_v, "number of points v")->required();

  std::vector<int> criteria;
  uint64_t seed = 20240611;
  auto* selftest = app.add_subcommand("selftest", "run the catalog check and the acceptance criteria");
  selftest->add_option("--criterion", criteria, "run only these criteria (1-8)")->check(CLI::Range(1, 8));
  selftest->add_option("--seed", seed, "seed of the randomized property checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (*construct) return cmd_construct(order, trace, with_aut, out);
  if (*verify) return cmd_verify(input, level, verify_aut);
  if (*list) return cmd_catalog_list();
  if (*show) return cmd_catalog_show(show_id);
  if (*coverage) return cmd_coverage(max_order, all, json);
  if (*classify) {
    char* js = nullptr;
    const kts_status st = kts_classify(classify_v, &js);
    if (st != KTS_OK) return report_error(st);
    std::cout << take(js);
    return 0;
  }
  if (*selftest) return cmd_selftest(criteria, seed);
  return kExitUsage;
}
