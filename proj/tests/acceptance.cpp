// Acceptance criteria 1-8, one PASS/FAIL line each. Systems are checked with
// the test-side oracles; the exit status is nonzero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "golden_tables.hpp"
#include "json.hpp"
#include "kts/catalog.hpp"
#include "kts/errors.hpp"
#include "kts/kts.h"
#include "kts/pipeline.hpp"
#include "kts/verify.hpp"
#include "oracles.hpp"
#include "properties.hpp"

using namespace kts;

namespace {

// Time limits in seconds, pinned.
constexpr double kGoldenLimit = 1.0;
constexpr double kCatalogLimit = 5.0;
constexpr double kSweepLimit = 600.0;
constexpr int64_t kPropertyChecks = 10000;
constexpr uint64_t kSeed = 0x6b7473;

struct Outcome {
  bool ok = true;
  int64_t checks = 0;
  std::string first_failure;
  std::string note;

  void check(bool cond, const std::string& what) {
    ++checks;
    if (cond) return;
    if (ok) first_failure = what;
    ok = false;
  }
};

// The full oracle on a system built from the order's route.
void check_order(Outcome& out, int64_t v, Construction* keep = nullptr, KirkmanSystem* sys = nullptr) {
  try {
    Construction c = construct_for_order(v);
    KirkmanSystem s = build_kts(c.family, false);
    const auto k = oracle::kirkman(s);
    out.check(k.ok, "v=" + std::to_string(v) + ": " + k.why);
    const auto p = oracle::three_pyramidal(s, generating_set(s.group));
    out.check(p.ok, "v=" + std::to_string(v) + ": " + p.why);
    out.check(s.order == v && s.group.order() == v - 3, "v=" + std::to_string(v) + ": wrong size");
    if (keep) *keep = std::move(c);
    if (sys) *sys = std::move(s);
  } catch (const std::exception& e) {
    out.check(false, "v=" + std::to_string(v) + ": " + e.what());
  }
}

// Automorphism witness: translations are transitive on G (checked by
// three_pyramidal) and the multiplier generators fix point 0 and generate a
// group of order m, so |Aut| >= |G| m.
void check_multipliers(Outcome& out, const KirkmanSystem& s, const FamilyWitness& w, int64_t m) {
  const auto aut = automorphism_lower_bound(s, w);
  const std::string tag = "v=" + std::to_string(s.order) + ": ";
  out.check(aut.bound == s.group_order() * m, tag + "bound " + std::to_string(aut.bound) + " != " + std::to_string(s.group_order() * m));
  const auto at = oracle::element_points(s);
  const size_t translations = generating_set(s.group).size();
  std::vector<oracle::Perm> mult(aut.generators.begin() + static_cast<std::ptrdiff_t>(translations), aut.generators.end());
  for (const auto& g : aut.generators) out.check(oracle::preserves(s, g), tag + "a generator moves the resolution");
  for (const auto& g : mult)
    out.check(g[static_cast<size_t>(at[0])] == at[0], tag + "multiplier does not fix the zero element");
  out.check(oracle::small_group_order(mult, static_cast<size_t>(s.order)) == m, tag + "multiplier group order differs from m");
  const auto rep = verify_automorphisms(s, aut.generators);
  out.check(rep.ok && rep.get("group_order") == s.group_order() * m, tag + "library group order " + rep.summary());
}

std::string take(char* s) {
  std::string out = s ? s : "";
  kts_string_free(s);
  return out;
}

// Reads the JSON the C interface emits, without the library's reader.
KirkmanSystem parse_system(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  KirkmanSystem s;
  s.order = j.at("order").get<int64_t>();
  s.group = Group::parse(j.at("group").get<std::string>());
  s.points = j.at("points").get<std::vector<std::string>>();
  for (const auto& b : j.at("blocks")) s.blocks.push_back({b.at(0).get<int32_t>(), b.at(1).get<int32_t>(), b.at(2).get<int32_t>()});
  s.resolution = j.at("resolution").get<std::vector<std::vector<int32_t>>>();
  return s;
}

void golden_tables(Outcome& out) {
  for (auto [v, table] : {std::pair<int64_t, const golden::Table*>{9, &golden::kts9}, {15, &golden::kts15}}) {
    kts_system* h = nullptr;
    out.check(kts_construct(v, &h) == KTS_OK, "construct " + std::to_string(v));
    if (!h) continue;
    char* js = nullptr;
    kts_system_to_json(h, 0, 0, &js);
    kts_system_free(h);
    const KirkmanSystem s = parse_system(take(js));
    out.check(golden::canonical(s) == golden::canonical(s.group, *table), "KTS(" + std::to_string(v) + ") differs from the printed classes");
    out.check(oracle::kirkman(s).ok, "KTS(" + std::to_string(v) + ") is not a KTS");
  }
}

// Catalog entries pass their library predicate, and every family's
// differences avoid the excluded set and cover the rest exactly once.
void catalog(Outcome& out) {
  const auto rep = catalog_self_check();
  out.check(rep.total == 14 && rep.ok(), std::to_string(rep.verified) + "/" + std::to_string(rep.total) + " verified");
  for (const auto& id : catalog_ids()) {
    const auto& e = catalog_entry(id);
    if (e.matrix) {
      const auto& m = *e.matrix;
      const Group& h = m.group;
      for (int r = 0; r < 3; ++r)
        for (int q = r + 1; q < 3; ++q) {
          std::vector<char> seen(static_cast<size_t>(h.order()), 0);
          bool ok = m.rows[r].size() == static_cast<size_t>(h.order());
          for (size_t c = 0; ok && c < m.rows[r].size(); ++c) {
            const auto d = static_cast<size_t>(h.index(h.add(m.rows[q][c], h.neg(m.rows[r][c]))));
            ok = !seen[d];
            seen[d] = 1;
          }
          out.check(ok, id + ": rows " + std::to_string(r) + "," + std::to_string(q) + " differences are not a permutation");
        }
      continue;
    }
    if (!e.family) continue;
    const auto& w = *e.family;
    const Group& g = w.group;
    std::vector<char> excluded(static_cast<size_t>(g.order()), 0);
    if (w.spread_x) {
      for (const auto& x : g.elements())
        if (g.add(x, x) == g.zero()) excluded[static_cast<size_t>(g.index(x))] = 1;
      excluded[static_cast<size_t>(g.index(*w.spread_x))] = 1;
      excluded[static_cast<size_t>(g.index(g.neg(*w.spread_x)))] = 1;
    } else {
      std::vector<Element> hs{g.zero()};
      excluded[static_cast<size_t>(g.index(g.zero()))] = 1;
      for (size_t i = 0; i < hs.size(); ++i)
        for (const auto& t : w.relative) {
          const Element y = g.add(hs[i], t);
          if (!excluded[static_cast<size_t>(g.index(y))]) {
            excluded[static_cast<size_t>(g.index(y))] = 1;
            hs.push_back(y);
          }
        }
    }
    std::vector<int> hits(static_cast<size_t>(g.order()), 0);
    for (const auto& d : oracle::differences(g, w.blocks)) ++hits[static_cast<size_t>(g.index(d))];
    bool ok = true;
    for (int64_t i = 0; i < g.order() && ok; ++i) ok = hits[static_cast<size_t>(i)] == (excluded[static_cast<size_t>(i)] ? 0 : 1);
    out.check(ok, id + ": differences do not cover G minus the excluded set exactly once");
  }
}

void sweep(Outcome& out) {
  std::vector<int64_t> orders;
  for (int64_t v = 39; v <= 1500; v += 72) orders.push_back(v);
  for (int64_t p = 1; p <= 16; p *= 4)
    for (int64_t v = 48 * p + 3; v <= 2000; v += 96 * p) orders.push_back(v);
  for (int64_t v : orders) check_order(out, v);
  out.note = std::to_string(orders.size()) + " orders";
}

void case_i(Outcome& out) {
  int built = 0;
  for (int64_t n = 0; n <= 40; ++n) {
    const int64_t v = 24 * n + 9;
    out.check(classify_order(v).covered == oracle::sum_of_two_squares(4 * n + 1), "v=" + std::to_string(v) + ": coverage");
    if (!oracle::sum_of_two_squares(4 * n + 1)) continue;
    Construction c;
    KirkmanSystem s;
    check_order(out, v, &c, &s);
    if (s.order != v) continue;
    check_multipliers(out, s, c.family, oracle::odd_part(oracle::psi(4 * n + 1)));
    ++built;
  }
  out.note = std::to_string(built) + " orders";
}

// Condition (ii): 3 | 2n+1, or no prime 11 (mod 12) divides the square-free
// part of 2n+1.
bool condition_ii(int64_t n) {
  int64_t k = 2 * n + 1;
  if (k % 3 == 0) return true;
  for (int64_t p = 5; p <= k; p += 2) {
    int e = 0;
    while (k % p == 0) {
      k /= p;
      ++e;
    }
    if (e % 2 == 1 && p % 12 == 11) return false;
  }
  return true;
}

void case_ii(Outcome& out) {
  int built = 0, witnessed = 0;
  for (int64_t n = 0; 24 * n + 15 <= 1500; ++n) {
    const int64_t v = 24 * n + 15;
    out.check(classify_order(v).covered == condition_ii(n), "v=" + std::to_string(v) + ": coverage");
    if (!condition_ii(n)) continue;
    Construction c;
    KirkmanSystem s;
    check_order(out, v, &c, &s);
    if (s.order != v) continue;
    ++built;
    const int64_t k = 2 * n + 1;
    if (k % 3 == 0) continue;
    // Sub-case 2: Q is the product of the components 1 (mod 4).
    int64_t q = 1, rest = k;
    for (int64_t p = 5; p <= rest; p += 2) {
      int64_t comp = 1;
      while (rest % p == 0) {
        rest /= p;
        comp *= p;
      }
      if (comp > 1 && comp % 4 == 1) q *= comp;
    }
    if (q == 1) continue;
    check_multipliers(out, s, c.family, oracle::odd_part(oracle::psi(q)));
    out.check(c.family.multipliers && c.family.multipliers->strong, "v=" + std::to_string(v) + ": multipliers not strong");
    ++witnessed;
  }
  out.note = std::to_string(built) + " orders, " + std::to_string(witnessed) + " multiplier witnesses";
}

void oracle_equivalence(Outcome& out) {
  int orders = 0;
  for (int64_t v = 9; v - 3 <= 360; v += 6) {
    if (!classify_order(v).covered) continue;
    const auto c = construct_for_order(v);
    const auto s = build_kts(c.family, false);
    const auto reps = oracle::base_blocks(s);
    out.check(reps.size() == c.family.blocks.size(), "v=" + std::to_string(v) + ": base block count");
    out.check(oracle::differences(s.group, reps) == oracle::differences(c.family.group, c.family.blocks),
              "v=" + std::to_string(v) + ": differences differ");
    ++orders;
  }
  out.note = std::to_string(orders) + " orders";
}

void properties(Outcome& out) {
  const auto t = props::run(kSeed);
  out.checks = t.checks;
  if (t.failures) {
    out.ok = false;
    out.first_failure = t.first.front();
  }
  out.check(t.checks >= kPropertyChecks, "only " + std::to_string(t.checks) + " checks");
  out.note = std::to_string(t.failures) + " failures";
}

void negative(Outcome& out) {
  int64_t first_uncovered = 0;
  for (int64_t v = 9; v <= 100000; v += 6) {
    const auto c = classify_order(v);
    const bool accepted = c.kind != OrderCase::NotPyramidal;
    out.check(accepted == oracle::admissible(v), "classify_order(" + std::to_string(v) + ")");
    // v - 3 pertinent exactly when admissible or v = 21 (mod 24).
    out.check(pertinent_order(v - 3) == (accepted || v % 24 == 21), "pertinence of " + std::to_string(v - 3));
    if (!first_uncovered && v % 24 == 9 && !oracle::sum_of_two_squares((v - 9) / 6 + 1)) first_uncovered = v;
  }
  out.check(first_uncovered == 129, "first uncovered order " + std::to_string(first_uncovered));
  kts_system* h = nullptr;
  out.check(kts_construct(first_uncovered, &h) == KTS_NOT_COVERED && h == nullptr, "construct on an uncovered order");
  kts_system_free(h);
  out.note = "first uncovered 24n+9 order " + std::to_string(first_uncovered);
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit;
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {
      {1, "golden KTS(9) and KTS(15)", kGoldenLimit, golden_tables},
      {2, "catalog integrity", kCatalogLimit, catalog},
      {3, "congruence-class sweep", kSweepLimit, sweep},
      {4, "24n+9 sample with automorphisms", 0, case_i},
      {5, "24n+15 sample with multipliers", 0, case_ii},
      {6, "oracle equivalence", 0, oracle_equivalence},
      {7, "property suite", 0, properties},
      {8, "negative coverage", 0, negative},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(out);
    } catch (const std::exception& e) {
      out.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0 && secs > c.limit) out.check(false, "time limit exceeded");
    all = all && out.ok;
    std::printf("criterion %d: %s  %s  checks=%lld  %.2fs%s%s\n", c.id, out.ok ? "PASS" : "FAIL", c.title,
                static_cast<long long>(out.checks), secs, out.note.empty() ? "" : ("  " + out.note).c_str(),
                out.ok ? "" : ("  first failure: " + out.first_failure).c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
