#include "kts/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <random>

#include "kts/catalog.hpp"
#include "kts/compose.hpp"
#include "kts/directcon.hpp"
#include "kts/errors.hpp"
#include "kts/finring.hpp"
#include "kts/pipeline.hpp"
#include "kts/verify.hpp"

namespace kts {

void CriterionResult::check(bool cond, const std::string& what) {
  ++checks;
  if (cond) return;
  ok = false;
  if (failures.size() < 10) failures.push_back(what);
}

std::string CriterionResult::line() const {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", seconds);
  std::string s = "criterion " + std::to_string(id) + " " + (ok ? "PASS" : "FAIL") + " [" + title + "] checks=" +
                  std::to_string(checks) + " time=" + buf + "s";
  if (time_limit > 0) {
    std::snprintf(buf, sizeof buf, "%.0f", time_limit);
    s += " (limit " + std::string(buf) + "s)";
  }
  if (!detail.empty()) s += " " + detail;
  for (const auto& f : failures) s += "\n  failure: " + f;
  return s;
}

namespace {

using Clock = std::chrono::steady_clock;
using Table = std::vector<std::vector<std::vector<std::string>>>;
using Classes = std::vector<std::vector<Triple>>;

// Parallel classes of the KTS(9) over D and the KTS(15) over G_1, elements as
// coordinate digits.
const Table kTable9 = {
    {{"inf1", "inf2", "inf3"}, {"00", "01", "02"}, {"10", "11", "12"}},
    {{"inf1", "00", "10"}, {"inf2", "01", "12"}, {"inf3", "02", "11"}},
    {{"inf1", "01", "11"}, {"inf2", "02", "10"}, {"inf3", "00", "12"}},
    {{"inf1", "02", "12"}, {"inf2", "00", "11"}, {"inf3", "01", "10"}},
};

const Table kTable15 = {
    {{"inf1", "inf2", "inf3"}, {"000", "100", "200"}, {"001", "101", "201"}, {"010", "110", "210"}, {"011", "111", "211"}},
    {{"inf1", "000", "011"}, {"inf2", "111", "100"}, {"inf3", "201", "210"}, {"001", "110", "211"}, {"010", "101", "200"}},
    {{"inf1", "001", "010"}, {"inf2", "110", "101"}, {"inf3", "200", "211"}, {"000", "111", "210"}, {"011", "100", "201"}},
    {{"inf1", "100", "110"}, {"inf2", "210", "200"}, {"inf3", "011", "001"}, {"111", "201", "010"}, {"101", "211", "000"}},
    {{"inf1", "101", "111"}, {"inf2", "211", "201"}, {"inf3", "010", "000"}, {"110", "200", "011"}, {"100", "210", "001"}},
    {{"inf1", "200", "201"}, {"inf2", "001", "000"}, {"inf3", "110", "111"}, {"210", "011", "101"}, {"211", "010", "100"}},
    {{"inf1", "211", "210"}, {"inf2", "010", "011"}, {"inf3", "101", "100"}, {"201", "000", "110"}, {"200", "001", "111"}},
};

int32_t table_point(const Group& g, const std::string& label) {
  for (int i = 0; i < 3; ++i)
    if (label == kInfinityLabels[i]) return static_cast<int32_t>(g.order() + i);
  std::vector<int> digits;
  for (char ch : label) digits.push_back(ch - '0');
  return static_cast<int32_t>(g.index(g.from_literal(digits)));
}

Classes sorted_classes(std::vector<std::vector<Triple>> c) {
  for (auto& cls : c) {
    for (auto& t : cls) std::sort(t.begin(), t.end());
    std::sort(cls.begin(), cls.end());
  }
  std::sort(c.begin(), c.end());
  return c;
}

Classes table_classes(const Group& g, const Table& t) {
  Classes c;
  for (const auto& cls : t) {
    c.emplace_back();
    for (const auto& b : cls) c.back().push_back({table_point(g, b[0]), table_point(g, b[1]), table_point(g, b[2])});
  }
  return sorted_classes(std::move(c));
}

// Points 0..|G|-1 are group elements in index order in built systems.
Classes system_classes(const KirkmanSystem& s) {
  Classes c;
  for (const auto& cls : s.resolution) {
    c.emplace_back();
    for (int32_t b : cls) c.back().push_back(s.blocks[static_cast<size_t>(b)]);
  }
  return sorted_classes(std::move(c));
}

int64_t odd_part(int64_t x) {
  while (x > 0 && x % 2 == 0) x /= 2;
  return x;
}

int64_t psi(int64_t n) { return n == 1 ? 1 : build_ring(n)->psi(); }

std::string fails_of(const std::vector<Report>& reports) {
  std::string s;
  for (const auto& r : reports)
    if (!r.ok) s += (s.empty() ? "" : "; ") + r.summary();
  return s;
}

// Builds and fully verifies the system of order v; returns the construction.
bool build_and_verify(CriterionResult& res, int64_t v, Construction* out = nullptr, KirkmanSystem* sys = nullptr) {
  try {
    Construction c = construct_for_order(v);
    KirkmanSystem s = build_kts(c.family, false);
    const auto reports = verify_system(s, VerifyLevel::Full);
    res.check(all_ok(reports) && s.order == v, "v=" + std::to_string(v) + ": " + fails_of(reports));
    if (out) *out = std::move(c);
    if (sys) *sys = std::move(s);
    return true;
  } catch (const std::exception& e) {
    res.check(false, "v=" + std::to_string(v) + ": " + e.what());
    return false;
  }
}

void criterion_golden(CriterionResult& r) {
  for (auto [v, table] : {std::pair<int64_t, const Table*>{9, &kTable9}, {15, &kTable15}}) {
    const auto s = build_kts(construct_for_order(v).family);
    r.check(system_classes(s) == table_classes(s.group, *table), "KTS(" + std::to_string(v) + ") classes differ from the printed table");
    r.check(all_ok(verify_system(s, VerifyLevel::Full)), "KTS(" + std::to_string(v) + ") fails verification");
  }
}

void criterion_catalog(CriterionResult& r) {
  const auto rep = catalog_self_check();
  for (const auto& line : rep.lines) r.check(line.find("QUARANTINED") == std::string::npos, line);
  r.check(rep.total == 14, "catalog has " + std::to_string(rep.total) + " entries, expected 14");
  r.detail = std::to_string(rep.verified) + "/" + std::to_string(rep.total) + " entries verified";
}

void criterion_congruence(CriterionResult& r) {
  std::vector<int64_t> orders;
  for (int64_t v = 39; v <= 1500; v += 72) orders.push_back(v);
  for (int64_t p = 1; p <= 16; p *= 4)
    for (int64_t v = 48 * p + 3; v <= 2000; v += 96 * p) orders.push_back(v);
  for (int64_t v : orders) {
    r.check(classify_order(v).covered, "v=" + std::to_string(v) + " not covered");
    build_and_verify(r, v);
  }
  r.detail = std::to_string(orders.size()) + " orders";
}

void criterion_case_i(CriterionResult& r) {
  int built = 0;
  for (int64_t n = 0; n <= 40; ++n) {
    const int64_t v = 24 * n + 9;
    if (!sum_of_two_squares(4 * n + 1)) {
      r.check(!classify_order(v).covered, "v=" + std::to_string(v) + " should be uncovered");
      continue;
    }
    Construction c;
    KirkmanSystem s;
    if (!build_and_verify(r, v, &c, &s)) continue;
    ++built;
    const auto aut = automorphism_lower_bound(s, c.family);
    const int64_t want = (24 * n + 6) * odd_part(psi(4 * n + 1));
    r.check(aut.bound == want, "v=" + std::to_string(v) + ": bound " + std::to_string(aut.bound) + ", expected " + std::to_string(want));
    const auto rep = verify_automorphisms(s, aut.generators);
    r.check(rep.ok && rep.get("group_order") == want, "v=" + std::to_string(v) + ": " + rep.summary());
  }
  r.detail = std::to_string(built) + " orders with automorphism witnesses";
}

bool condition_ii(int64_t n) {
  const int64_t k = 2 * n + 1;
  if (k % 3 == 0) return true;
  for (const auto& c : components_of(k))
    if (c.exponent % 2 == 1 && c.prime % 12 == 11) return false;
  return true;
}

void criterion_case_ii(CriterionResult& r) {
  int built = 0, witnessed = 0, nontrivial = 0;
  for (int64_t n = 0; 24 * n + 15 <= 1500; ++n) {
    const int64_t v = 24 * n + 15;
    const auto cls = classify_order(v);
    r.check(cls.covered == condition_ii(n), "v=" + std::to_string(v) + ": coverage disagrees with condition (ii)");
    if (!cls.covered) continue;
    Construction c;
    KirkmanSystem s;
    if (!build_and_verify(r, v, &c, &s)) continue;
    ++built;
    if (cls.route != "ii.2") continue;
    int64_t q = 1;
    for (const auto& comp : components_of(2 * n + 1))
      if (comp.value % 4 == 1) q *= comp.value;
    if (q == 1) continue;
    const int64_t m = odd_part(psi(q));
    const auto aut = automorphism_lower_bound(s, c.family);
    const auto& mg = c.family.multipliers;
    r.check(aut.multiplier_order == m && (m == 1 || (mg && mg->strong)),
            "v=" + std::to_string(v) + ": multiplier order " + std::to_string(aut.multiplier_order) + ", expected " + std::to_string(m));
    const auto rep = verify_automorphisms(s, aut.generators);
    r.check(rep.ok && rep.get("group_order") == s.group_order() * m, "v=" + std::to_string(v) + ": " + rep.summary());
    ++witnessed;
    if (m > 1) ++nontrivial;
  }
  r.check(nontrivial > 0, "no strong multiplier group of order > 1 was witnessed");
  r.detail = std::to_string(built) + " orders, " + std::to_string(witnessed) + " multiplier witnesses (" +
             std::to_string(nontrivial) + " nontrivial)";
}

std::vector<Element> sorted_delta(const Group& g, const std::vector<Block>& blocks) {
  auto d = delta_family(g, blocks);
  std::sort(d.begin(), d.end());
  return d;
}

void criterion_oracle(CriterionResult& r) {
  int orders = 0;
  for (int64_t v = 9; v <= 363; v += 6) {
    if (!classify_order(v).covered) continue;
    ++orders;
    const auto c = construct_for_order(v);
    const auto s = build_kts(c.family, false);
    const auto reps = extract_base_blocks(s);
    r.check(reps.size() == c.family.blocks.size() && sorted_delta(s.group, reps) == sorted_delta(c.family.group, c.family.blocks),
            "v=" + std::to_string(v) + ": extracted base blocks do not regenerate the witness differences");
  }
  r.detail = std::to_string(orders) + " orders";
}

// Randomized property checks.
class Properties {
 public:
  Properties(CriterionResult& r, uint64_t seed) : r_(r), rng_(seed) {}

  void run() {
    halving_property(3000);
    unit_orbits(600);
    group_axioms(3000);
    galpha_difference(2000);
    pertinent_witnesses();
    resolvable_is_doubly_disjoint(60);
    strong_equivalence();
  }

 private:
  size_t pick(size_t n) { return static_cast<size_t>(rng_() % n); }

  // x_i y_i non-square in every component implies {x, y} S = F_n^*.
  void halving_property(int rounds) {
    std::vector<int64_t> ns;
    for (int64_t n = 3; n <= 301; n += 2) ns.push_back(n);
    for (int t = 0; t < rounds; ++t) {
      const auto ring = build_ring(ns[pick(ns.size())]);
      const auto s = halving(*ring);
      RingElement x(ring->arity()), y(ring->arity());
      for (size_t i = 0; i < ring->arity(); ++i) {
        const Field& f = ring->field(i);
        x[i] = 1 + static_cast<int>(pick(static_cast<size_t>(f.order() - 1)));
        const auto ns_i = f.nonsquares();
        y[i] = f.mul(ns_i[pick(ns_i.size())], f.inv(x[i]));
      }
      std::vector<int> hits(static_cast<size_t>(ring->order()), 0);
      for (const auto& e : s) {
        ++hits[static_cast<size_t>(ring->index(ring->mul(x, e)))];
        ++hits[static_cast<size_t>(ring->index(ring->mul(y, e)))];
      }
      bool good = hits[0] == 0;
      for (size_t i = 1; i < hits.size() && good; ++i) good = hits[i] == 1;
      r_.check(good, "halving property fails in " + ring->name());
    }
  }

  // U S = V_n^*: a random nonzero element has exactly one factorisation.
  void unit_orbits(int rounds) {
    std::vector<std::pair<int64_t, int>> cases;
    for (int lambda : {4, 6})
      for (int64_t n = 5; n <= 400; n += 2) {
        bool fits = true;
        for (const auto& c : components_of(n)) fits = fits && c.value % lambda == 1;
        if (fits) cases.push_back({n, lambda});
      }
    for (int t = 0; t < rounds; ++t) {
      const auto [n, lambda] = cases[pick(cases.size())];
      const auto ring = build_ring(n);
      const auto sys = semiregular_system(*ring, lambda);
      const RingElement target = ring->at(1 + static_cast<int64_t>(pick(static_cast<size_t>(n - 1))));
      int found = 0;
      for (const auto& u : sys.cyclic)
        for (const auto& s : sys.representatives) found += ring->mul(u, s) == target;
      r_.check(found == 1, "U S misses or repeats an element of " + ring->name());
    }
  }

  void group_axioms(int rounds) {
    static const char* names[] = {"D", "G1", "G2", "G3", "G4", "DxV25", "G1xV3xV7", "G2xV5xV9", "Z2xZ6", "Z4xZ4", "G3xV3"};
    for (int t = 0; t < rounds; ++t) {
      const Group g = Group::parse(names[pick(std::size(names))]);
      auto rnd = [&] { return g.at(static_cast<int64_t>(pick(static_cast<size_t>(g.order())))); };
      const Element x = rnd(), y = rnd(), z = rnd();
      const bool good = g.add(g.add(x, y), z) == g.add(x, g.add(y, z)) && g.add(x, g.zero()) == x &&
                        g.add(g.zero(), x) == x && g.add(x, g.neg(x)) == g.zero() && g.sub(x, y) == g.add(x, g.neg(y)) &&
                        g.contains(g.add(x, y));
      r_.check(good, "group axioms fail in " + g.name());
    }
  }

  // (a,b,c) - (d,e,f) = (a-d, b-e, c-f) Theta^{-d}, written out per d.
  void galpha_difference(int rounds) {
    for (int t = 0; t < rounds; ++t) {
      const int alpha = 1 + static_cast<int>(pick(5));
      const Group g({Atom::galpha(alpha)});
      const int m = 1 << alpha;
      auto md = [m](int v) { return ((v % m) + m) % m; };
      const auto x = g.literal(g.at(static_cast<int64_t>(pick(static_cast<size_t>(g.order())))));
      const auto y = g.literal(g.at(static_cast<int64_t>(pick(static_cast<size_t>(g.order())))));
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
      r_.check(g.sub(g.from_literal(x), g.from_literal(y)) == g.from_literal(want), "difference formula fails in " + g.name());
    }
  }

  void pertinent_witnesses() {
    for (int64_t n = 1; n <= 1000; ++n) {
      bool expected = n % 12 == 6;
      for (int64_t p = 4; p <= n && !expected; p *= 4) expected = n % p == 0 && (n / p) % 6 == 3;
      r_.check(pertinent_order(n) == expected, "pertinent_order(" + std::to_string(n) + ")");
      if (!expected) continue;
      const Group g = pertinent_witness(n);
      r_.check(g.order() == n && g.is_pertinent(), "witness of order " + std::to_string(n) + " is not pertinent");
    }
  }

  // A J-resolvable relative family is doubly disjoint with every t_i = j.
  void resolvable_is_doubly_disjoint(int rounds) {
    std::vector<FamilyWitness> pool;
    for (const auto& id : catalog_ids()) {
      const auto& e = catalog_entry(id);
      if (e.family && e.family->kind == FamilyKind::RDF && !e.family->spread_x) pool.push_back(*e.family);
    }
    auto components_mod = [](int64_t n, int64_t mod, int64_t rem) {
      for (const auto& c : components_of(n))
        if (c.value % mod != rem) return false;
      return true;
    };
    for (int t = 0; t < rounds; ++t) {
      const int which = static_cast<int>(pick(4));
      if (which == 0) {
        int64_t k;
        do k = 5 + 4 * static_cast<int64_t>(pick(25)); while (!components_mod(k, 4, 1));
        pool.push_back(construct_9mod24((k - 1) / 4));
      } else if (which == 1) {
        int64_t k;
        do k = 5 + 4 * static_cast<int64_t>(pick(20)); while (!components_mod(k, 4, 1));
        pool.push_back(construct_15mod24(k));
      } else if (which == 2) {
        int64_t k;
        do k = 7 + 6 * static_cast<int64_t>(pick(15)); while (!components_mod(k, 6, 1));
        pool.push_back(construct_15mod24bis(k));
      } else {
        int64_t k;
        do k = 7 + 4 * static_cast<int64_t>(pick(12)); while (!components_mod(k, 4, 3) || k % 3 == 0);
        pool.push_back(lift_prdf(catalog_family(pick(2) ? "prdf:G1xV3" : "prdf:G2"), k));
      }
    }
    for (auto w : pool) {
      if (!w.j) {
        r_.check(false, "resolvable family over " + w.group.name() + " has no j");
        continue;
      }
      w.kind = FamilyKind::DDDF;
      w.translates.assign(w.blocks.size(), *w.j);
      w.multipliers.reset();
      r_.check(is_doubly_disjoint(w).ok, "family over " + w.group.name() + " is not doubly disjoint with t_i = j");
    }
  }

  // Splittable composition equals the plain one with the second half of the
  // columns of each block moved by t_i.
  void strong_equivalence() {
    for (int64_t n : {5, 9, 13, 17, 25, 29, 37, 41, 45, 49, 53, 61, 65}) {
      const auto f = construct_dddf(n);
      const auto frame = product_frame(Group({Atom::galpha(1), Atom::vn(3), Atom::vn(n)}), {0});
      const auto& m = fixed_splittable_dm("G1");
      const auto w = df_compose_dm(f, m, frame, ComposeMode::Splittable);
      const auto plain = df_compose_dm(f, m, frame, ComposeMode::Plain);
      const auto t = splitting_translates(f, m, frame);
      const size_t cols = static_cast<size_t>(m.group.order());
      r_.check(w.blocks.size() == plain.blocks.size() && w.blocks.size() == f.blocks.size() * cols,
               "composition sizes differ for n=" + std::to_string(n));
      if (w.blocks.size() != f.blocks.size() * cols) continue;
      for (size_t i = 0; i < f.blocks.size(); ++i)
        for (size_t c = 0; c < cols; ++c) {
          const size_t k = i * cols + c;
          bool same = true;
          for (size_t p = 0; p < 3; ++p) {
            const Element want = c < cols / 2 ? plain.blocks[k][p] : w.group.add(plain.blocks[k][p], t[i]);
            same = same && w.blocks[k][p] == want;
          }
          r_.check(same, "block " + std::to_string(k) + " of the n=" + std::to_string(n) + " composition is not strongly equivalent");
        }
      r_.check(check_declared(w).ok, "splittable composition for n=" + std::to_string(n) + " fails its predicate");
    }
  }

  CriterionResult& r_;
  std::mt19937_64 rng_;
};

void criterion_properties(CriterionResult& r, uint64_t seed) {
  Properties(r, seed).run();
  r.check(r.checks >= 10000, "only " + std::to_string(r.checks) + " property checks ran");
  r.detail = "seed " + std::to_string(seed);
}

bool necessary_condition(int64_t v) {
  if (v % 24 == 9 || v % 24 == 15) return true;
  if (v % 48 != 3) return false;
  int64_t n = (v - 3) / 48;
  while (n % 4 == 0) n /= 4;
  return n % 2 == 1;
}

void criterion_negative(CriterionResult& r) {
  int64_t first_uncovered = 0;
  for (int64_t v = 9; v <= 100000; v += 6) {
    const auto c = classify_order(v);
    const bool accepted = c.kind != OrderCase::NotPyramidal;
    r.check(accepted == necessary_condition(v), "classify_order(" + std::to_string(v) + ") disagrees with the necessary condition");
    r.check(accepted == (pertinent_order(v - 3) && v % 24 != 21), "v=" + std::to_string(v) + ": pertinence cross-check");
    if (!first_uncovered && c.kind == OrderCase::NineMod24 && !c.covered) first_uncovered = v;
  }
  r.check(first_uncovered == 129, "first uncovered 24n+9 order is " + std::to_string(first_uncovered));
  for (int64_t v : {first_uncovered, int64_t{99}, int64_t{21}}) {
    bool typed = false;
    try {
      (void)construct_for_order(v);
    } catch (const NotCovered&) {
      typed = true;
    } catch (const std::exception&) {
    }
    r.check(typed, "construct(" + std::to_string(v) + ") did not report NotCovered");
  }
  r.detail = "first uncovered 24n+9 order " + std::to_string(first_uncovered);
}

}  // namespace

CriterionResult run_criterion(int id, uint64_t seed) {
  static const char* titles[] = {"golden KTS(9) and KTS(15)", "catalog integrity", "congruence-class sweep",
                                 "24n+9 sample with automorphisms", "24n+15 sample with multipliers",
                                 "oracle equivalence", "property suite", "negative coverage"};
  static const double limits[] = {1, 5, 600, 0, 0, 0, 0, 0};
  if (id < 1 || id > 8) throw PreconditionError("criterion id must be 1..8");
  CriterionResult r;
  r.id = id;
  r.title = titles[id - 1];
  r.time_limit = limits[id - 1];
  const auto start = Clock::now();
  try {
    switch (id) {
      case 1: criterion_golden(r); break;
      case 2: criterion_catalog(r); break;
      case 3: criterion_congruence(r); break;
      case 4: criterion_case_i(r); break;
      case 5: criterion_case_ii(r); break;
      case 6: criterion_oracle(r); break;
      case 7: criterion_properties(r, seed); break;
      default: criterion_negative(r); break;
    }
  } catch (const std::exception& e) {
    r.check(false, std::string("unexpected exception: ") + e.what());
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (r.time_limit > 0 && r.seconds > r.time_limit) {
    r.ok = false;
    r.failures.push_back("time limit exceeded");
  }
  return r;
}

std::vector<CriterionResult> run_selftest(const std::vector<int>& ids, uint64_t seed) {
  std::vector<CriterionResult> out;
  if (ids.empty())
    for (int id = 1; id <= 8; ++id) out.push_back(run_criterion(id, seed));
  else
    for (int id : ids) out.push_back(run_criterion(id, seed));
  return out;
}

}  // namespace kts
