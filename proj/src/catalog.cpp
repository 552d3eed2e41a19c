#include "kts/catalog.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "kts/errors.hpp"

namespace kts {

namespace {

// Elements are written as digit strings, one digit per literal coordinate:
// "211" is (2,1,1). Blocks are three such words.
Element word(const Group& g, const std::string& w) {
  std::vector<int> lit;
  for (char ch : w) lit.push_back(ch - '0');
  return g.from_literal(lit);
}

std::vector<Block> blocks(const Group& g, std::initializer_list<const char*> rows) {
  std::vector<Block> out;
  for (const char* r : rows) {
    std::istringstream in(r);
    std::string a, b, c;
    in >> a >> b >> c;
    out.push_back({word(g, a), word(g, b), word(g, c)});
  }
  return out;
}

CatalogEntry make_entry(std::string id, std::string desc, std::optional<FamilyWitness> f,
                        std::optional<DifferenceMatrix> m) {
  CatalogEntry e;
  e.id = std::move(id);
  e.description = std::move(desc);
  e.family = std::move(f);
  e.matrix = std::move(m);
  return e;
}

std::vector<Element> row(const Group& g, const char* text) {
  std::istringstream in(text);
  std::vector<Element> out;
  for (std::string w; in >> w;) out.push_back(word(g, w));
  return out;
}

CatalogEntry spread_rdf(std::string id, std::string desc, const char* group, std::initializer_list<const char*> rows,
                        const char* x, const char* j, const char* a, const char* b) {
  const Group g = Group::parse(group);
  FamilyWitness w;
  w.group = g;
  w.kind = FamilyKind::RDF;
  w.blocks = blocks(g, rows);
  w.spread_x = word(g, x);
  w.j = word(g, j);
  if (a) w.a = word(g, a);
  if (b) w.b = word(g, b);
  return make_entry(std::move(id), std::move(desc), w, std::nullopt);
}

CatalogEntry relative_rdf(std::string id, std::string desc, const char* group, std::initializer_list<const char*> rows,
                          std::initializer_list<const char*> h_gens, const char* j) {
  const Group g = Group::parse(group);
  FamilyWitness w;
  w.group = g;
  w.kind = FamilyKind::RDF;
  w.blocks = blocks(g, rows);
  for (const char* h : h_gens) w.relative.push_back(word(g, h));
  w.j = word(g, j);
  return make_entry(std::move(id), std::move(desc), w, std::nullopt);
}

CatalogEntry prdf(std::string id, std::string desc, const char* group, std::initializer_list<const char*> rows,
                  const char* x) {
  const Group g = Group::parse(group);
  FamilyWitness w;
  w.group = g;
  w.kind = FamilyKind::PRDF;
  w.blocks = blocks(g, rows);
  w.spread_x = word(g, x);
  return make_entry(std::move(id), std::move(desc), w, std::nullopt);
}

CatalogEntry dm(std::string id, std::string desc, const char* group, const char* r0, const char* r1, const char* r2,
                const char* j) {
  const Group g = Group::parse(group);
  DifferenceMatrix m{g, {row(g, r0), row(g, r1), row(g, r2)}, word(g, j)};
  return make_entry(std::move(id), std::move(desc), std::nullopt, m);
}

std::vector<CatalogEntry> literal_entries() {
  std::vector<CatalogEntry> v;
  v.push_back(spread_rdf("rdf:D:empty", "empty resolvable family over D (KTS(9))", "D", {}, "01", "10", "12", "11"));
  v.push_back(spread_rdf("rdf:G1", "singleton resolvable family over G1 (KTS(15))", "G1", {"001 110 211"}, "100", "011",
                         "111", "201"));
  v.push_back(spread_rdf("rdf:DxV5", "four-block resolvable family over DxV5 (KTS(33))", "DxV5",
                         {"003 002 024", "001 013 122", "004 023 111", "011 014 112"}, "010", "100", "110", "120"));
  v.push_back(spread_rdf("rdf:G1xV3", "five-block resolvable family over G1xV3 (KTS(39))", "G1xV3",
                         {"0002 0111 1001", "0012 2012 2101", "0100 1012 2010", "0101 1110 2000", "1011 1100 2112"},
                         "0001", "0110", "1002", "2001"));
  const auto g2_rel = {"001 230 231", "011 012 021", "110 101 211", "112 203 131", "210 103 031", "010 223 133"};
  v.push_back(relative_rdf("rdf:G2:rel-G1", "six-block family over G2 relative to Z3x2Z4x2Z4", "G2", g2_rel,
                           {"100", "020", "002"}, "022"));
  v.push_back(spread_rdf("rdf:G2", "seven-block resolvable family over G2 (KTS(51))", "G2",
                         {"001 230 231", "011 012 021", "110 101 211", "112 203 131", "210 103 031", "010 223 133",
                          "002 120 222"},
                         "100", "022", nullptr, nullptr));
  v.push_back(prdf("prdf:G1xV3", "five-block pseudo-resolvable family over G1xV3", "G1xV3",
                   {"0012 0111 1002", "0101 1001 2100", "0112 2000 2001", "1011 1100 2102", "1102 2002 2011"}, "1000"));
  v.push_back(prdf("prdf:G1xV9", "seventeen-block pseudo-resolvable family over G1xV9", "G1xV9",
                   {"00001 01120 10111", "00002 20020 21000", "00010 01020 10012", "00011 20021 20120",
                    "00012 01010 20110", "00021 01002 10112", "00022 00101 20012", "00112 11120 21022",
                    "00122 10110 20022", "01011 20101 21100", "01021 11122 20001", "10100 11110 21011",
                    "10101 10121 10122", "11002 20011 20102", "11020 11111 20112", "11101 20121 21102",
                    "11102 11121 21110"},
                   "10000"));
  v.push_back(prdf("prdf:G2", "seven-block pseudo-resolvable family over G2", "G2",
                   {"001 031 212", "010 103 232", "011 133 202", "012 102 213", "021 200 201", "110 123 131",
                    "112 203 233"},
                   "100"));
  v.push_back(relative_rdf(
      "rdf:G2xV3:rel-G1xV3", "eighteen-block family over G2xV3 relative to Z3x2Z4x2Z4xV3", "G2xV3",
      {"0010 1312 2101", "0011 0102 1332", "0012 0331 1120", "0030 2312 2320", "0031 0130 1100", "0100 1311 2010",
       "0101 1031 2311", "0110 2212 2301", "0120 0212 1330", "0122 0311 2011", "0132 1012 2300", "0301 1032 2130",
       "0332 1030 2302", "1010 1122 1130", "1011 1111 1121", "1101 2030 2110", "1102 2112 2211", "2102 2111 2232"},
      {"1000", "0200", "0020", "0001"}, "0220"));
  v.push_back(relative_rdf(
      "rdf:G3:rel-G2", "twenty-four-block family over G3 relative to Z3x2Z8x2Z8", "G3",
      {"001 052 075", "003 211 252", "005 217 236", "007 011 270", "010 073 261", "014 147 275",
       "015 056 267", "017 132 245", "021 235 250", "025 114 115", "030 111 161", "033 203 210",
       "035 136 221", "036 123 135", "057 070 145", "063 112 237", "067 133 152", "076 263 277",
       "110 143 215", "113 141 274", "117 212 243", "137 241 276", "163 174 257", "165 170 175"},
      {"100", "020", "002"}, "044"));
  v.push_back(dm("dm:G1", "splittable difference matrix over G1", "G1",
                 "000 010 100 110 200 210 011 001 111 101 211 201",
                 "000 100 210 010 110 200 000 101 010 210 200 100",
                 "010 200 210 100 000 110 101 001 200 011 201 111", "011"));
  v.push_back(dm("dm:Z2xZ6", "splittable difference matrix over Z2xZ6", "Z2xZ6",
                 "00 01 02 03 04 05 10 11 12 13 14 15", "00 12 15 04 01 03 00 13 11 05 02 04",
                 "03 01 15 12 00 04 11 05 04 03 12 00", "10"));
  v.push_back(dm("dm:Z4xZ4", "splittable homogeneous difference matrix over Z4xZ4", "Z4xZ4",
                 "00 30 11 20 01 10 31 21 22 12 33 02 23 32 13 03",
                 "22 11 30 10 21 23 02 31 13 20 32 00 12 33 01 03",
                 "22 31 03 01 10 30 20 33 32 12 00 21 13 23 11 02", "22"));
  return v;
}

// The homogeneous flag is part of the Z4xZ4 matrix's declared contract.
bool wants_homogeneous(const std::string& id) { return id == "dm:Z4xZ4"; }

Diagnosis check_matrix(const std::string& id, const DifferenceMatrix& m) {
  Diagnosis d;
  const DmReport r = dm_check(m);
  if (!r.valid) d.fail("not a difference matrix");
  if (m.j && !r.splittable) d.fail("not splittable");
  if (wants_homogeneous(id) && !r.homogeneous) d.fail("not homogeneous");
  return d;
}

Diagnosis check_entry(const CatalogEntry& e) {
  try {
    if (e.family) return check_declared(*e.family);
    return check_matrix(e.id, *e.matrix);
  } catch (const std::exception& ex) {
    Diagnosis d;
    d.fail(ex.what());
    return d;
  }
}

// Every single-coordinate edit of the literal data that makes the entry pass.
std::vector<std::string> repair_search(const CatalogEntry& e) {
  std::vector<std::string> found;
  auto try_edits = [&](const Group& g, Element& slot, const std::string& where, auto&& recheck) {
    const Element original = slot;
    auto lit = g.literal(original);
    const auto& radices = g.radices();
    const int bound = radices.empty() ? 1 : *std::max_element(radices.begin(), radices.end());
    for (size_t k = 0; k < lit.size(); ++k) {
      const int keep = lit[k];
      // from_literal rejects values out of range for the coordinate.
      for (int v = 0; v < bound; ++v) {
        if (v == keep) continue;
        lit[k] = v;
        try {
          slot = g.from_literal(lit);
        } catch (const MalformedInput&) {
          continue;
        }
        if (recheck()) found.push_back(where + " coordinate " + std::to_string(k) + ": " + std::to_string(keep) + " -> " +
                                       std::to_string(v));
      }
      lit[k] = keep;
    }
    slot = original;
  };
  CatalogEntry copy = e;
  if (copy.family) {
    auto& w = *copy.family;
    for (size_t i = 0; i < w.blocks.size(); ++i)
      for (size_t k = 0; k < 3; ++k)
        try_edits(w.group, w.blocks[i][k], "block " + std::to_string(i) + " element " + std::to_string(k),
                  [&] { return check_entry(copy).ok; });
  } else {
    auto& m = *copy.matrix;
    for (size_t r = 0; r < 3; ++r)
      for (size_t c = 0; c < m.rows[r].size(); ++c)
        try_edits(m.group, m.rows[r][c], "row " + std::to_string(r) + " column " + std::to_string(c),
                  [&] { return check_entry(copy).ok; });
  }
  return found;
}

struct Store {
  std::vector<CatalogEntry> entries;
  std::map<std::string, size_t> by_id;

  Store() {
    entries = literal_entries();
    for (size_t i = 0; i < entries.size(); ++i) {
      auto& e = entries[i];
      by_id[e.id] = i;
      const Diagnosis d = check_entry(e);
      e.verified = d.ok;
      e.diagnosis = d.summary();
      if (!d.ok) e.repairs = repair_search(e);
      // Record the resolving pair found by search when none was transcribed.
      if (d.ok && e.family && e.family->kind == FamilyKind::RDF && e.family->spread_x && !e.family->a &&
          !d.solutions.empty()) {
        e.family->a = d.solutions.front().first;
        e.family->b = d.solutions.front().second;
      }
      // Prefer the pair whose j_beta is the canonical involution, the one the lifts resolve by.
      if (d.ok && e.family && e.family->kind == FamilyKind::PRDF && !d.solutions.empty()) {
        auto pick = d.solutions.front();
        const auto canon = e.family->group.canonical_involution();
        for (const auto& s : d.solutions)
          if (canon && s.second == *canon) {
            pick = s;
            break;
          }
        e.family->j_alpha = pick.first;
        e.family->j_beta = pick.second;
      }
    }
  }
};

const Store& store() {
  static const Store s;
  return s;
}

}  // namespace

std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const auto& e : store().entries) ids.push_back(e.id);
  return ids;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  const auto& s = store();
  auto it = s.by_id.find(id);
  if (it == s.by_id.end()) throw UnknownId("unknown catalog id '" + id + "'");
  return s.entries[it->second];
}

const FamilyWitness& catalog_family(const std::string& id) {
  const auto& e = catalog_entry(id);
  if (!e.family) throw PreconditionError("catalog entry '" + id + "' is not a family");
  if (!e.verified) throw DataError("catalog entry '" + id + "' is quarantined: " + e.diagnosis);
  return *e.family;
}

const DifferenceMatrix& catalog_matrix(const std::string& id) {
  const auto& e = catalog_entry(id);
  if (!e.matrix) throw PreconditionError("catalog entry '" + id + "' is not a difference matrix");
  if (!e.verified) throw DataError("catalog entry '" + id + "' is quarantined: " + e.diagnosis);
  return *e.matrix;
}

CatalogReport catalog_self_check() {
  CatalogReport r;
  for (const auto& e : store().entries) {
    ++r.total;
    if (e.verified) ++r.verified;
    std::string line = e.id + ": " + (e.verified ? "verified" : "QUARANTINED (" + e.diagnosis + ")");
    for (const auto& fix : e.repairs) line += "; candidate repair " + fix;
    r.lines.push_back(line);
  }
  return r;
}

CatalogEntry catalog_raw(const std::string& id) {
  for (auto& e : literal_entries())
    if (e.id == id) return e;
  throw UnknownId("unknown catalog id '" + id + "'");
}

Diagnosis catalog_check(const CatalogEntry& e) { return check_entry(e); }

}  // namespace kts
