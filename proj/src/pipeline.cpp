#include "kts/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

#include "kts/catalog.hpp"
#include "kts/directcon.hpp"
#include "kts/errors.hpp"
#include "kts/verify.hpp"

namespace kts {

std::string to_string(OrderCase c) {
  switch (c) {
    case OrderCase::NineMod24: return "24n+9";
    case OrderCase::FifteenMod24: return "24n+15";
    case OrderCase::FortyEightPlus3: return "48n+3";
    case OrderCase::NotPyramidal: return "not 3-pyramidal";
  }
  return "?";
}

bool sum_of_two_squares(int64_t k) {
  if (k < 1) throw PreconditionError("sum_of_two_squares: k must be positive");
  for (const auto& c : components_of(k))
    if (c.prime % 4 == 3 && c.exponent % 2 == 1) return false;
  return true;
}

namespace {

struct Split {
  int64_t p = 1;  // components 3 (mod 4), or 7 (mod 12) in sub-case 2
  int64_t q = 1;  // components 1 (mod 4)
  int64_t rest = 1;
};

Split split_mod4(int64_t n) {
  Split s;
  for (const auto& c : components_of(n)) (c.value % 4 == 3 ? s.p : s.q) *= c.value;
  return s;
}

Split split_mod12(int64_t n) {
  Split s;
  for (const auto& c : components_of(n)) {
    if (c.value % 12 == 7)
      s.p *= c.value;
    else if (c.value % 4 == 1)
      s.q *= c.value;
    else
      s.rest *= c.value;
  }
  return s;
}

bool has_component(int64_t n, int64_t value) {
  for (const auto& c : components_of(n))
    if (c.value == value) return true;
  return false;
}

int valuation3(int64_t n) {
  int k = 0;
  for (; n % 3 == 0; n /= 3) ++k;
  return k;
}

std::string str(int64_t x) { return std::to_string(x); }

}  // namespace

OrderClass classify_order(int64_t v) {
  if (v < 9 || v % 6 != 3) throw PreconditionError("classify_order: v must be 3 (mod 6) and at least 9, got " + str(v));
  OrderClass c;
  c.v = v;
  if ((v - 9) % 24 == 0) {
    c.kind = OrderCase::NineMod24;
    c.n = (v - 9) / 24;
    c.covered = c.n == 0 || sum_of_two_squares(4 * c.n + 1);
    c.route = "i";
    c.explanation = c.covered ? "24n+9 with n=" + str(c.n) + ", 4n+1=" + str(4 * c.n + 1) + " a sum of two squares"
                              : "24n+9 with n=" + str(c.n) + ": 4n+1=" + str(4 * c.n + 1) +
                                    " is not a sum of two squares; no construction covers it";
  } else if ((v - 15) % 24 == 0) {
    c.kind = OrderCase::FifteenMod24;
    c.n = (v - 15) / 24;
    const int64_t big_n = 2 * c.n + 1;
    if (big_n % 3 == 0) {
      c.covered = true;
      c.route = "ii.1";
      c.explanation = "24n+15 with n=" + str(c.n) + ", 3 divides 2n+1=" + str(big_n);
    } else {
      const Split s = split_mod12(big_n);
      c.covered = s.rest == 1;
      c.route = "ii.2";
      c.explanation = c.covered ? "24n+15 with n=" + str(c.n) + ", 2n+1=" + str(big_n) + " has no prime 11 (mod 12) in its square-free part"
                                : "24n+15 with n=" + str(c.n) + ": 2n+1=" + str(big_n) +
                                      " is prime to 3 and has a prime 11 (mod 12) in its square-free part; no construction covers it";
    }
  } else if ((v - 3) % 48 == 0) {
    c.kind = OrderCase::FortyEightPlus3;
    c.n = (v - 3) / 48;
    int64_t m = c.n;
    int two = 0;
    for (; m % 2 == 0; m /= 2) ++two;
    if (two % 2 == 1) {
      c.kind = OrderCase::NotPyramidal;
      c.explanation = "48n+3 with n=" + str(c.n) + " not of form 4^e*odd";
    } else {
      c.e = two / 2;
      c.m = m;
      c.covered = true;
      c.route = m == 1 ? "iii.1" : m == 3 ? "iii.2" : m % 3 == 0 ? "iii.3" : c.e == 0 ? "iii.4" : "iii.5";
      c.explanation = "48n+3 with n=" + str(c.n) + "=4^" + str(c.e) + "*" + str(m);
    }
  } else if (v % 24 == 21) {
    // v - 3 = 6 (4n+3) is pertinent, but no 3-pyramidal STS(v) exists.
    c.kind = OrderCase::NotPyramidal;
    c.explanation = "v=" + str(v) + " is 21 (mod 24): no 3-pyramidal Steiner triple system of this order exists";
  } else {
    c.kind = OrderCase::NotPyramidal;
    c.explanation = "v-3=" + str(v - 3) + " is 24 times an odd number, not the order of a pertinent group";
  }
  const bool pertinent = pertinent_order(v - 3);
  if (c.kind == OrderCase::NotPyramidal ? pertinent != (v % 24 == 21) : !pertinent)
    throw InternalError("classify_order: disagrees with pertinent_order at v=" + str(v));
  return c;
}

// ---------------------------------------------------------------------------
// Digests and trace nodes.

std::string family_digest(const FamilyWitness& w) {
  uint64_t h = 14695981039346656037ull;
  auto mix = [&h](uint8_t byte) {
    h ^= byte;
    h *= 1099511628211ull;
  };
  for (char ch : w.group.name()) mix(static_cast<uint8_t>(ch));
  for (const auto& b : canonical_family(w.blocks))
    for (const auto& x : b)
      for (int d : w.group.literal(x)) {
        const auto u = static_cast<uint32_t>(d);
        for (int s = 0; s < 32; s += 8) mix(static_cast<uint8_t>(u >> s));
      }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string relative_label(const FamilyWitness& w) {
  if (w.spread_x) return "spread {2^3,3}";
  const auto h = SubgroupView::generated(w.group, w.relative);
  return "order " + str(h.order());
}

TraceNode node(std::string step, std::string detail, const FamilyWitness& w, std::vector<TraceNode> children = {}) {
  TraceNode t;
  t.step = std::move(step);
  t.detail = std::move(detail);
  t.group = w.group.name();
  t.relative = relative_label(w);
  t.digest = family_digest(w);
  t.children = std::move(children);
  return t;
}

// Re-checks every intermediate family with the independent predicates.
void require_valid(const FamilyWitness& w, const std::string& what) {
  const Diagnosis d = check_declared(w);
  if (!d.ok) throw InternalError(what + " over " + w.group.name() + " failed its predicate: " + d.summary());
}

Construction catalog_step(const std::string& id) {
  const FamilyWitness& w = catalog_family(id);
  TraceNode t = node("catalog", id, w);
  t.catalog_ids = {id};
  return {w, t};
}

Construction direct_step(FamilyWitness w, const std::string& name, std::vector<TraceNode> children = {}) {
  require_valid(w, name);
  TraceNode t = node("direct", name, w, std::move(children));
  return {std::move(w), std::move(t)};
}

TraceNode matrix_node(const DifferenceMatrix& m, const std::string& detail, const std::string& catalog_id = {}) {
  TraceNode t;
  t.step = "matrix";
  t.detail = detail;
  t.group = m.group.name();
  if (!catalog_id.empty()) t.catalog_ids = {catalog_id};
  return t;
}

Construction compose_step(const Construction& f, const DifferenceMatrix& m, TraceNode m_node, const CompositionFrame& frame,
                          ComposeMode mode) {
  FamilyWitness w = df_compose_dm(f.family, m, frame, mode);
  require_valid(w, "composition " + frame.description);
  TraceNode t = node("compose", to_string(mode) + " composition, " + frame.description, w, {f.trace, std::move(m_node)});
  return {std::move(w), std::move(t)};
}

Construction compose_homogeneous(const Construction& f, const CompositionFrame& frame, const DifferenceMatrix* m = nullptr) {
  const DifferenceMatrix dm = m ? *m : homogeneous_dm(frame.h);
  return compose_step(f, dm, matrix_node(dm, "homogeneous (g, a g, b g) over " + frame.h.name()), frame, ComposeMode::Homogeneous);
}

Construction compose_splittable(const Construction& f, const std::string& dm_id, const CompositionFrame& frame) {
  const DifferenceMatrix& dm = fixed_splittable_dm(dm_id);
  return compose_step(f, dm, matrix_node(dm, "splittable " + dm_id, dm_id), frame, ComposeMode::Splittable);
}

struct Part {
  Construction c;
  std::vector<size_t> atom_map;  // empty: same group
  std::vector<int> scale;
};

std::vector<size_t> iota(size_t k) {
  std::vector<size_t> v(k);
  for (size_t i = 0; i < k; ++i) v[i] = i;
  return v;
}

ChainLink to_link(const Part& p) { return ChainLink{p.c.family, p.atom_map, p.scale}; }

Construction chain_step(const Group& g, const std::vector<Part>& parts, std::vector<TraceNode> notes = {}) {
  if (parts.size() == 1 && parts[0].atom_map.empty() && notes.empty()) return parts[0].c;
  std::vector<ChainLink> links;
  std::vector<TraceNode> children = std::move(notes);
  for (const auto& p : parts) {
    links.push_back(to_link(p));
    children.push_back(p.c.trace);
  }
  FamilyWitness w = chain_union(g, links);
  require_valid(w, "chain union");
  TraceNode t = node("chain", "union along " + str(static_cast<int64_t>(parts.size())) + " links", w, std::move(children));
  return {std::move(w), std::move(t)};
}

Construction pertinent_step(const Construction& outer, const Part& inner) {
  FamilyWitness w = pertinent_union(outer.family, to_link(inner));
  require_valid(w, "pertinent union");
  TraceNode t = node("pertinent-union", "closing spread family " + inner.c.family.group.name(), w, {outer.trace, inner.c.trace});
  return {std::move(w), std::move(t)};
}

TraceNode empty_note(const std::string& what) {
  TraceNode t;
  t.step = "empty";
  t.detail = what;
  return t;
}

Construction transport_step(const Construction& c, const Group& to) {
  if (c.family.group == to) return c;
  FamilyWitness w = transport_family(c.family, to);
  require_valid(w, "transport");
  TraceNode t = node("transport", "ring components regrouped " + c.family.group.name() + " -> " + to.name(), w, {c.trace});
  return {std::move(w), std::move(t)};
}

Group make_group(const std::vector<Atom>& atoms) { return Group(atoms); }

// ---------------------------------------------------------------------------
// Case ii with 3 | N: the (G_1 x V_N, G_1 x V_i)-RDF before closing, over
// G_1 x V_{3^e} x V_P x V_Q with trivial atoms omitted.

struct Relative {
  Construction c;
  std::string closing;
  std::vector<size_t> closing_map;
  bool empty = false;  // c.family has no blocks and relative = group
};

struct Sub1Layout {
  int e = 1;
  int64_t t = 3, p = 1, q = 1;
  std::vector<Atom> atoms;
  size_t ip = 0, iq = 0;
};

Sub1Layout sub1_layout(int64_t big_n) {
  Sub1Layout l;
  l.e = has_component(big_n, 9) ? 2 : 1;
  l.t = l.e == 2 ? 9 : 3;
  const Split s = split_mod4(big_n / l.t);
  l.p = s.p;
  l.q = s.q;
  l.atoms = {Atom::galpha(1), Atom::vn(l.t)};
  if (l.p > 1) {
    l.ip = l.atoms.size();
    l.atoms.push_back(Atom::vn(l.p));
  }
  if (l.q > 1) {
    l.iq = l.atoms.size();
    l.atoms.push_back(Atom::vn(l.q));
  }
  return l;
}

FamilyWitness empty_family(const Group& g) {
  FamilyWitness w;
  w.group = g;
  w.kind = FamilyKind::RDF;
  w.relative = generating_set(g);
  w.j = g.canonical_involution();
  return w;
}

Relative case_ii_divisible(int64_t big_n) {
  const Sub1Layout l = sub1_layout(big_n);
  const Group g = make_group(l.atoms);
  std::vector<Part> parts;
  std::vector<TraceNode> notes;
  if (l.p > 1) {
    const std::string prdf_id = l.e == 1 ? "prdf:G1xV3" : "prdf:G1xV9";
    Construction f = direct_step(lift_prdf(catalog_family(prdf_id), l.p), "prdf lift over V" + str(l.p), {catalog_step(prdf_id).trace});
    if (l.q > 1) f = compose_homogeneous(f, product_frame(g, {l.iq}));
    parts.push_back({f, {}, {}});
  } else {
    notes.push_back(empty_note("P=1: the outer family relative to G1xV" + str(l.t) + "xV_Q is empty"));
  }
  if (l.e == 2) {
    const Group inner_g = l.q > 1 ? make_group({Atom::galpha(1), Atom::vn(9), Atom::vn(l.q)}) : Group::parse("G1xV9");
    const Construction direct = direct_step(construct_15mod24(9 * l.q), "15mod24 over V" + str(9 * l.q));
    const Construction c = transport_step(direct, inner_g);
    parts.push_back({c, l.q > 1 ? std::vector<size_t>{0, 1, l.iq} : std::vector<size_t>{0, 1}, {}});
  } else if (l.q > 1) {
    const Group inner_g = make_group({Atom::galpha(1), Atom::vn(3), Atom::vn(l.q)});
    const Construction d = direct_step(construct_dddf(l.q), "doubly disjoint family over V" + str(l.q));
    const Construction c = compose_splittable(d, "dm:G1", product_frame(inner_g, {0}));
    parts.push_back({c, {0, 1, l.iq}, {}});
  } else {
    notes.push_back(empty_note("Q=1: the inner family relative to G1xV3 is empty"));
  }
  Relative r;
  r.closing = l.e == 1 ? "rdf:G1xV3" : "rdf:G1";
  r.closing_map = l.e == 1 ? std::vector<size_t>{0, 1} : std::vector<size_t>{0};
  if (parts.empty()) {
    r.empty = true;
    r.c = {empty_family(g), empty_note("P=Q=1: nothing outside G1xV3")};
    return r;
  }
  // The first link must cover g; with P=1 it is the inner family, mapped.
  if (!(parts.front().c.family.group == g) && parts.front().atom_map.empty())
    throw InternalError("case ii: outermost link is not over " + g.name());
  r.c = chain_step(g, parts, std::move(notes));
  return r;
}

Construction close(const Relative& r, int scale_g1 = 1) {
  Part inner{catalog_step(r.closing), r.closing_map, {}};
  if (scale_g1 != 1) {
    inner.scale.assign(inner.atom_map.size(), 1);
    inner.scale[0] = scale_g1;
  }
  return pertinent_step(r.c, inner);
}

// ---------------------------------------------------------------------------
// Case iii building blocks.

// (G_beta, G_{beta-1})-RDF.
Construction galpha_step(int beta) {
  static std::map<int, Construction> memo;
  if (auto it = memo.find(beta); it != memo.end()) return it->second;
  Construction c;
  if (beta == 2)
    c = catalog_step("rdf:G2:rel-G1");
  else if (beta == 3)
    c = catalog_step("rdf:G3:rel-G2");
  else if (beta >= 4)
    c = compose_splittable(galpha_step(beta - 2), "dm:Z4xZ4", galpha_z4z4_frame(beta));
  else
    throw PreconditionError("galpha_step: beta must be at least 2");
  return memo.emplace(beta, c).first->second;
}

// (G_beta x V_3, G_{beta-1} x V_3)-RDF.
Construction galpha_v3_step(int beta) {
  if (beta == 2) return catalog_step("rdf:G2xV3:rel-G1xV3");
  return compose_splittable(galpha_step(beta - 1), "dm:Z2xZ6", galpha_v3_z2z6_frame(beta));
}

// (G_alpha, G_1)-RDF.
Construction galpha_chain(int alpha) {
  const Group g({Atom::galpha(alpha)});
  std::vector<Part> parts;
  for (int beta = alpha; beta >= 2; --beta) {
    if (beta == alpha)
      parts.push_back({galpha_step(beta), {}, {}});
    else
      parts.push_back({galpha_step(beta), {0}, {1 << (alpha - beta)}});
  }
  return chain_step(g, parts);
}

// (G_alpha x V_3, G_1 x V_3)-RDF.
Construction galpha_v3_chain(int alpha) {
  const Group g({Atom::galpha(alpha), Atom::vn(3)});
  std::vector<Part> parts;
  for (int beta = alpha; beta >= 2; --beta) {
    if (beta == alpha)
      parts.push_back({galpha_v3_step(beta), {}, {}});
    else
      parts.push_back({galpha_v3_step(beta), {0, 1}, {1 << (alpha - beta), 1}});
  }
  return chain_step(g, parts);
}

Relative relative_of(Construction c, std::string closing, std::vector<size_t> closing_map) {
  Relative r;
  r.c = std::move(c);
  r.closing = std::move(closing);
  r.closing_map = std::move(closing_map);
  return r;
}

Part shifted(const Construction& c, const std::vector<size_t>& map, int alpha_from, int alpha_to) {
  Part p{c, map, {}};
  if (alpha_from != alpha_to) {
    p.scale.assign(map.size(), 1);
    p.scale[0] = 1 << (alpha_to - alpha_from);
  }
  return p;
}

// Layout G_alpha x V_P x V_Q for m prime to 3; P: components 3 (mod 4).
struct OddLayout {
  int64_t p = 1, q = 1;
  size_t ip = 0, iq = 0;
  std::vector<Atom> atoms;
  std::vector<size_t> v_atoms;
};

OddLayout odd_layout(int alpha, int64_t m) {
  OddLayout l;
  const Split s = split_mod4(m);
  l.p = s.p;
  l.q = s.q;
  l.atoms = {Atom::galpha(alpha)};
  if (l.p > 1) {
    l.ip = l.atoms.size();
    l.v_atoms.push_back(l.ip);
    l.atoms.push_back(Atom::vn(l.p));
  }
  if (l.q > 1) {
    l.iq = l.atoms.size();
    l.v_atoms.push_back(l.iq);
    l.atoms.push_back(Atom::vn(l.q));
  }
  return l;
}

// (G_2 x V_m, G_1)-RDF, 3 not dividing m > 1.
Construction case_iii_fourth(int64_t m) {
  const OddLayout l = odd_layout(2, m);
  const Group g = make_group(l.atoms);
  std::vector<Part> parts;
  if (l.q == 1) {
    parts.push_back({direct_step(lift_prdf(catalog_family("prdf:G2"), l.p), "prdf lift over V" + str(l.p), {catalog_step("prdf:G2").trace}), {}, {}});
    parts.push_back({galpha_step(2), {0}, {}});
    return chain_step(g, parts);
  }
  std::vector<TraceNode> notes;
  if (l.p > 1) {
    const Construction f = direct_step(lift_prdf(catalog_family("prdf:G2"), l.p), "prdf lift over V" + str(l.p), {catalog_step("prdf:G2").trace});
    parts.push_back({compose_homogeneous(f, product_frame(g, {l.iq})), {}, {}});
  } else {
    notes.push_back(empty_note("P=1: the outer family relative to G2xV_Q is empty"));
  }
  const Group g2q = make_group({Atom::galpha(2), Atom::vn(l.q)});
  parts.push_back({compose_homogeneous(galpha_step(2), product_frame(g2q, {1})), {0, l.iq}, {}});
  parts.push_back({direct_step(construct_15mod24(l.q), "15mod24 over V" + str(l.q)), {0, l.iq}, {2, 1}});
  return chain_step(g, parts, std::move(notes));
}

Construction case_iii_relative_closed(int alpha, const Relative& r) {
  // Every closing family lives on G_1 (x V_3) scaled into G_alpha.
  return close(r, 1 << (alpha - 1));
}

// Offers the multiplier group of `source` to the final family; kept when it
// passes the predicate, as strong when possible.
void attach_multipliers(FamilyWitness& w, const std::optional<MultiplierGroup>& source) {
  if (w.multipliers || !source) return;
  for (bool strong : {true, false}) {
    w.multipliers = source;
    w.multipliers->strong = strong;
    if (check_multipliers(w).ok) return;
  }
  w.multipliers.reset();
}

}  // namespace

// ---------------------------------------------------------------------------
// Ring transport.

GroupMap ring_transport(const Group& from, const Group& to) {
  if (from.order() != to.order()) throw PreconditionError("ring_transport: orders differ");
  struct Slot {
    size_t offset;
    const Field* field;
  };
  auto collect = [](const Group& g, std::vector<size_t>& plain, std::map<int64_t, std::vector<Slot>>& rings) {
    for (size_t a = 0; a < g.atoms().size(); ++a) {
      const Atom& atom = g.atoms()[a];
      if (atom.kind != AtomKind::Ring) {
        plain.push_back(a);
        continue;
      }
      for (size_t i = 0; i < atom.ring->arity(); ++i)
        rings[atom.ring->field(i).characteristic()].push_back({g.offset(a) + i, &atom.ring->field(i)});
    }
  };
  std::vector<size_t> plain_from, plain_to;
  std::map<int64_t, std::vector<Slot>> ring_from, ring_to;
  collect(from, plain_from, ring_from);
  collect(to, plain_to, ring_to);
  if (plain_from.size() != plain_to.size()) throw PreconditionError("ring_transport: non-ring atoms differ");
  for (size_t k = 0; k < plain_from.size(); ++k)
    if (!(from.atoms()[plain_from[k]] == to.atoms()[plain_to[k]]))
      throw PreconditionError("ring_transport: non-ring atoms differ");
  for (const auto& [p, slots] : ring_from) {
    int digits_from = 0, digits_to = 0;
    for (const auto& s : slots) digits_from += s.field->degree();
    if (!ring_to.count(p)) throw PreconditionError("ring_transport: prime " + str(p) + " missing in " + to.name());
    for (const auto& s : ring_to.at(p)) digits_to += s.field->degree();
    if (digits_from != digits_to) throw PreconditionError("ring_transport: " + str(p) + "-ranks differ");
  }
  return [from, to, plain_from, plain_to, ring_from, ring_to](const Element& x) {
    Element y = to.zero();
    for (size_t k = 0; k < plain_from.size(); ++k) {
      const size_t a = plain_from[k], b = plain_to[k];
      for (size_t c = 0; c < from.atoms()[a].width(); ++c) y[to.offset(b) + c] = x[from.offset(a) + c];
    }
    for (const auto& [p, slots] : ring_from) {
      std::vector<int> digits;
      for (const auto& s : slots) {
        const auto d = s.field->digits(x[s.offset]);
        digits.insert(digits.end(), d.begin(), d.end());
      }
      size_t pos = 0;
      for (const auto& s : ring_to.at(p)) {
        const int k = s.field->degree();
        y[s.offset] = s.field->from_digits(std::span<const int>(digits.data() + pos, static_cast<size_t>(k)));
        pos += static_cast<size_t>(k);
      }
    }
    return y;
  };
}

FamilyWitness transport_family(const FamilyWitness& w, const Group& to) {
  const GroupMap f = ring_transport(w.group, to);
  FamilyWitness r = w;
  r.group = to;
  for (auto& b : r.blocks)
    for (auto& x : b) x = f(x);
  for (auto& x : r.relative) x = f(x);
  for (auto& x : r.translates) x = f(x);
  for (auto* o : {&r.spread_x, &r.j, &r.a, &r.b, &r.j_alpha, &r.j_beta})
    if (*o) *o = f(**o);
  // mu_s need not commute with a regrouping of components.
  r.multipliers.reset();
  return r;
}

DifferenceMatrix transport_matrix(const DifferenceMatrix& m, const Group& to) {
  const GroupMap f = ring_transport(m.group, to);
  DifferenceMatrix r{to, {}, std::nullopt};
  for (size_t i = 0; i < 3; ++i)
    for (const auto& x : m.rows[i]) r.rows[i].push_back(f(x));
  if (m.j) r.j = f(*m.j);
  return r;
}

// ---------------------------------------------------------------------------
// Routes.

Construction construct_case_i(int64_t n) {
  if (n < 0) throw PreconditionError("construct_case_i: n must be non-negative");
  if (n == 0) return catalog_step("rdf:D:empty");
  if (!sum_of_two_squares(4 * n + 1))
    throw NotCovered("24n+9 with n=" + str(n) + ": 4n+1=" + str(4 * n + 1) + " is not a sum of two squares");
  const Construction outer = direct_step(construct_9mod24(n), "9mod24 over V" + str(4 * n + 1));
  return pertinent_step(outer, Part{catalog_step("rdf:D:empty"), {0}, {}});
}

Construction construct_case_ii(int64_t n) {
  if (n < 0) throw PreconditionError("construct_case_ii: n must be non-negative");
  const int64_t big_n = 2 * n + 1;
  if (big_n == 1) return catalog_step("rdf:G1");
  if (big_n % 3 == 0) {
    const Relative r = case_ii_divisible(big_n);
    if (r.empty) return catalog_step(r.closing);
    return close(r);
  }
  const Split s = split_mod12(big_n);
  if (s.rest != 1)
    throw NotCovered("24n+15 with n=" + str(n) + ": 2n+1=" + str(big_n) +
                     " has a prime 11 (mod 12) in its square-free part and is prime to 3");
  Construction rel;
  if (s.p == 1) {
    rel = direct_step(construct_15mod24(s.q), "15mod24 over V" + str(s.q));
  } else if (s.q == 1) {
    rel = direct_step(construct_15mod24bis(s.p), "15mod24bis over V" + str(s.p));
  } else {
    const Group g = make_group({Atom::galpha(1), Atom::vn(s.p), Atom::vn(s.q)});
    const Construction f = direct_step(construct_15mod24(s.q), "15mod24 over V" + str(s.q));
    const Construction a = compose_homogeneous(f, product_frame(g, {1}));
    const Construction b = direct_step(construct_15mod24bis(s.p), "15mod24bis over V" + str(s.p));
    rel = chain_step(g, {{a, {}, {}}, {b, {0, 1}, {}}});
  }
  return pertinent_step(rel, Part{catalog_step("rdf:G1"), {0}, {}});
}

Construction construct_case_iii(int e, int64_t m) {
  if (e < 0 || m < 1 || m % 2 == 0) throw PreconditionError("construct_case_iii: need e >= 0 and odd m");
  const int alpha = e + 2;
  if (alpha > 8) throw PreconditionError("construct_case_iii: alpha too large for this implementation");
  if (m == 1) {
    if (alpha == 2) return catalog_step("rdf:G2");
    return case_iii_relative_closed(alpha, relative_of(galpha_chain(alpha), "rdf:G1", {0}));
  }
  if (m == 3) return case_iii_relative_closed(alpha, relative_of(galpha_v3_chain(alpha), "rdf:G1xV3", {0, 1}));
  if (m % 3 == 0) {
    // Inner (G_1 x V_m, G_1 x V_i)-RDF from the case-ii route; G copies its layout.
    const Relative inner = case_ii_divisible(m);
    std::vector<Atom> atoms = inner.c.family.group.atoms();
    atoms[0] = Atom::galpha(alpha);
    const Group g(atoms);
    std::vector<size_t> kernel;
    const int k = valuation3(m);
    // V_3 carries no homogeneous matrix; with 3 || m it stays in the quotient.
    for (size_t a = k == 1 ? 2 : 1; a < atoms.size(); ++a) kernel.push_back(a);
    const CompositionFrame frame = product_frame(g, kernel);
    Construction outer_q = k == 1 ? galpha_v3_chain(alpha) : galpha_chain(alpha);
    Construction outer;
    if (kernel.empty()) {
      outer = outer_q;
    } else if (k >= 3) {
      // H contains V_3 next to the component 3^{k-1}: build the matrix on V_{3^k} x ... and transport it.
      std::vector<Atom> merged;
      int64_t rest = m;
      int64_t three = 1;
      for (int i = 0; i < k; ++i) {
        three *= 3;
        rest /= 3;
      }
      merged.push_back(Atom::vn(three));
      const Split s = split_mod4(rest);
      if (s.p > 1) merged.push_back(Atom::vn(s.p));
      if (s.q > 1) merged.push_back(Atom::vn(s.q));
      const DifferenceMatrix dm = transport_matrix(homogeneous_dm(Group(merged)), frame.h);
      outer = compose_step(outer_q, dm, matrix_node(dm, "homogeneous over " + Group(merged).name() + " transported to " + frame.h.name()), frame,
                           ComposeMode::Homogeneous);
    } else {
      outer = compose_homogeneous(outer_q, frame);
    }
    std::vector<Part> parts{{outer, {}, {}}};
    if (!inner.empty) parts.push_back(shifted(inner.c, iota(atoms.size()), 1, alpha));
    const Construction rel = parts.size() == 1 ? outer : chain_step(g, parts);
    return case_iii_relative_closed(alpha, relative_of(rel, inner.closing, inner.closing_map));
  }
  const OddLayout l = odd_layout(alpha, m);
  const Group g = make_group(l.atoms);
  const Construction fourth = case_iii_fourth(m);
  if (alpha == 2) {
    Construction closed = case_iii_relative_closed(alpha, relative_of(fourth, "rdf:G1", {0}));
    return closed;
  }
  std::vector<Part> parts;
  for (int beta = alpha; beta >= 3; --beta) {
    std::vector<Atom> atoms = l.atoms;
    atoms[0] = Atom::galpha(beta);
    const Group gb(atoms);
    const Construction u = compose_homogeneous(galpha_step(beta), product_frame(gb, l.v_atoms));
    parts.push_back(shifted(u, iota(atoms.size()), beta, alpha));
  }
  parts.front().atom_map.clear();
  parts.front().scale.clear();
  parts.push_back(shifted(fourth, iota(l.atoms.size()), 2, alpha));
  Construction rel = chain_step(g, parts);
  attach_multipliers(rel.family, fourth.family.multipliers);
  Construction closed = case_iii_relative_closed(alpha, relative_of(rel, "rdf:G1", {0}));
  attach_multipliers(closed.family, rel.family.multipliers);
  return closed;
}

Construction construct_for_order(int64_t v) {
  const OrderClass c = classify_order(v);
  if (c.kind == OrderCase::NotPyramidal) throw NotCovered("v=" + str(v) + " is not 3-pyramidal: " + c.explanation);
  if (!c.covered) throw NotCovered("v=" + str(v) + " is not covered: " + c.explanation);
  Construction r;
  switch (c.kind) {
    case OrderCase::NineMod24: r = construct_case_i(c.n); break;
    case OrderCase::FifteenMod24: r = construct_case_ii(c.n); break;
    default: r = construct_case_iii(c.e, c.m); break;
  }
  if (r.family.group.order() != v - 3) throw InternalError("construct_for_order: group order mismatch at v=" + str(v));
  return r;
}

// ---------------------------------------------------------------------------
// Kirkman system.

KirkmanSystem build_kts(const FamilyWitness& rdf, bool verify) {
  if (rdf.kind != FamilyKind::RDF || !rdf.spread_x || !rdf.j)
    throw PreconditionError("build_kts: need a resolvable {2^3,3} spread family");
  const Diagnosis d = is_j_resolvable(rdf);
  if (!d.ok) throw PreconditionError("build_kts: family is not resolvable: " + d.summary());
  const Group& g = rdf.group;
  Element a, b;
  if (rdf.a && rdf.b) {
    a = *rdf.a;
    b = *rdf.b;
  } else {
    if (d.solutions.empty()) throw PreconditionError("build_kts: no (a, b) resolves the family");
    a = d.solutions.front().first;
    b = d.solutions.front().second;
  }
  const Element j = *rdf.j, x = *rdf.spread_x;
  const int64_t n = g.order();
  const auto inf = [n](int i) { return static_cast<int32_t>(n + i); };
  auto pt = [&g](const Element& e) { return static_cast<int32_t>(g.index(e)); };

  KirkmanSystem s;
  s.order = n + 3;
  s.group = g;
  for (int64_t i = 0; i < n; ++i) s.points.push_back(g.encode(g.at(i)));
  for (const char* label : kInfinityLabels) s.points.push_back(label);

  std::vector<std::vector<Triple>> classes;
  auto sorted = [](Triple t) {
    std::sort(t.begin(), t.end());
    return t;
  };
  // Fixed class: B_inf and the right cosets X + h of X = {0, x, -x}.
  {
    std::vector<Triple> p{sorted({inf(0), inf(1), inf(2)})};
    std::vector<char> seen(static_cast<size_t>(n), 0);
    const Element mx = g.neg(x);
    for (int64_t i = 0; i < n; ++i) {
      if (seen[static_cast<size_t>(i)]) continue;
      const Element h = g.at(i);
      const Triple t = sorted({pt(h), pt(g.add(x, h)), pt(g.add(mx, h))});
      for (int32_t q : t) seen[static_cast<size_t>(q)] = 1;
      p.push_back(t);
    }
    classes.push_back(std::move(p));
  }
  // Base class Q and its translates by representatives of the cosets {0, j} + g.
  std::vector<std::array<std::optional<Element>, 3>> q;
  q.push_back({std::nullopt, g.zero(), j});
  q.push_back({std::nullopt, a, g.add(a, j)});
  q.push_back({std::nullopt, b, g.add(b, j)});
  for (const auto& blk : rdf.blocks) {
    q.push_back({blk[0], blk[1], blk[2]});
    q.push_back({g.add(blk[0], j), g.add(blk[1], j), g.add(blk[2], j)});
  }
  {
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (int64_t i = 0; i < n; ++i) {
      if (seen[static_cast<size_t>(i)]) continue;
      const Element h = g.at(i);
      seen[static_cast<size_t>(i)] = 1;
      seen[static_cast<size_t>(g.index(g.add(j, h)))] = 1;
      std::vector<Triple> cls;
      for (size_t k = 0; k < q.size(); ++k) {
        Triple t;
        t[0] = k < 3 ? inf(static_cast<int>(k)) : pt(g.add(*q[k][0], h));
        t[1] = pt(g.add(*q[k][1], h));
        t[2] = pt(g.add(*q[k][2], h));
        cls.push_back(sorted(t));
      }
      classes.push_back(std::move(cls));
    }
  }
  // Canonical numbering: blocks sorted, classes as sorted lists of block indices.
  for (const auto& cls : classes) s.blocks.insert(s.blocks.end(), cls.begin(), cls.end());
  std::sort(s.blocks.begin(), s.blocks.end());
  if (std::adjacent_find(s.blocks.begin(), s.blocks.end()) != s.blocks.end())
    throw InternalError("build_kts: repeated block");
  for (const auto& cls : classes) {
    std::vector<int32_t> ids;
    for (const auto& t : cls)
      ids.push_back(static_cast<int32_t>(std::lower_bound(s.blocks.begin(), s.blocks.end(), t) - s.blocks.begin()));
    std::sort(ids.begin(), ids.end());
    s.resolution.push_back(std::move(ids));
  }
  std::sort(s.resolution.begin(), s.resolution.end());
  if (verify) {
    for (const auto& rep : verify_system(s, VerifyLevel::Pyramidal))
      if (!rep.ok) throw InternalError("build_kts: " + rep.name + " failed: " + rep.summary());
  }
  return s;
}

AutomorphismWitness automorphism_lower_bound(const KirkmanSystem& s, const FamilyWitness& rdf) {
  const Group& g = s.group;
  const int64_t n = g.order();
  AutomorphismWitness w;
  auto identity_tail = [n](std::vector<int32_t>& perm) {
    for (int i = 0; i < 3; ++i) perm[static_cast<size_t>(n + i)] = static_cast<int32_t>(n + i);
  };
  for (const auto& t : generating_set(g)) {
    std::vector<int32_t> perm(static_cast<size_t>(n + 3));
    for (int64_t i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = static_cast<int32_t>(g.index(g.add(g.at(i), t)));
    identity_tail(perm);
    w.generators.push_back(std::move(perm));
    w.labels.push_back("translation by " + g.encode(t));
  }
  if (rdf.multipliers) {
    const auto& mg = *rdf.multipliers;
    w.multiplier_order = mg.order;
    for (const auto& sgen : mg.generators) {
      std::vector<int32_t> perm(static_cast<size_t>(n + 3));
      for (int64_t i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = static_cast<int32_t>(g.index(g.scale(g.at(i), mg.atom, sgen)));
      identity_tail(perm);
      w.generators.push_back(std::move(perm));
      std::string label = "multiplier on " + g.atoms()[mg.atom].name() + " by (";
      for (size_t k = 0; k < sgen.size(); ++k) label += (k ? "," : "") + str(sgen[k]);
      w.labels.push_back(label + ")");
    }
  }
  w.bound = n * w.multiplier_order;
  return w;
}

}  // namespace kts
