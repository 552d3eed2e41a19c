#include "kts/directcon.hpp"

#include <algorithm>
#include <set>

#include "kts/errors.hpp"

namespace kts {

namespace {

// Element of g whose non-ring coordinates are `prefix` and whose last atom (a V_n) is r.
Element point(const Group& g, std::initializer_list<int> prefix, const RingElement& r) {
  Element e = g.zero();
  size_t k = 0;
  for (int v : prefix) e[k++] = v;
  g.set_ring_part(e, g.atoms().size() - 1, r);
  return e;
}

Block scaled(const Group& g, const Block& b, const RingElement& s) {
  const size_t atom = g.atoms().size() - 1;
  return {g.scale(b[0], atom, s), g.scale(b[1], atom, s), g.scale(b[2], atom, s)};
}

void require_components(const Ring& r, int64_t mod, int64_t rem, const std::string& what) {
  for (auto q : r.components())
    if (q % mod != rem)
      throw PreconditionError(what + ": component " + std::to_string(q) + " is not " + std::to_string(rem) + " mod " +
                              std::to_string(mod));
}

MultiplierGroup strong_multipliers(size_t atom, std::vector<RingElement> gens, int64_t order) {
  MultiplierGroup m;
  m.atom = atom;
  m.generators = std::move(gens);
  m.order = order;
  m.strong = true;
  return m;
}

// F = { mu_s(B) : s in S, B in initial } over X x V_n with X the first atom.
FamilyWitness develop_by_units(const Group& g, const std::vector<Block>& initial, const UnitOrbitSystem& sys,
                               const Element& j) {
  FamilyWitness w;
  w.group = g;
  w.kind = FamilyKind::RDF;
  for (const auto& s : sys.representatives)
    for (const auto& b : initial) w.blocks.push_back(scaled(g, b, s));
  w.relative = leading_generators(g, 1);
  w.j = j;
  w.multipliers = strong_multipliers(g.atoms().size() - 1, sys.stabilizer_generators,
                                     static_cast<int64_t>(sys.stabilizer.size()));
  return w;
}

}  // namespace

std::vector<Element> leading_generators(const Group& g, size_t k) {
  std::vector<Atom> head(g.atoms().begin(), g.atoms().begin() + static_cast<std::ptrdiff_t>(k));
  const Group h(head);
  std::vector<size_t> map(k);
  for (size_t i = 0; i < k; ++i) map[i] = i;
  const auto embed = atom_embedding(h, g, map);
  std::vector<Element> out;
  for (const auto& x : generating_set(h)) out.push_back(embed(x));
  return out;
}

std::vector<Block> initial_blocks_9mod24(const Group& g, const RingElement& u) {
  const Ring& r = *g.atoms().back().ring;
  const auto one = r.one(), m1 = r.neg(one), mu = r.neg(u);
  return {
      {point(g, {0, 0}, u), point(g, {0, 0}, mu), point(g, {0, 2}, m1)},
      {point(g, {0, 0}, one), point(g, {0, 1}, u), point(g, {1, 2}, mu)},
      {point(g, {0, 0}, m1), point(g, {0, 2}, u), point(g, {1, 1}, one)},
      {point(g, {0, 1}, one), point(g, {0, 1}, m1), point(g, {1, 1}, mu)},
  };
}

std::vector<Block> initial_blocks_15mod24(const Group& g, const RingElement& u) {
  const Ring& r = *g.atoms().back().ring;
  const auto p1 = r.one(), m1 = r.neg(p1), pu = u, mu = r.neg(u);
  return {
      {point(g, {0, 0, 0}, m1), point(g, {0, 0, 0}, p1), point(g, {2, 1, 0}, mu)},
      {point(g, {0, 0, 0}, mu), point(g, {0, 0, 0}, pu), point(g, {2, 1, 1}, p1)},
      {point(g, {0, 0, 1}, p1), point(g, {0, 1, 0}, m1), point(g, {1, 1, 0}, mu)},
      {point(g, {0, 0, 1}, pu), point(g, {0, 1, 0}, mu), point(g, {1, 1, 0}, p1)},
      {point(g, {1, 0, 0}, m1), point(g, {1, 1, 1}, p1), point(g, {2, 0, 1}, pu)},
      {point(g, {1, 0, 0}, pu), point(g, {1, 1, 1}, mu), point(g, {2, 1, 1}, m1)},
      {point(g, {1, 0, 1}, m1), point(g, {2, 0, 0}, mu), point(g, {2, 1, 1}, pu)},
      {point(g, {1, 0, 1}, pu), point(g, {2, 0, 1}, m1), point(g, {2, 1, 0}, p1)},
  };
}

std::vector<Block> initial_blocks_15mod24bis(const Group& g, const RingElement& u) {
  const Ring& r = *g.atoms().back().ring;
  const auto p1 = r.one(), m1 = r.neg(p1), pu = u, mu = r.neg(u);
  const auto pu2 = r.mul(u, u), mu2 = r.neg(pu2);
  return {
      {point(g, {0, 0, 0}, p1), point(g, {0, 0, 0}, mu), point(g, {0, 0, 0}, pu2)},
      {point(g, {0, 0, 0}, pu), point(g, {0, 1, 0}, mu2), point(g, {1, 1, 0}, m1)},
      {point(g, {0, 0, 1}, mu), point(g, {1, 0, 0}, pu2), point(g, {2, 0, 1}, p1)},
      {point(g, {0, 0, 1}, pu2), point(g, {1, 0, 1}, p1), point(g, {1, 1, 1}, mu)},
      {point(g, {0, 0, 1}, p1), point(g, {1, 1, 0}, pu2), point(g, {2, 0, 0}, mu)},
      {point(g, {0, 1, 0}, pu), point(g, {0, 1, 1}, mu2), point(g, {2, 0, 1}, m1)},
      {point(g, {0, 1, 0}, m1), point(g, {1, 1, 1}, pu), point(g, {2, 0, 0}, mu2)},
      {point(g, {0, 1, 1}, m1), point(g, {1, 0, 0}, mu2), point(g, {2, 0, 1}, pu)},
      {point(g, {1, 0, 0}, p1), point(g, {1, 0, 1}, mu), point(g, {2, 0, 1}, pu2)},
      {point(g, {1, 0, 1}, mu2), point(g, {1, 1, 1}, m1), point(g, {2, 1, 1}, pu)},
      {point(g, {1, 0, 1}, pu), point(g, {2, 0, 1}, mu2), point(g, {2, 1, 1}, m1)},
      {point(g, {2, 0, 0}, pu2), point(g, {2, 0, 1}, mu), point(g, {2, 1, 1}, p1)},
  };
}

FamilyWitness construct_9mod24(int64_t n, const std::optional<RingElement>& u) {
  if (n < 1) throw PreconditionError("construct_9mod24: n must be positive");
  const Group g({Atom::dihedral(), Atom::vn(4 * n + 1)});
  const Ring& r = *g.atoms()[1].ring;
  require_components(r, 4, 1, "construct_9mod24");
  const auto sys = semiregular_system(r, 4, u);
  return develop_by_units(g, initial_blocks_9mod24(g, sys.u), sys, point(g, {1, 0}, r.zero()));
}

FamilyWitness construct_15mod24(int64_t n) {
  if (n < 5) throw PreconditionError("construct_15mod24: n must be at least 5");
  const Group g({Atom::galpha(1), Atom::vn(n)});
  const Ring& r = *g.atoms()[1].ring;
  require_components(r, 4, 1, "construct_15mod24");
  const auto sys = semiregular_system(r, 4);
  return develop_by_units(g, initial_blocks_15mod24(g, sys.u), sys, point(g, {0, 1, 1}, r.zero()));
}

FamilyWitness construct_15mod24bis(int64_t n) {
  if (n < 7) throw PreconditionError("construct_15mod24bis: n must be at least 7");
  const Group g({Atom::galpha(1), Atom::vn(n)});
  const Ring& r = *g.atoms()[1].ring;
  require_components(r, 6, 1, "construct_15mod24bis");
  const auto sys = semiregular_system(r, 6);
  return develop_by_units(g, initial_blocks_15mod24bis(g, sys.u), sys, point(g, {0, 1, 1}, r.zero()));
}

FamilyWitness lift_prdf(const FamilyWitness& prdf, int64_t n) {
  if (n < 7) throw PreconditionError("lift_prdf: n must be at least 7");
  const Diagnosis pd = is_pseudo_resolvable(prdf);
  if (!pd.ok) throw PreconditionError("lift_prdf: input is not pseudo-resolvable: " + pd.summary());
  const Group& base = prdf.group;
  if (!base.is_pertinent() || base.order() % 4 != 0)
    throw PreconditionError("lift_prdf: " + base.name() + " is not pertinent of doubly even order");

  // Resolving pair: the recorded one if it satisfies the definition, else the first found.
  std::pair<Element, Element> pair = pd.solutions.front();
  if (prdf.j_alpha && prdf.j_beta &&
      std::find(pd.solutions.begin(), pd.solutions.end(), std::pair{*prdf.j_alpha, *prdf.j_beta}) != pd.solutions.end())
    pair = {*prdf.j_alpha, *prdf.j_beta};
  const Element j1 = pair.second;
  const Element j2 = pair.first;
  Element j3;
  for (const auto& j : base.involutions())
    if (!(j == j1) && !(j == j2)) j3 = j;
  const Element x = *prdf.spread_x;

  const Group g = base.times(Atom::vn(n));
  const size_t atom = g.atoms().size() - 1;
  const Ring& r = *g.atoms()[atom].ring;
  require_components(r, 4, 3, "lift_prdf");
  for (auto q : r.components())
    if (q == 3) throw PreconditionError("lift_prdf: components must differ from 3");

  std::vector<size_t> map(base.atoms().size());
  for (size_t i = 0; i < map.size(); ++i) map[i] = i;
  const auto embed = atom_embedding(base, g, map);
  auto pt = [&](const Element& b, const RingElement& v) {
    Element e = embed(b);
    g.set_ring_part(e, atom, v);
    return e;
  };

  // y_i = (sigma_i + 1)/(sigma_i - 1) with sigma_i the least square other than 1.
  RingElement y(r.arity());
  std::vector<RingElement> square_gens;
  int64_t square_order = 1;
  for (size_t i = 0; i < r.arity(); ++i) {
    const Field& f = r.field(i);
    int sigma = -1;
    for (int s : f.squares())
      if (s != f.one()) {
        sigma = s;
        break;
      }
    if (sigma < 0) throw PreconditionError("lift_prdf: F_" + std::to_string(f.order()) + " has no square other than 1");
    y[i] = f.div(f.add(sigma, f.one()), f.sub(sigma, f.one()));
    RingElement gen = r.one();
    gen[i] = f.mul(f.primitive(), f.primitive());
    square_gens.push_back(gen);
    square_order *= (f.order() - 1) / 2;
  }
  const auto one = r.one(), m1 = r.neg(one), my = r.neg(y);

  FamilyWitness w;
  w.group = g;
  w.kind = FamilyKind::RDF;
  const Block a1{pt(base.zero(), one), pt(x, y), pt(x, my)};
  const Block a2{pt(base.zero(), m1), pt(j2, y), pt(j3, my)};
  for (const auto& s : halving(r)) {
    w.blocks.push_back(scaled(g, a1, s));
    w.blocks.push_back(scaled(g, a2, s));
  }
  for (const auto& b : prdf.blocks) {
    const Block lifted{pt(b[0], one), pt(b[1], m1), pt(b[2], y)};
    for (const auto& z : r.nonzero()) w.blocks.push_back(scaled(g, lifted, z));
  }
  w.relative = leading_generators(g, base.atoms().size());
  w.j = embed(j1);
  w.multipliers = strong_multipliers(atom, square_gens, square_order);
  return w;
}

int dddf_parameter(const Field& f, DddfParameter how) {
  const int two = f.from_integer(2);
  auto in_x = [&](int x) {
    const int d = f.sub(x, two);
    return x != 0 && !f.is_square(x) && d != 0 && f.is_square(d);
  };
  if (how == DddfParameter::Least) {
    for (int x = 1; x < f.order(); ++x)
      if (in_x(x)) return x;
    throw DataError("dddf_parameter: X is empty in F_" + std::to_string(f.order()));
  }
  int y = -1;
  for (int c : f.nonsquares())
    if (c != two) {
      y = c;
      break;
    }
  if (y < 0) throw DataError("dddf_parameter: no non-square other than 2 in F_" + std::to_string(f.order()));
  const int one = f.one();
  std::vector<int> candidates{y, f.add(y, one), f.sub(one, y), f.sub(f.from_integer(4), f.mul(two, y))};
  if (f.add(y, one) != 0) candidates.push_back(f.div(two, f.add(y, one)));
  if (f.sub(y, one) != 0) candidates.push_back(f.div(f.mul(two, y), f.sub(y, one)));
  for (int c : candidates)
    if (in_x(c)) return c;
  throw DataError("dddf_parameter: the candidate set misses X in F_" + std::to_string(f.order()));
}

FamilyWitness construct_dddf(int64_t n, DddfParameter how) {
  if (n < 5) throw PreconditionError("construct_dddf: n must be at least 5");
  const Group g({Atom::cyclic(3), Atom::vn(n)});
  const Ring& r = *g.atoms()[1].ring;
  require_components(r, 4, 1, "construct_dddf");
  RingElement x(r.arity());
  for (size_t i = 0; i < r.arity(); ++i) x[i] = dddf_parameter(r.field(i), how);
  const auto two = r.from_integer(2);
  const auto one = r.one();
  const auto x2 = r.mul(x, x);
  const Block a{point(g, {0}, one), point(g, {1}, x), point(g, {1}, r.sub(two, x))};
  const Block b{point(g, {0}, x), point(g, {2}, x2), point(g, {2}, r.sub(r.mul(two, x), x2))};

  const auto s = halving(r);
  const std::set<RingElement> s_set(s.begin(), s.end());
  FamilyWitness w;
  w.group = g;
  w.kind = FamilyKind::DDDF;
  for (const auto& t : s) {
    const auto mt = r.neg(t);
    if (!s_set.count(mt)) throw DataError("construct_dddf: the halving is not symmetric");
    if (mt < t) continue;
    w.blocks.push_back(scaled(g, a, t));
    w.translates.push_back(point(g, {0}, r.neg(r.mul(two, t))));
    w.blocks.push_back(scaled(g, b, t));
    w.translates.push_back(point(g, {0}, r.neg(r.mul(two, r.mul(x, t)))));
  }
  w.relative = leading_generators(g, 1);
  return w;
}

}  // namespace kts
