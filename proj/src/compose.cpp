#include "kts/compose.hpp"

#include <algorithm>
#include <set>

#include "kts/catalog.hpp"
#include "kts/errors.hpp"

namespace kts {

namespace {

GroupMap link_embedding(const ChainLink& link, const Group& g) {
  if (link.atom_map.empty()) {
    if (!(link.family.group == g)) throw PreconditionError("chain link over " + link.family.group.name() + " needs an atom map");
    return [](const Element& x) { return x; };
  }
  return atom_embedding(link.family.group, g, link.atom_map, link.scale);
}

size_t mapped_atom(const ChainLink& link, size_t atom) { return link.atom_map.empty() ? atom : link.atom_map.at(atom); }

std::vector<Element> map_all(const GroupMap& f, const std::vector<Element>& xs) {
  std::vector<Element> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(f(x));
  return out;
}

std::vector<Block> map_blocks(const GroupMap& f, const std::vector<Block>& blocks) {
  std::vector<Block> out;
  out.reserve(blocks.size());
  for (const auto& b : blocks) out.push_back({f(b[0]), f(b[1]), f(b[2])});
  return out;
}

// The image of `from` under f equals the subgroup of g generated by `gens`.
bool image_is(const Group& g, const Group& from, const GroupMap& f, const std::vector<Element>& gens) {
  const auto target = SubgroupView::generated(g, gens);
  if (target.order() != from.order()) return false;
  for (const auto& x : generating_set(from))
    if (!target.contains(f(x))) return false;
  return true;
}

void copy_coords(const Element& src, size_t src_off, Element& dst, size_t dst_off, size_t width) {
  for (size_t c = 0; c < width; ++c) dst[dst_off + c] = src[src_off + c];
}

bool is_prime(int64_t p) {
  const auto c = components_of(p);
  return c.size() == 1 && c[0].exponent == 1;
}

// Every `stride`-th element of g, at most `limit` of them.
std::vector<Element> sample(const Group& g, int64_t limit) {
  std::vector<Element> out;
  const int64_t stride = std::max<int64_t>(1, g.order() / limit);
  for (int64_t i = 0; i < g.order(); i += stride) out.push_back(g.at(i));
  return out;
}

}  // namespace

bool same_law(const Group& a, const Group& b) {
  if (a.atoms().size() != b.atoms().size()) return false;
  for (size_t i = 0; i < a.atoms().size(); ++i) {
    const Atom& x = a.atoms()[i];
    const Atom& y = b.atoms()[i];
    if (x == y) continue;
    const bool cyclic_ring = (x.kind == AtomKind::Cyclic && y.kind == AtomKind::Ring) ||
                             (x.kind == AtomKind::Ring && y.kind == AtomKind::Cyclic);
    if (!cyclic_ring || x.param != y.param || !is_prime(x.param)) return false;
  }
  return true;
}

FamilyWitness chain_union(const Group& g, const std::vector<ChainLink>& links) {
  if (links.empty()) throw PreconditionError("chain_union: empty chain");
  if (links.front().family.group.order() != g.order())
    throw PreconditionError("chain_union: outermost family is not over " + g.name());
  FamilyWitness w;
  w.group = g;
  w.kind = FamilyKind::RDF;
  std::vector<GroupMap> maps;
  for (const auto& link : links) {
    const auto& f = link.family;
    if (f.kind != FamilyKind::RDF || f.spread_x || !f.j)
      throw PreconditionError("chain_union: links must be relative resolvable families");
    maps.push_back(link_embedding(link, g));
    const Element j = maps.back()(*f.j);
    if (w.j && !(*w.j == j)) throw PreconditionError("chain_union: J is not common to the chain");
    w.j = j;
  }
  for (size_t k = 0; k < links.size(); ++k) {
    const auto rel = map_all(maps[k], links[k].family.relative);
    if (k + 1 < links.size() && !image_is(g, links[k + 1].family.group, maps[k + 1], rel))
      throw PreconditionError("chain_union: relative subgroup of link " + std::to_string(k) +
                              " is not the next link's group");
    const auto blocks = map_blocks(maps[k], links[k].family.blocks);
    w.blocks.insert(w.blocks.end(), blocks.begin(), blocks.end());
    if (k + 1 == links.size()) w.relative = rel;
  }
  // Strong multipliers of the outermost family fix every inner group pointwise.
  const auto& outer = links.front();
  if (outer.family.multipliers && outer.family.multipliers->strong) {
    w.multipliers = outer.family.multipliers;
    w.multipliers->atom = mapped_atom(outer, outer.family.multipliers->atom);
  }
  return w;
}

FamilyWitness pertinent_union(const FamilyWitness& outer, const ChainLink& inner) {
  const auto& in = inner.family;
  if (outer.kind != FamilyKind::RDF || outer.spread_x || !outer.j)
    throw PreconditionError("pertinent_union: outer must be a relative resolvable family");
  if (in.kind != FamilyKind::RDF || !in.spread_x || !in.j)
    throw PreconditionError("pertinent_union: inner must be a {2^3,3} resolvable family");
  const Group& g = outer.group;
  const GroupMap f = link_embedding(inner, g);
  if (!image_is(g, in.group, f, outer.relative))
    throw PreconditionError("pertinent_union: inner group is not the outer relative subgroup");
  if (!(f(*in.j) == *outer.j)) throw PreconditionError("pertinent_union: J mismatch");
  FamilyWitness w;
  w.group = g;
  w.kind = FamilyKind::RDF;
  w.blocks = outer.blocks;
  const auto inner_blocks = map_blocks(f, in.blocks);
  w.blocks.insert(w.blocks.end(), inner_blocks.begin(), inner_blocks.end());
  w.spread_x = f(*in.spread_x);
  w.j = outer.j;
  if (in.a) w.a = f(*in.a);
  if (in.b) w.b = f(*in.b);
  if (outer.multipliers && outer.multipliers->strong) w.multipliers = outer.multipliers;
  return w;
}

DmMultipliers homogeneous_dm_multipliers(const Group& h) {
  DmMultipliers m;
  for (const auto& atom : h.atoms()) {
    if (atom.kind != AtomKind::Ring) throw PreconditionError("homogeneous_dm: " + atom.name() + " is not a V atom");
    const Ring& r = *atom.ring;
    RingElement a(r.arity()), b(r.arity());
    for (size_t i = 0; i < r.arity(); ++i) {
      const Field& f = r.field(i);
      if (f.order() <= 3) throw PreconditionError("homogeneous_dm: component " + std::to_string(f.order()) + " of " + atom.name() + " is at most 3");
      auto least_outside = [&](std::initializer_list<int> banned) {
        for (int x = 0; x < f.order(); ++x)
          if (std::find(banned.begin(), banned.end(), x) == banned.end()) return x;
        throw InternalError("homogeneous_dm: field too small");
      };
      a[i] = least_outside({f.zero(), f.one()});
      const int sq = f.mul(a[i], a[i]);
      b[i] = sq == f.one() ? least_outside({f.zero(), f.one(), a[i]}) : sq;
    }
    m.a.push_back(a);
    m.b.push_back(b);
  }
  return m;
}

DifferenceMatrix homogeneous_dm(const Group& h) {
  const DmMultipliers mult = homogeneous_dm_multipliers(h);
  DifferenceMatrix m{h, {}, std::nullopt};
  for (const auto& x : h.elements()) {
    Element ax = x, bx = x;
    for (size_t k = 0; k < h.atoms().size(); ++k) {
      ax = h.scale(ax, k, mult.a[k]);
      bx = h.scale(bx, k, mult.b[k]);
    }
    m.rows[0].push_back(x);
    m.rows[1].push_back(ax);
    m.rows[2].push_back(bx);
  }
  return m;
}

const DifferenceMatrix& fixed_splittable_dm(const std::string& which) {
  const std::string id = which.rfind("dm:", 0) == 0 ? which : "dm:" + which;
  if (id != "dm:G1" && id != "dm:Z2xZ6" && id != "dm:Z4xZ4") throw UnknownId("no fixed splittable matrix " + which);
  return catalog_matrix(id);
}

CompositionFrame product_frame(const Group& g, const std::vector<size_t>& kernel_atoms) {
  std::vector<Atom> q_atoms, h_atoms;
  std::vector<size_t> q_index, h_index;
  for (size_t i = 0; i < g.atoms().size(); ++i) {
    const bool kernel = std::find(kernel_atoms.begin(), kernel_atoms.end(), i) != kernel_atoms.end();
    (kernel ? h_atoms : q_atoms).push_back(g.atoms()[i]);
    (kernel ? h_index : q_index).push_back(i);
  }
  if (h_index.size() != kernel_atoms.size()) throw PreconditionError("product_frame: bad kernel atoms");
  CompositionFrame f;
  f.g = g;
  f.q = Group(q_atoms);
  f.h = Group(h_atoms);
  f.q_atoms = q_index;
  const Group q = f.q, h = f.h;
  f.project = [g, q, q_index](const Element& x) {
    Element y = q.zero();
    for (size_t k = 0; k < q_index.size(); ++k) copy_coords(x, g.offset(q_index[k]), y, q.offset(k), q.atoms()[k].width());
    return y;
  };
  f.lift = [g, q, q_index](const Element& y) {
    Element x = g.zero();
    for (size_t k = 0; k < q_index.size(); ++k) copy_coords(y, q.offset(k), x, g.offset(q_index[k]), q.atoms()[k].width());
    return x;
  };
  f.embed = [g, h, h_index](const Element& y) {
    Element x = g.zero();
    for (size_t k = 0; k < h_index.size(); ++k) copy_coords(y, h.offset(k), x, g.offset(h_index[k]), h.atoms()[k].width());
    return x;
  };
  f.description = g.name() + " over kernel " + h.name();
  return f;
}

CompositionFrame galpha_z4z4_frame(int alpha) {
  if (alpha < 3) throw PreconditionError("galpha_z4z4_frame: alpha must be at least 3");
  CompositionFrame f;
  f.g = Group({Atom::galpha(alpha)});
  f.q = Group({Atom::galpha(alpha - 2)});
  f.h = Group::parse("Z4xZ4");
  const Group g = f.g, q = f.q;
  const int s = 1 << (alpha - 2);
  f.project = [q, s](const Element& x) {
    Element y = q.zero();
    y[0] = x[0];
    y[1] = x[1] % s;
    y[2] = x[2] % s;
    return y;
  };
  f.lift = [g](const Element& y) {
    Element x = g.zero();
    copy_coords(y, 0, x, 0, 3);
    return x;
  };
  f.embed = [g, s](const Element& y) {
    Element x = g.zero();
    x[1] = s * y[0];
    x[2] = s * y[1];
    return x;
  };
  f.description = g.name() + " over kernel Z4xZ4";
  return f;
}

CompositionFrame galpha_v3_z2z6_frame(int beta) {
  if (beta < 2) throw PreconditionError("galpha_v3_z2z6_frame: beta must be at least 2");
  CompositionFrame f;
  f.g = Group({Atom::galpha(beta), Atom::vn(3)});
  f.q = Group({Atom::galpha(beta - 1)});
  f.h = Group::parse("Z2xZ6");
  f.q_atoms = {0};
  const Group g = f.g, q = f.q;
  const int h = 1 << (beta - 1);
  f.project = [q, h](const Element& x) {
    Element y = q.zero();
    y[0] = x[0];
    y[1] = x[1] % h;
    y[2] = x[2] % h;
    return y;
  };
  f.lift = [g](const Element& y) {
    Element x = g.zero();
    copy_coords(y, 0, x, 0, 3);
    return x;
  };
  f.embed = [g, h](const Element& y) {
    Element x = g.zero();
    x[1] = h * ((y[0] + y[1]) % 2);
    x[2] = h * y[0];
    x[3] = y[1] % 3;
    return x;
  };
  f.description = g.name() + " over kernel Z2xZ6";
  return f;
}

std::vector<std::string> validate_frame(const CompositionFrame& f) {
  std::vector<std::string> problems;
  auto fail = [&](std::string m) {
    if (problems.size() < 10) problems.push_back(std::move(m));
  };
  if (f.g.order() != f.q.order() * f.h.order()) fail("|G| != |G/H| |H|");
  const auto hs = sample(f.h, 2048);
  std::set<Element> image;
  for (const auto& y : hs) {
    const Element x = f.embed(y);
    if (!f.g.contains(x)) fail("embedding leaves G at " + f.h.encode(y));
    if (!(f.project(x) == f.q.zero())) fail("embedded " + f.h.encode(y) + " is not in the kernel");
    image.insert(x);
  }
  if (image.size() != hs.size()) fail("embedding is not injective");
  for (const auto& y : sample(f.q, 2048))
    if (!(f.project(f.lift(y)) == y)) fail("section fails at " + f.q.encode(y));
  const auto qs = sample(f.q, 48);
  const auto hs_small = sample(f.h, 8);
  for (const auto& y1 : qs)
    for (const auto& y2 : qs)
      for (const auto& k : hs_small) {
        const Element x1 = f.g.add(f.lift(y1), f.embed(k));
        const Element x2 = f.lift(y2);
        if (!(f.project(f.g.add(x1, x2)) == f.q.add(f.project(x1), f.project(x2))))
          fail("projection is not a homomorphism at " + f.g.encode(x1) + ", " + f.g.encode(x2));
      }
  for (const auto& a : hs_small)
    for (const auto& b : hs)
      if (!(f.embed(f.h.add(a, b)) == f.g.add(f.embed(a), f.embed(b)))) fail("embedding is not a homomorphism");
  return problems;
}

std::string to_string(ComposeMode m) {
  switch (m) {
    case ComposeMode::Plain: return "plain";
    case ComposeMode::Homogeneous: return "homogeneous_i";
    case ComposeMode::Splittable: return "splittable_ii";
  }
  return "?";
}

namespace {

void check_inputs(const FamilyWitness& f, const DifferenceMatrix& m, const CompositionFrame& frame) {
  if (!same_law(f.group, frame.q))
    throw PreconditionError("df_compose_dm: family over " + f.group.name() + ", quotient is " + frame.q.name());
  if (!same_law(m.group, frame.h))
    throw PreconditionError("df_compose_dm: matrix over " + m.group.name() + ", kernel is " + frame.h.name());
  if (f.spread_x) throw PreconditionError("df_compose_dm: the family must be relative");
  for (const auto& row : m.rows)
    if (static_cast<int64_t>(row.size()) != frame.h.order()) throw PreconditionError("df_compose_dm: matrix rows must have |H| columns");
}

std::vector<Element> quotient_translates(const FamilyWitness& f) {
  if (f.kind == FamilyKind::DDDF) {
    if (f.translates.size() != f.blocks.size()) throw PreconditionError("df_compose_dm: missing translates");
    return f.translates;
  }
  // A J-resolvable family is doubly disjoint with every translate equal to j.
  if (f.kind == FamilyKind::RDF && f.j) return std::vector<Element>(f.blocks.size(), *f.j);
  throw PreconditionError("df_compose_dm: splittable mode needs a doubly disjoint or resolvable family");
}

}  // namespace

std::vector<Element> splitting_translates(const FamilyWitness& f, const DifferenceMatrix& m,
                                          const CompositionFrame& frame) {
  if (!m.j) throw PreconditionError("df_compose_dm: matrix has no splitting involution");
  const Group& g = frame.g;
  const Element j = frame.embed(*m.j);
  const auto kernel = frame.h.elements();
  std::vector<Element> t;
  for (const auto& tau : quotient_translates(f)) {
    const Element lifted = frame.lift(tau);
    const Element ji = g.conjugate(lifted, j);
    std::optional<Element> found;
    for (const auto& k : kernel) {
      const Element h = frame.embed(k);
      if (g.conjugate(h, ji) == j) {
        found = g.add(h, lifted);
        break;
      }
    }
    if (!found) throw DataError("df_compose_dm: no kernel element conjugates " + g.encode(ji) + " to " + g.encode(j));
    if (!(g.add(*found, j) == g.add(j, *found))) throw InternalError("df_compose_dm: translate does not commute with j");
    if (!(frame.project(*found) == tau)) throw InternalError("df_compose_dm: translate has the wrong residue");
    t.push_back(*found);
  }
  return t;
}

FamilyWitness df_compose_dm(const FamilyWitness& f, const DifferenceMatrix& m, const CompositionFrame& frame,
                            ComposeMode mode) {
  check_inputs(f, m, frame);
  const Group& g = frame.g;
  const size_t cols = static_cast<size_t>(frame.h.order());
  FamilyWitness w;
  w.group = g;
  w.kind = mode == ComposeMode::Plain ? FamilyKind::DF : FamilyKind::RDF;
  for (const auto& x : generating_set(frame.h)) w.relative.push_back(frame.embed(x));
  for (const auto& x : f.relative) w.relative.push_back(frame.lift(x));

  std::vector<Element> t;
  if (mode == ComposeMode::Homogeneous) {
    if (!f.j) throw PreconditionError("df_compose_dm: homogeneous mode needs a resolved family");
    const Element j = frame.lift(*f.j);
    if (g.element_order(j) != 2) throw PreconditionError("df_compose_dm: lifted j is not an involution");
    const DmReport rep = dm_check(m);
    if (!rep.valid || !rep.homogeneous) throw PreconditionError("df_compose_dm: matrix is not homogeneous");
    w.j = j;
  } else if (mode == ComposeMode::Splittable) {
    const DmReport rep = dm_check(m);
    if (!rep.valid || !rep.splittable) throw PreconditionError("df_compose_dm: matrix is not splittable");
    w.j = frame.embed(*m.j);
    t = splitting_translates(f, m, frame);
  }

  w.blocks.reserve(f.blocks.size() * cols);
  for (size_t i = 0; i < f.blocks.size(); ++i) {
    Block lifted;
    for (size_t r = 0; r < 3; ++r) lifted[r] = frame.lift(f.blocks[i][r]);
    for (size_t c = 0; c < cols; ++c) {
      Block b;
      for (size_t r = 0; r < 3; ++r) b[r] = g.add(lifted[r], frame.embed(m.rows[r][c]));
      if (mode == ComposeMode::Splittable && 2 * c >= cols) {
        const Block plain = b;
        for (auto& x : b) x = g.add(x, t[i]);
        // Strong equivalence with the plain composition, block by block.
        for (size_t r = 0; r < 3; ++r)
          if (!(g.sub(b[r], t[i]) == plain[r])) throw InternalError("df_compose_dm: twin is not a translate");
      }
      w.blocks.push_back(b);
    }
  }
  if (mode != ComposeMode::Splittable && f.multipliers && !frame.q_atoms.empty()) {
    w.multipliers = f.multipliers;
    w.multipliers->atom = frame.q_atoms.at(f.multipliers->atom);
  }
  return w;
}

}  // namespace kts
