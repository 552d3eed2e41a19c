#include "kts/groups.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>

#include "kts/errors.hpp"

namespace kts {

Atom Atom::dihedral() { return {AtomKind::Dihedral, 6, nullptr}; }

Atom Atom::galpha(int alpha) {
  if (alpha < 1 || alpha > 12) throw PreconditionError("G_alpha: alpha out of range");
  return {AtomKind::Galpha, alpha, nullptr};
}

Atom Atom::cyclic(int64_t m) {
  if (m < 1) throw PreconditionError("Z_m: m must be positive");
  return {AtomKind::Cyclic, m, nullptr};
}

Atom Atom::vn(int64_t n) { return {AtomKind::Ring, n, build_ring(n)}; }

int64_t Atom::order() const {
  switch (kind) {
    case AtomKind::Dihedral: return 6;
    case AtomKind::Galpha: return 3 * (int64_t{1} << (2 * param));
    default: return param;
  }
}

size_t Atom::width() const {
  switch (kind) {
    case AtomKind::Dihedral: return 2;
    case AtomKind::Galpha: return 3;
    case AtomKind::Cyclic: return 1;
    case AtomKind::Ring: return ring->arity();
  }
  return 0;
}

std::string Atom::name() const {
  switch (kind) {
    case AtomKind::Dihedral: return "D";
    case AtomKind::Galpha: return "G" + std::to_string(param);
    case AtomKind::Cyclic: return "Z" + std::to_string(param);
    case AtomKind::Ring: return "V" + std::to_string(param);
  }
  return "?";
}

Group::Group(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const auto& a : atoms_) {
    offsets_.push_back(width_);
    width_ += a.width();
    order_ *= a.order();
    switch (a.kind) {
      case AtomKind::Dihedral: radix_.insert(radix_.end(), {2, 3}); break;
      case AtomKind::Galpha: {
        const int32_t m = int32_t{1} << a.param;
        radix_.insert(radix_.end(), {3, m, m});
        break;
      }
      case AtomKind::Cyclic: radix_.push_back(static_cast<int32_t>(a.param)); break;
      case AtomKind::Ring:
        for (auto q : a.ring->components()) radix_.push_back(static_cast<int32_t>(q));
        break;
    }
  }
  if (width_ > kMaxCoords) throw PreconditionError("Group: too many coordinates");
}

Group Group::parse(std::string_view name) {
  std::vector<Atom> atoms;
  size_t pos = 0;
  while (pos <= name.size()) {
    size_t end = name.find('x', pos);
    if (end == std::string_view::npos) end = name.size();
    const std::string_view tok = name.substr(pos, end - pos);
    if (tok.empty()) throw MalformedInput("group name: empty atom in '" + std::string(name) + "'");
    if (tok == "D") {
      atoms.push_back(Atom::dihedral());
    } else {
      int64_t v = 0;
      const auto* first = tok.data() + 1;
      const auto* last = tok.data() + tok.size();
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || tok.size() < 2)
        throw MalformedInput("group name: bad atom '" + std::string(tok) + "'");
      switch (tok[0]) {
        case 'G': atoms.push_back(Atom::galpha(static_cast<int>(v))); break;
        case 'Z': atoms.push_back(Atom::cyclic(v)); break;
        case 'V':
          if (v < 1 || v % 2 == 0) throw MalformedInput("group name: V_n needs odd n");
          atoms.push_back(Atom::vn(v));
          break;
        default: throw MalformedInput("group name: bad atom '" + std::string(tok) + "'");
      }
    }
    pos = end + 1;
  }
  return Group(std::move(atoms));
}

Group Group::times(const Group& other) const {
  auto a = atoms_;
  a.insert(a.end(), other.atoms_.begin(), other.atoms_.end());
  return Group(std::move(a));
}

Group Group::times(const Atom& atom) const {
  auto a = atoms_;
  a.push_back(atom);
  return Group(std::move(a));
}

std::string Group::name() const {
  if (atoms_.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < atoms_.size(); ++i) {
    if (i) s += 'x';
    s += atoms_[i].name();
  }
  return s;
}

Element Group::zero() const {
  Element e;
  e.size = static_cast<uint8_t>(width_);
  return e;
}

namespace {

inline int32_t mod(int64_t x, int64_t m) {
  const int64_t r = x % m;
  return static_cast<int32_t>(r < 0 ? r + m : r);
}

// (b, c) Theta^d on Z_m^2.
inline void theta(int32_t& b, int32_t& c, int d, int32_t m) {
  for (int k = 0; k < d; ++k) {
    const int32_t nb = mod(-static_cast<int64_t>(c), m);
    const int32_t nc = mod(static_cast<int64_t>(b) - c, m);
    b = nb;
    c = nc;
  }
}

}  // namespace

Element Group::add(const Element& x, const Element& y) const {
  Element r = zero();
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    const size_t o = offsets_[i];
    switch (a.kind) {
      case AtomKind::Dihedral: {
        r[o] = (x[o] + y[o]) % 2;
        const int32_t b = y[o] ? mod(-static_cast<int64_t>(x[o + 1]), 3) : x[o + 1];
        r[o + 1] = (b + y[o + 1]) % 3;
        break;
      }
      case AtomKind::Galpha: {
        const int32_t m = int32_t{1} << a.param;
        int32_t b = x[o + 1], c = x[o + 2];
        theta(b, c, y[o], m);
        r[o] = (x[o] + y[o]) % 3;
        r[o + 1] = (b + y[o + 1]) % m;
        r[o + 2] = (c + y[o + 2]) % m;
        break;
      }
      case AtomKind::Cyclic: r[o] = static_cast<int32_t>((int64_t{x[o]} + y[o]) % a.param); break;
      case AtomKind::Ring:
        for (size_t k = 0; k < a.ring->arity(); ++k) r[o + k] = a.ring->field(k).add(x[o + k], y[o + k]);
        break;
    }
  }
  return r;
}

Element Group::neg(const Element& x) const {
  Element r = zero();
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    const size_t o = offsets_[i];
    switch (a.kind) {
      case AtomKind::Dihedral:
        r[o] = x[o];
        r[o + 1] = x[o] ? x[o + 1] : mod(-static_cast<int64_t>(x[o + 1]), 3);
        break;
      case AtomKind::Galpha: {
        const int32_t m = int32_t{1} << a.param;
        const int d = x[o];
        int32_t b = x[o + 1], c = x[o + 2];
        theta(b, c, (3 - d) % 3, m);
        r[o] = (3 - d) % 3;
        r[o + 1] = mod(-static_cast<int64_t>(b), m);
        r[o + 2] = mod(-static_cast<int64_t>(c), m);
        break;
      }
      case AtomKind::Cyclic: r[o] = mod(-static_cast<int64_t>(x[o]), a.param); break;
      case AtomKind::Ring:
        for (size_t k = 0; k < a.ring->arity(); ++k) r[o + k] = a.ring->field(k).neg(x[o + k]);
        break;
    }
  }
  return r;
}

Element Group::sub(const Element& x, const Element& y) const { return add(x, neg(y)); }

Element Group::conjugate(const Element& x, const Element& y) const { return add(add(x, y), neg(x)); }

Element Group::multiple(const Element& x, int64_t k) const {
  Element base = k < 0 ? neg(x) : x;
  if (k < 0) k = -k;
  Element r = zero();
  while (k) {
    if (k & 1) r = add(r, base);
    base = add(base, base);
    k >>= 1;
  }
  return r;
}

int64_t Group::index(const Element& x) const {
  int64_t idx = 0;
  for (size_t i = 0; i < width_; ++i) idx = idx * radix_[i] + x[i];
  return idx;
}

Element Group::at(int64_t idx) const {
  Element e = zero();
  for (size_t i = width_; i-- > 0;) {
    e[i] = static_cast<int32_t>(idx % radix_[i]);
    idx /= radix_[i];
  }
  return e;
}

std::vector<Element> Group::elements() const {
  std::vector<Element> out;
  out.reserve(order_);
  Element e = zero();
  for (int64_t i = 0; i < order_; ++i) {
    out.push_back(e);
    for (size_t k = width_; k-- > 0;) {
      if (++e[k] < radix_[k]) break;
      e[k] = 0;
    }
  }
  return out;
}

bool Group::contains(const Element& x) const {
  if (x.size != width_) return false;
  for (size_t i = 0; i < width_; ++i)
    if (x[i] < 0 || x[i] >= radix_[i]) return false;
  return true;
}

int64_t Group::element_order(const Element& x) const {
  const Element z = zero();
  Element y = x;
  int64_t k = 1;
  while (!(y == z)) {
    y = add(y, x);
    ++k;
  }
  return k;
}

std::vector<Element> Group::involutions() const {
  // An element has order <= 2 iff each atom coordinate block does.
  std::vector<std::vector<std::vector<int32_t>>> per_atom(atoms_.size());
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    const Group single({a});
    if (a.kind == AtomKind::Ring || (a.kind == AtomKind::Cyclic && a.param % 2 == 1)) {
      per_atom[i].push_back(std::vector<int32_t>(a.width(), 0));
      continue;
    }
    for (const auto& e : single.elements()) {
      if (single.add(e, e) == single.zero())
        per_atom[i].push_back(std::vector<int32_t>(e.c.begin(), e.c.begin() + a.width()));
    }
  }
  std::vector<Element> out;
  std::vector<size_t> pos(atoms_.size(), 0);
  for (bool more = true; more;) {
    Element e = zero();
    for (size_t i = 0; i < atoms_.size(); ++i)
      for (size_t k = 0; k < atoms_[i].width(); ++k) e[offsets_[i] + k] = per_atom[i][pos[i]][k];
    if (!(e == zero())) out.push_back(e);
    more = false;
    for (size_t i = atoms_.size(); i-- > 0;) {
      if (++pos[i] < per_atom[i].size()) {
        more = true;
        break;
      }
      pos[i] = 0;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<Element> Group::canonical_involution() const {
  if (atoms_.empty() || atoms_[0].kind != AtomKind::Galpha) return std::nullopt;
  Element e = zero();
  const int32_t h = int32_t{1} << (atoms_[0].param - 1);
  e[1] = h;
  e[2] = h;
  return e;
}

bool Group::is_pertinent() const {
  const auto inv = involutions();
  if (inv.size() != 3) return false;
  const auto all = elements();
  for (size_t i = 1; i < 3; ++i) {
    const bool found = std::any_of(all.begin(), all.end(), [&](const Element& g) { return conjugate(g, inv[0]) == inv[i]; });
    if (!found) return false;
  }
  return true;
}

bool Group::is_abelian() const {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) {
    return a.kind == AtomKind::Cyclic || a.kind == AtomKind::Ring;
  });
}

RingElement Group::ring_part(const Element& x, size_t atom) const {
  const Atom& a = atoms_.at(atom);
  if (a.kind != AtomKind::Ring) throw PreconditionError("ring_part: atom is not V_n");
  RingElement r(a.width());
  for (size_t k = 0; k < r.size(); ++k) r[k] = x[offsets_[atom] + k];
  return r;
}

void Group::set_ring_part(Element& x, size_t atom, const RingElement& r) const {
  const Atom& a = atoms_.at(atom);
  if (a.kind != AtomKind::Ring || r.size() != a.width()) throw PreconditionError("set_ring_part: shape mismatch");
  for (size_t k = 0; k < r.size(); ++k) x[offsets_[atom] + k] = r[k];
}

Element Group::scale(const Element& x, size_t atom, const RingElement& s) const {
  Element r = x;
  set_ring_part(r, atom, atoms_[atom].ring->mul(ring_part(x, atom), s));
  return r;
}

size_t Group::literal_width() const {
  size_t w = 0;
  for (const auto& a : atoms_) {
    if (a.kind != AtomKind::Ring) {
      w += a.width();
      continue;
    }
    for (size_t k = 0; k < a.ring->arity(); ++k) w += a.ring->field(k).degree();
  }
  return w;
}

std::vector<int> Group::literal(const Element& x) const {
  std::vector<int> out;
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    const size_t o = offsets_[i];
    if (a.kind != AtomKind::Ring) {
      for (size_t k = 0; k < a.width(); ++k) out.push_back(x[o + k]);
      continue;
    }
    for (size_t k = 0; k < a.ring->arity(); ++k) {
      const auto d = a.ring->field(k).digits(x[o + k]);
      out.insert(out.end(), d.begin(), d.end());
    }
  }
  return out;
}

Element Group::from_literal(const std::vector<int>& lit) const {
  if (lit.size() != literal_width())
    throw MalformedInput("element of " + name() + " needs " + std::to_string(literal_width()) + " coordinates, got " +
                         std::to_string(lit.size()));
  Element e = zero();
  size_t p = 0;
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    const size_t o = offsets_[i];
    if (a.kind != AtomKind::Ring) {
      for (size_t k = 0; k < a.width(); ++k) e[o + k] = lit[p++];
      continue;
    }
    for (size_t k = 0; k < a.ring->arity(); ++k) {
      const Field& f = a.ring->field(k);
      std::vector<int> d(lit.begin() + p, lit.begin() + p + f.degree());
      for (int v : d)
        if (v < 0 || v >= f.characteristic()) throw MalformedInput("element coordinate out of range in " + name());
      e[o + k] = f.from_digits(d);
      p += f.degree();
    }
  }
  if (!contains(e)) throw MalformedInput("element coordinate out of range in " + name());
  return e;
}

std::string Group::encode(const Element& x) const {
  const auto lit = literal(x);
  std::string s;
  size_t p = 0;
  for (size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    size_t w = a.width();
    if (a.kind == AtomKind::Ring) {
      w = 0;
      for (size_t k = 0; k < a.ring->arity(); ++k) w += a.ring->field(k).degree();
    }
    if (i) s += '|';
    s += a.name();
    s += ':';
    if (w == 1) {
      s += std::to_string(lit[p]);
    } else {
      s += '(';
      for (size_t k = 0; k < w; ++k) {
        if (k) s += ',';
        s += std::to_string(lit[p + k]);
      }
      s += ')';
    }
    p += w;
  }
  return s;
}

Element Group::decode(std::string_view text) const {
  std::vector<int> lit;
  size_t pos = 0;
  size_t atom = 0;
  while (pos < text.size()) {
    size_t end = text.find('|', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view part = text.substr(pos, end - pos);
    const size_t colon = part.find(':');
    if (colon == std::string_view::npos || atom >= atoms_.size() || part.substr(0, colon) != atoms_[atom].name())
      throw MalformedInput("element '" + std::string(text) + "' does not match group " + name());
    std::string_view body = part.substr(colon + 1);
    if (!body.empty() && body.front() == '(') {
      if (body.back() != ')') throw MalformedInput("element '" + std::string(text) + "': unbalanced parenthesis");
      body = body.substr(1, body.size() - 2);
    }
    size_t q = 0;
    while (q <= body.size()) {
      size_t comma = body.find(',', q);
      if (comma == std::string_view::npos) comma = body.size();
      const std::string_view num = body.substr(q, comma - q);
      int v = 0;
      auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
      if (ec != std::errc() || ptr != num.data() + num.size() || num.empty())
        throw MalformedInput("element '" + std::string(text) + "': bad number");
      lit.push_back(v);
      q = comma + 1;
    }
    ++atom;
    pos = end + 1;
  }
  if (atom != atoms_.size()) throw MalformedInput("element '" + std::string(text) + "' does not match group " + name());
  return from_literal(lit);
}

GroupMap atom_embedding(const Group& from, const Group& to, const std::vector<size_t>& atom_map,
                        const std::vector<int>& scale) {
  if (atom_map.size() != from.atoms().size()) throw PreconditionError("atom_embedding: map size mismatch");
  for (size_t i = 0; i < atom_map.size(); ++i) {
    const Atom& a = from.atoms()[i];
    const Atom& b = to.atoms().at(atom_map[i]);
    const int k = scale.empty() ? 1 : scale[i];
    const bool ok = a.kind == b.kind &&
                    (a.kind == AtomKind::Galpha ? (int64_t{1} << a.param) * k == (int64_t{1} << b.param) : a.param == b.param);
    if (!ok) throw PreconditionError("atom_embedding: " + a.name() + " does not embed in " + b.name());
  }
  return [from, to, atom_map, scale](const Element& x) {
    Element y = to.zero();
    for (size_t i = 0; i < atom_map.size(); ++i) {
      const size_t src = from.offset(i);
      const size_t dst = to.offset(atom_map[i]);
      const int k = scale.empty() ? 1 : scale[i];
      const size_t w = from.atoms()[i].width();
      for (size_t c = 0; c < w; ++c) y[dst + c] = x[src + c];
      if (from.atoms()[i].kind == AtomKind::Galpha) {
        y[dst + 1] *= k;
        y[dst + 2] *= k;
      }
    }
    return y;
  };
}

bool pertinent_order(int64_t n) {
  if (n < 1) return false;
  if (n % 12 == 6) return true;
  if (n % 4 != 0) return false;
  while (n % 4 == 0) n /= 4;
  return n % 6 == 3;
}

Group pertinent_witness(int64_t n) {
  if (!pertinent_order(n)) throw PreconditionError("pertinent_witness: " + std::to_string(n) + " is not a pertinent order");
  std::vector<Atom> atoms;
  int64_t m;
  if (n % 12 == 6) {
    atoms.push_back(Atom::dihedral());
    m = n / 6;
  } else {
    int alpha = 0;
    while (n % 4 == 0) {
      n /= 4;
      ++alpha;
    }
    atoms.push_back(Atom::galpha(alpha));
    m = n / 3;
  }
  if (m > 1) atoms.push_back(Atom::cyclic(m));
  return Group(std::move(atoms));
}

SubgroupView SubgroupView::generated(const Group& g, const std::vector<Element>& gens) {
  SubgroupView v;
  v.ambient_ = g;
  v.generators_ = gens;
  v.member_.assign(g.order(), 0);
  std::vector<Element> frontier{g.zero()};
  v.member_[g.index(g.zero())] = 1;
  while (!frontier.empty()) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& s : gens) {
        const Element y = g.add(x, s);
        char& m = v.member_[g.index(y)];
        if (!m) {
          m = 1;
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  for (int64_t i = 0; i < g.order(); ++i)
    if (v.member_[i]) v.elements_.push_back(g.at(i));
  return v;
}

SubgroupView SubgroupView::from_carrier(const Group& g, const std::vector<Element>& carrier) {
  SubgroupView v;
  v.ambient_ = g;
  v.member_.assign(g.order(), 0);
  for (const auto& x : carrier) {
    if (!g.contains(x)) throw PreconditionError("subgroup carrier: element outside " + g.name());
    v.member_[g.index(x)] = 1;
  }
  if (!v.member_[g.index(g.zero())]) throw PreconditionError("subgroup carrier: missing zero");
  for (int64_t i = 0; i < g.order(); ++i)
    if (v.member_[i]) v.elements_.push_back(g.at(i));
  for (const auto& x : v.elements_)
    for (const auto& y : v.elements_)
      if (!v.member_[g.index(g.sub(x, y))]) throw PreconditionError("subgroup carrier is not closed in " + g.name());
  v.generators_ = v.elements_;
  return v;
}

std::vector<Element> generating_set(const Group& g) {
  std::vector<Element> gens;
  std::vector<char> in(g.order(), 0);
  in[g.index(g.zero())] = 1;
  for (const auto& x : g.elements()) {
    if (in[g.index(x)]) continue;
    gens.push_back(x);
    const auto sub = SubgroupView::generated(g, gens);
    for (const auto& y : sub.elements()) in[g.index(y)] = 1;
  }
  return gens;
}

bool SubgroupView::is_normal() const {
  for (const auto& g : generating_set(ambient_))
    for (const auto& h : elements_)
      if (!contains(ambient_.conjugate(g, h))) return false;
  return true;
}

std::vector<std::vector<Element>> left_cosets(const SubgroupView& h) {
  const Group& g = h.ambient();
  std::vector<char> seen(g.order(), 0);
  std::vector<std::vector<Element>> out;
  for (const auto& x : g.elements()) {
    if (seen[g.index(x)]) continue;
    std::vector<Element> coset;
    for (const auto& y : h.elements()) {
      const Element z = g.add(x, y);
      seen[g.index(z)] = 1;
      coset.push_back(z);
    }
    std::sort(coset.begin(), coset.end());
    out.push_back(std::move(coset));
  }
  return out;
}

QuotientView::QuotientView(SubgroupView kernel, Group target, GroupMap projection, GroupMap section)
    : kernel_(std::move(kernel)), target_(std::move(target)), projection_(std::move(projection)), section_(std::move(section)) {}

QuotientView::QuotientView(SubgroupView kernel, Group target, GroupMap projection)
    : kernel_(std::move(kernel)), target_(std::move(target)), projection_(std::move(projection)) {
  const Group& g = kernel_.ambient();
  auto table = std::make_shared<std::vector<Element>>(target_.order());
  std::vector<char> filled(target_.order(), 0);
  for (const auto& x : g.elements()) {
    const int64_t i = target_.index(projection_(x));
    if (!filled[i]) {
      filled[i] = 1;
      (*table)[i] = x;
    }
  }
  const Group t = target_;
  section_ = [table, t](const Element& y) { return (*table)[t.index(y)]; };
}

std::vector<std::string> QuotientView::validate() const {
  std::vector<std::string> problems;
  const Group& g = kernel_.ambient();
  if (!kernel_.is_normal()) problems.push_back("kernel is not normal in " + g.name());
  if (g.order() != kernel_.order() * target_.order()) problems.push_back("|G| != |H| * |G/H|");
  const auto gens = generating_set(g);
  for (const auto& x : g.elements()) {
    const Element px = projection_(x);
    if (!target_.contains(px)) {
      problems.push_back("projection leaves the target group");
      return problems;
    }
    if ((px == target_.zero()) != kernel_.contains(x)) {
      problems.push_back("projection kernel differs from H at " + g.encode(x));
      break;
    }
    bool hom = true;
    for (const auto& s : gens)
      if (!(projection_(g.add(x, s)) == target_.add(px, projection_(s)))) hom = false;
    if (!hom) {
      problems.push_back("projection is not a homomorphism at " + g.encode(x));
      break;
    }
  }
  for (const auto& y : target_.elements())
    if (!(projection_(section_(y)) == y)) {
      problems.push_back("section is not a right inverse at " + target_.encode(y));
      break;
    }
  return problems;
}

}  // namespace kts
