#pragma once

// Finite groups assembled as direct products of the atoms D, G_alpha, Z_m
// and V_n. Elements are explicit coordinate tuples; no Cayley tables.
//
// Coordinates per atom:
//   D        (a, b)      in Z_2 x Z_3,  (a,b)+(c,d) = (a+c, (-1)^c b + d)
//   G_alpha  (a, b, c)   in Z_3 x Z_{2^alpha}^2, (a,b,c)+(d,e,f) = (a,b,c)Theta^d + (d,e,f)
//   Z_m      (x)
//   V_n      one field index per component of n, components increasing
// Lexicographic order on coordinates equals the order of Group::index.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kts/finring.hpp"

namespace kts {

inline constexpr size_t kMaxCoords = 12;

struct Element {
  std::array<int32_t, kMaxCoords> c{};
  uint8_t size = 0;

  int32_t& operator[](size_t i) { return c[i]; }
  int32_t operator[](size_t i) const { return c[i]; }
  friend bool operator==(const Element& x, const Element& y) {
    if (x.size != y.size) return false;
    for (size_t i = 0; i < x.size; ++i)
      if (x.c[i] != y.c[i]) return false;
    return true;
  }
  friend std::strong_ordering operator<=>(const Element& x, const Element& y) {
    const size_t n = std::min(x.size, y.size);
    for (size_t i = 0; i < n; ++i)
      if (auto r = x.c[i] <=> y.c[i]; r != 0) return r;
    return x.size <=> y.size;
  }
};

enum class AtomKind { Dihedral, Galpha, Cyclic, Ring };

struct Atom {
  AtomKind kind;
  int64_t param;  // alpha for Galpha, m for Cyclic, n for Ring, 6 for Dihedral
  std::shared_ptr<const Ring> ring;  // Ring atoms only

  static Atom dihedral();
  static Atom galpha(int alpha);
  static Atom cyclic(int64_t m);
  static Atom vn(int64_t n);

  int64_t order() const;
  size_t width() const;
  std::string name() const;
  friend bool operator==(const Atom& a, const Atom& b) { return a.kind == b.kind && a.param == b.param; }
};

class Group {
 public:
  Group() = default;
  explicit Group(std::vector<Atom> atoms);

  // Accepts names such as "D", "G2", "G1xV9", "DxV5", "Z2xZ6", "G1xV3xV7".
  static Group parse(std::string_view name);

  Group times(const Group& other) const;
  Group times(const Atom& atom) const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  size_t offset(size_t atom) const { return offsets_[atom]; }
  size_t width() const { return width_; }
  int64_t order() const { return order_; }
  std::string name() const;
  const std::vector<int32_t>& radices() const { return radix_; }

  Element zero() const;
  Element add(const Element& x, const Element& y) const;
  Element neg(const Element& x) const;
  // Right difference x + (-y).
  Element sub(const Element& x, const Element& y) const;
  // x + y - x
  Element conjugate(const Element& x, const Element& y) const;
  Element multiple(const Element& x, int64_t k) const;

  int64_t index(const Element& x) const;
  Element at(int64_t idx) const;
  std::vector<Element> elements() const;
  bool contains(const Element& x) const;

  int64_t element_order(const Element& x) const;
  std::vector<Element> involutions() const;
  // Canonical involution when the leading atom is G_alpha.
  std::optional<Element> canonical_involution() const;
  bool is_pertinent() const;
  bool is_abelian() const;

  // Ring-atom helpers: the component coordinates of atom `atom`.
  RingElement ring_part(const Element& x, size_t atom) const;
  void set_ring_part(Element& x, size_t atom, const RingElement& r) const;
  // mu_s: multiplies the coordinates of ring atom `atom` by s.
  Element scale(const Element& x, size_t atom, const RingElement& s) const;

  // Literal coordinates as printed in tables: extension-field components
  // expand to their coefficient digits (a0, a1, ...).
  std::vector<int> literal(const Element& x) const;
  Element from_literal(const std::vector<int>& lit) const;
  size_t literal_width() const;

  // "G1:(2,1,1)|V5:3"
  std::string encode(const Element& x) const;
  Element decode(std::string_view text) const;

  friend bool operator==(const Group& a, const Group& b) { return a.atoms_ == b.atoms_; }

 private:
  std::vector<Atom> atoms_;
  std::vector<size_t> offsets_;
  std::vector<int32_t> radix_;
  size_t width_ = 0;
  int64_t order_ = 1;
};

using GroupMap = std::function<Element(const Element&)>;

// Embeds `from` into `to` atom-wise. atom_map[i] is the atom of `to` that
// receives atom i of `from`; scale[i] multiplies the Z_{2^alpha} coordinates of
// a G_alpha atom (embedding G_beta in G_alpha needs 2^{alpha-beta}).
// Unmapped atoms of `to` are zero.
GroupMap atom_embedding(const Group& from, const Group& to, const std::vector<size_t>& atom_map,
                        const std::vector<int>& scale = {});

// Greedy: each element not yet generated is added, so at most log2|G| of them.
std::vector<Element> generating_set(const Group& g);

bool pertinent_order(int64_t n);
// D x Z_m or G_alpha x Z_m.
Group pertinent_witness(int64_t n);

class SubgroupView {
 public:
  SubgroupView() = default;
  // Closure of the generators.
  static SubgroupView generated(const Group& g, const std::vector<Element>& gens);
  // Validates closure of an explicit carrier.
  static SubgroupView from_carrier(const Group& g, const std::vector<Element>& carrier);

  const Group& ambient() const { return ambient_; }
  const std::vector<Element>& elements() const { return elements_; }
  const std::vector<Element>& generators() const { return generators_; }
  bool contains(const Element& x) const { return member_[ambient_.index(x)] != 0; }
  int64_t order() const { return static_cast<int64_t>(elements_.size()); }
  bool is_normal() const;

 private:
  Group ambient_;
  std::vector<Element> generators_;
  std::vector<Element> elements_;
  std::vector<char> member_;
};

// Left cosets x + H, each sorted, ordered by least member.
std::vector<std::vector<Element>> left_cosets(const SubgroupView& h);

// G/H with a caller-supplied epimorphism onto a concrete group and a section.
class QuotientView {
 public:
  QuotientView(SubgroupView kernel, Group target, GroupMap projection, GroupMap section);
  // Default section: least element of each fibre.
  QuotientView(SubgroupView kernel, Group target, GroupMap projection);

  const SubgroupView& kernel() const { return kernel_; }
  const Group& target() const { return target_; }
  Element project(const Element& x) const { return projection_(x); }
  Element lift(const Element& y) const { return section_(y); }
  // Exhaustive checks: normal kernel, homomorphism, kernel, section.
  std::vector<std::string> validate() const;

 private:
  SubgroupView kernel_;
  Group target_;
  GroupMap projection_;
  GroupMap section_;
};

}  // namespace kts
