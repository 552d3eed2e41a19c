#pragma once

// Recursive machinery: unions along subgroup chains and compositions of a
// family over G/H with a difference matrix over H. Outputs are not verified
// here; callers re-check them with the designkit predicates.

#include <string>

#include "kts/designkit.hpp"

namespace kts {

// One family of a chain together with its atom-wise embedding into the union group.
struct ChainLink {
  FamilyWitness family;
  std::vector<size_t> atom_map;
  std::vector<int> scale;
};

// Links ordered outermost first: link k is an (H_{k+1}, H_k)-RDF and H_k is
// the image of link k+1's group. All embedded j must coincide. The union keeps
// the outermost family's strong multipliers. Throws PreconditionError on a
// chain or J mismatch.
FamilyWitness chain_union(const Group& g, const std::vector<ChainLink>& links);

// Outer (G, H)-RDF plus an inner (H, {2^3,3})-RDF embedded into H. The spread,
// a and b come from the inner family; strong multipliers from the outer one.
FamilyWitness pertinent_union(const FamilyWitness& outer, const ChainLink& inner);

// Rows (g, a g, b g) over a product of V atoms with every component > 3:
// a is the least element outside {0, 1} and b = a^2 unless a^2 = 1, then the
// least element outside {0, 1, a}; both chosen per component.
DifferenceMatrix homogeneous_dm(const Group& h);
struct DmMultipliers {
  std::vector<RingElement> a, b;  // one per atom
};
DmMultipliers homogeneous_dm_multipliers(const Group& h);

// Returns the catalog matrix "dm:G1", "dm:Z2xZ6" or "dm:Z4xZ4".
const DifferenceMatrix& fixed_splittable_dm(const std::string& which);

// G with a normal subgroup embedded from h, the quotient q, an epimorphism
// G -> q and a section q -> G.
struct CompositionFrame {
  Group g, q, h;
  GroupMap project, lift, embed;
  // Atom of g that carries atom i of q, when the frame is a direct splitting.
  std::vector<size_t> q_atoms;
  std::string description;
};

// H = the listed atoms of g, q = the remaining atoms in order. Section: zero
// kernel coordinates, the least element of each coset.
CompositionFrame product_frame(const Group& g, const std::vector<size_t>& kernel_atoms);
// G_alpha over Z_4 x Z_4 = {0} x 2^{alpha-2}Z x 2^{alpha-2}Z, q = G_{alpha-2}.
CompositionFrame galpha_z4z4_frame(int alpha);
// G_beta x V_3 over Z_2 x Z_6 = Klein x V_3, q = G_{beta-1}. (1,0) maps to the
// canonical involution and (0,1) to (0, h, 0, 1) with h = 2^{beta-1}.
CompositionFrame galpha_v3_z2z6_frame(int beta);
// Sampled checks of the frame maps; empty on success.
std::vector<std::string> validate_frame(const CompositionFrame& f);

enum class ComposeMode { Plain, Homogeneous, Splittable };
std::string to_string(ComposeMode m);

// F over f.q composed with M over f.h. Homogeneous: F must be resolved by
// project(j) with j = lift(F.j) an involution outside H; M homogeneous.
// Splittable: F doubly disjoint (a resolvable F uses translates F.j), M
// splittable by j = embed(M.j); second-half columns are moved by t_i = h_i +
// lift(tau_i) with h_i the least element of H conjugating tau_i's image of j
// back to j. Throws PreconditionError on unmet hypotheses and DataError when
// no h_i exists.
FamilyWitness df_compose_dm(const FamilyWitness& f, const DifferenceMatrix& m, const CompositionFrame& frame,
                            ComposeMode mode);

// Translates t_i used by the last splittable composition of f; exposed for tests.
std::vector<Element> splitting_translates(const FamilyWitness& f, const DifferenceMatrix& m,
                                          const CompositionFrame& frame);

// Atom-compatible groups: identical atoms, except that Z_p and V_p agree.
bool same_law(const Group& a, const Group& b);

}  // namespace kts
