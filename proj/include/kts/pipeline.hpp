#pragma once

// Order classification, the three construction routes for a {2^3,3} spread
// family over the pertinent group of order v - 3, and assembly of the
// 3-pyramidal Kirkman system from such a family.

#include <string>
#include <vector>

#include "kts/compose.hpp"
#include "kts/system.hpp"

namespace kts {

enum class OrderCase { NineMod24, FifteenMod24, FortyEightPlus3, NotPyramidal };
std::string to_string(OrderCase c);

struct OrderClass {
  int64_t v = 0;
  OrderCase kind = OrderCase::NotPyramidal;
  int64_t n = 0;  // v = 24n+9, 24n+15 or 48n+3
  int e = 0;      // 48n+3 only: n = 4^e m with m odd
  int64_t m = 0;
  bool covered = false;
  std::string route;
  std::string explanation;
};

// Throws PreconditionError unless v = 3 (mod 6) and v >= 9.
OrderClass classify_order(int64_t v);
// Every prime 3 (mod 4) divides k to an even power. k >= 1.
bool sum_of_two_squares(int64_t k);

struct Construction {
  FamilyWitness family;
  TraceNode trace;
};

// Spread families over D x V_{4n+1}, the case-ii groups and G_{e+2} x V_m.
// NotCovered when the route's hypothesis fails, PreconditionError on bad n.
Construction construct_case_i(int64_t n);
Construction construct_case_ii(int64_t n);
Construction construct_case_iii(int e, int64_t n_odd);
// Dispatches on classify_order; NotCovered for uncovered or non-pyramidal v.
Construction construct_for_order(int64_t v);

// Additive isomorphism between groups with the same non-ring atoms and the
// same elementary abelian parts: digits of every ring component are read in
// atom order per prime and redistributed over the target's components.
GroupMap ring_transport(const Group& from, const Group& to);
FamilyWitness transport_family(const FamilyWitness& w, const Group& to);
DifferenceMatrix transport_matrix(const DifferenceMatrix& m, const Group& to);

// Classes {B_inf} + right cosets of {0, x, -x}, and the translates Q + g of
// Q = {inf_1,0,j}, {inf_2,a,a+j}, {inf_3,b,b+j}, {A, A+j : A in F} over
// representatives g of the right cosets of {0, j}. The result is checked by
// the verify module; PreconditionError when the family is not a resolvable
// spread family, InternalError when the assembled system fails verification.
KirkmanSystem build_kts(const FamilyWitness& rdf, bool verify = true);

// |G| m together with generators of G x| M as point permutations: right
// translations by a generating set of G, then mu_s for each multiplier
// generator. m = 1 when the family declares no multipliers.
struct AutomorphismWitness {
  int64_t bound = 0;
  int64_t multiplier_order = 1;
  std::vector<std::vector<int32_t>> generators;
  std::vector<std::string> labels;
};
AutomorphismWitness automorphism_lower_bound(const KirkmanSystem& s, const FamilyWitness& rdf);

// FNV-1a of the group name and the canonical blocks, as 16 hex digits.
std::string family_digest(const FamilyWitness& w);

}  // namespace kts
