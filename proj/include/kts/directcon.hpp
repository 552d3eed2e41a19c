#pragma once

// Direct constructions of relative difference families over X x V_n, where X
// is D, G_1 or a group carrying a pseudo-resolvable family. Every output
// records its relative subgroup, resolving involution and strong multipliers;
// callers re-verify with the designkit predicates.

#include <optional>

#include "kts/designkit.hpp"

namespace kts {

// Initial blocks over X x V_n for a unit u of order 4 (D or G_1) or 6 (G_1).
std::vector<Block> initial_blocks_9mod24(const Group& g, const RingElement& u);
std::vector<Block> initial_blocks_15mod24(const Group& g, const RingElement& u);
std::vector<Block> initial_blocks_15mod24bis(const Group& g, const RingElement& u);

// (D x V_{4n+1}, D x V_1)-RDF, J = {0, (1,0,0)}. Components of 4n+1 must be 1 mod 4.
FamilyWitness construct_9mod24(int64_t n, const std::optional<RingElement>& u = std::nullopt);
// (G_1 x V_n, G_1 x V_1)-RDF, J = {0, (0,1,1,0)}. Components 1 mod 4.
FamilyWitness construct_15mod24(int64_t n);
// As above with twelve initial blocks. Components 1 mod 6.
FamilyWitness construct_15mod24bis(int64_t n);

// (G x V_n, G x V_1)-RDF from a pseudo-resolvable family over G, resolved by
// its j_beta. Components of n must be 3 mod 4 and greater than 3.
FamilyWitness lift_prdf(const FamilyWitness& prdf, int64_t n);

enum class DddfParameter { Least, Fallback };

// x in F_q with x a non-square and x - 2 a nonzero square. Least picks the
// least such x; Fallback intersects X with the six-element candidate set
// derived from the least non-square y != 2. Throws DataError if none exists.
int dddf_parameter(const Field& f, DddfParameter how = DddfParameter::Least);

// Doubly disjoint (Z_3 x V_n, Z_3 x V_1)-DF with one translate per block.
// Components of n must be 1 mod 4.
FamilyWitness construct_dddf(int64_t n, DddfParameter how = DddfParameter::Least);

// Generators of the subgroup formed by the first k atoms of g.
std::vector<Element> leading_generators(const Group& g, size_t k);

}  // namespace kts
