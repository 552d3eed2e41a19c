#pragma once

// Deterministic JSON for Kirkman systems, traces and verification reports:
// fixed key order, no whitespace variation, arrays in canonical order.

#include <string>

#include "kts/catalog.hpp"
#include "kts/pipeline.hpp"
#include "kts/verify.hpp"

namespace kts {

// {order, group, points, blocks, resolution, trace?, automorphisms?}
std::string system_to_json(const KirkmanSystem& s, const AutomorphismWitness* automorphisms = nullptr);
// Throws MalformedInput on syntax, type, shape or range errors. When the text
// carries automorphism generators and `automorphisms` is given, they are read.
KirkmanSystem system_from_json(const std::string& text, AutomorphismWitness* automorphisms = nullptr);

std::string trace_to_json(const TraceNode& t);
TraceNode trace_from_json(const std::string& text);

std::string reports_to_json(const std::vector<Report>& reports);
std::string order_class_to_json(const OrderClass& c);
std::string order_classes_to_json(const std::vector<OrderClass>& cs);

// Elements in the canonical encoding of their group.
std::string family_to_json(const FamilyWitness& w);
std::string catalog_entry_to_json(const CatalogEntry& e);

}  // namespace kts
