#pragma once

// Seed families and difference matrices transcribed literally, verified on
// first access. An entry that fails its predicate is quarantined: it stays
// listed with its diagnosis, but family()/matrix() refuse to serve it.

#include <optional>
#include <string>
#include <vector>

#include "kts/designkit.hpp"

namespace kts {

struct CatalogEntry {
  std::string id;
  std::string description;
  std::optional<FamilyWitness> family;
  std::optional<DifferenceMatrix> matrix;
  bool verified = false;
  std::string diagnosis;
  // Single-coordinate edits that would make a quarantined entry pass.
  std::vector<std::string> repairs;
};

// Ids in a fixed order.
std::vector<std::string> catalog_ids();
// Throws UnknownId.
const CatalogEntry& catalog_entry(const std::string& id);
// Throws UnknownId, or DataError for a quarantined entry.
const FamilyWitness& catalog_family(const std::string& id);
const DifferenceMatrix& catalog_matrix(const std::string& id);

struct CatalogReport {
  size_t total = 0;
  size_t verified = 0;
  std::vector<std::string> lines;  // one per entry
  bool ok() const { return verified == total; }
};
CatalogReport catalog_self_check();

// Unverified literal data, for tests that perturb it.
CatalogEntry catalog_raw(const std::string& id);
// Re-runs the predicate of an entry's family or matrix.
Diagnosis catalog_check(const CatalogEntry& e);

}  // namespace kts
