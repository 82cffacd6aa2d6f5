#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "miriad/datastore.hpp"
#include "miriad/time.hpp"

namespace miriad {

enum class MatrixKind { document, user };

std::string_view to_string(MatrixKind kind);
std::optional<MatrixKind> parse_matrix_kind(std::string_view name);

// user -> set of record_ids used in the analysis period
struct TransactionSet {
  std::map<std::string, std::set<std::string>> users;

  std::size_t user_count() const { return users.size(); }
  std::size_t document_count() const;
  bool empty() const { return users.empty(); }
};

TransactionSet build_transactions(std::span<const EnrichedEvent> events);
TransactionSet build_transactions(const Datastore& store, EventKind kind,
                                  const Period& period);

using PairKey = std::pair<std::uint32_t, std::uint32_t>;  // first < second

struct CooccurrenceMatrix {
  MatrixKind kind = MatrixKind::document;
  std::vector<std::string> items;             // ascending
  std::vector<std::uint64_t> occurrences;     // o(i), aligned with items
  std::map<PairKey, std::uint64_t> pairs;     // C(i,j) > 0 only

  std::uint64_t count(std::uint32_t i, std::uint32_t j) const;
};

CooccurrenceMatrix cooccurrence(const TransactionSet& transactions,
                                MatrixKind kind);

struct AssociationMatrix {
  MatrixKind kind = MatrixKind::document;
  std::vector<std::string> items;
  std::vector<std::uint64_t> occurrences;
  std::map<PairKey, double> values;           // E(i,j) > 0 only

  double value(std::uint32_t i, std::uint32_t j) const;
  bool empty() const { return items.empty(); }
};

// E(i,j) = C(i,j)^2 / (o(i) * o(j))
AssociationMatrix equivalence(const CooccurrenceMatrix& cooc);

// sparse triples "item_i,item_j,value" + "item,occurrences" sidecar
std::string render_matrix_csv(const AssociationMatrix& assoc);
std::string render_matrix_csv(const CooccurrenceMatrix& cooc);
std::string render_occurrences_csv(const std::vector<std::string>& items,
                                   const std::vector<std::uint64_t>& occ);

}  // namespace miriad
