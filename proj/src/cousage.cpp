#include "miriad/cousage.hpp"

#include <algorithm>

#include "miriad/util.hpp"

namespace miriad {

std::string_view to_string(MatrixKind kind) {
  return kind == MatrixKind::document ? "document" : "user";
}

std::optional<MatrixKind> parse_matrix_kind(std::string_view name) {
  if (name == "document") return MatrixKind::document;
  if (name == "user") return MatrixKind::user;
  return std::nullopt;
}

std::size_t TransactionSet::document_count() const {
  std::set<std::string> docs;
  for (const auto& [user, set] : users) docs.insert(set.begin(), set.end());
  return docs.size();
}

TransactionSet build_transactions(std::span<const EnrichedEvent> events) {
  TransactionSet t;
  for (const auto& e : events) {
    if (e.actor_id.empty() || e.record_id.empty()) continue;
    t.users[e.actor_id].insert(e.record_id);
  }
  return t;
}

TransactionSet build_transactions(const Datastore& store, EventKind kind,
                                  const Period& period) {
  return build_transactions(store.enrich_events(kind, period));
}

std::uint64_t CooccurrenceMatrix::count(std::uint32_t i,
                                        std::uint32_t j) const {
  if (i == j) return 0;
  if (i > j) std::swap(i, j);
  auto it = pairs.find({i, j});
  return it == pairs.end() ? 0 : it->second;
}

double AssociationMatrix::value(std::uint32_t i, std::uint32_t j) const {
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  auto it = values.find({i, j});
  return it == values.end() ? 0.0 : it->second;
}

CooccurrenceMatrix cooccurrence(const TransactionSet& transactions,
                                MatrixKind kind) {
  CooccurrenceMatrix m;
  m.kind = kind;
  if (transactions.empty()) return m;

  if (kind == MatrixKind::document) {
    std::map<std::string, std::uint32_t> index;
    for (const auto& [user, docs] : transactions.users)
      for (const auto& d : docs) index.emplace(d, 0);
    m.items.reserve(index.size());
    for (auto& [doc, idx] : index) {
      idx = std::uint32_t(m.items.size());
      m.items.push_back(doc);
    }
    m.occurrences.assign(m.items.size(), 0);
    std::vector<std::uint32_t> row;
    for (const auto& [user, docs] : transactions.users) {
      row.clear();
      for (const auto& d : docs) row.push_back(index.at(d));
      // std::set iteration is ordered, so row is already ascending
      for (std::uint32_t idx : row) ++m.occurrences[idx];
      for (std::size_t a = 0; a < row.size(); ++a)
        for (std::size_t b = a + 1; b < row.size(); ++b)
          ++m.pairs[{row[a], row[b]}];
    }
  } else {
    m.items.reserve(transactions.users.size());
    for (const auto& [user, docs] : transactions.users) {
      m.occurrences.push_back(docs.size());
      m.items.push_back(user);
    }
    // invert: C(u,v) = |set_u ∩ set_v| = shared documents
    std::map<std::string, std::vector<std::uint32_t>> doc_users;
    std::uint32_t idx = 0;
    for (const auto& [user, docs] : transactions.users) {
      for (const auto& d : docs) doc_users[d].push_back(idx);
      ++idx;
    }
    for (const auto& [doc, users] : doc_users)
      for (std::size_t a = 0; a < users.size(); ++a)
        for (std::size_t b = a + 1; b < users.size(); ++b)
          ++m.pairs[{users[a], users[b]}];
  }
  return m;
}

AssociationMatrix equivalence(const CooccurrenceMatrix& cooc) {
  AssociationMatrix a;
  a.kind = cooc.kind;
  a.items = cooc.items;
  a.occurrences = cooc.occurrences;
  for (const auto& [key, c] : cooc.pairs) {
    double oi = double(cooc.occurrences[key.first]);
    double oj = double(cooc.occurrences[key.second]);
    a.values[key] = (double(c) * double(c)) / (oi * oj);
  }
  return a;
}

namespace {

template <typename Map, typename Format>
std::string triples(const std::vector<std::string>& items, const Map& pairs,
                    Format format) {
  std::string out = "item_i,item_j,value\n";
  for (const auto& [key, value] : pairs)
    out += csv_row({items[key.first], items[key.second], format(value)});
  return out;
}

}  // namespace

std::string render_matrix_csv(const AssociationMatrix& assoc) {
  return triples(assoc.items, assoc.values,
                 [](double v) { return format_value(v); });
}

std::string render_matrix_csv(const CooccurrenceMatrix& cooc) {
  return triples(cooc.items, cooc.pairs,
                 [](std::uint64_t v) { return std::to_string(v); });
}

std::string render_occurrences_csv(const std::vector<std::string>& items,
                                   const std::vector<std::uint64_t>& occ) {
  std::string out = "item,occurrences\n";
  for (std::size_t i = 0; i < items.size(); ++i)
    out += csv_row({items[i], std::to_string(occ[i])});
  return out;
}

}  // namespace miriad
