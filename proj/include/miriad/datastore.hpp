#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "miriad/records.hpp"
#include "miriad/time.hpp"

namespace miriad {

// Totals and content identity of a store root after an import. Snapshots are
// derived from file content only, so identical content hashes identically on
// every platform.
struct StoreSnapshot {
  std::uint64_t snapshot_id = 0;
  std::optional<Period> covered;  // event time range; empty stores have none
  std::map<std::string, std::uint64_t> counts;
  std::string content_hash;
  bool duplicate_batch = false;  // the import was a byte-identical no-op
};

struct CustomerAttributes {
  std::string country = kUnknownCountry;
  CustomerActivity activity = CustomerActivity::other;
};

enum class EventKind { display, order };

// A display or order event joined with its bibliographic record. `biblio`
// points into the owning Datastore and stays valid while it lives.
struct EnrichedEvent {
  enum class Join { matched, unmatched };

  EventKind kind = EventKind::display;
  Timestamp timestamp{};
  std::string actor_id;  // user_id for displays, customer_id for orders
  std::string tld;       // displays only
  std::string country = kUnknownCountry;
  CustomerActivity activity = CustomerActivity::other;  // orders only
  std::string record_id;
  Join join_status = Join::unmatched;
  const BiblioRecord* biblio = nullptr;

  bool matched() const { return join_status == Join::matched; }
};

// File-backed store root: one append-only JSON Lines file per store
// (query, display, order, biblio), a customer-attributes table, a manifest
// with batch and content hashes, and a stat/ directory for reports.
//
// Imports of a byte-identical batch are detected by batch hash and become
// no-ops. Single writer per root; any number of readers.
class Datastore {
 public:
  explicit Datastore(std::filesystem::path root);

  StoreSnapshot import_queries(const std::vector<QueryRecord>& records);
  StoreSnapshot import_displays(const std::vector<DisplayRecord>& records);
  StoreSnapshot import_orders(const std::vector<OrderRecord>& records);
  // Throws DataError on duplicate record_id (within the batch or the store)
  // and on implausible publication years.
  StoreSnapshot import_biblio(const std::vector<BiblioRecord>& records);

  // CSV rows "customer_id,country,activity"; replaces previous attributes
  // for re-imported ids. Returns the number of rows read.
  std::size_t import_customers(std::istream& csv);
  std::size_t import_customers_file(const std::filesystem::path& file);

  const std::vector<QueryRecord>& queries() const { return queries_; }
  const std::vector<DisplayRecord>& displays() const { return displays_; }
  const std::vector<OrderRecord>& orders() const { return orders_; }
  const std::vector<BiblioRecord>& biblio() const { return biblio_; }

  template <typename Record>
  using Filter = std::function<bool(const Record&)>;

  // Records with timestamp in [period.begin, period.end) satisfying the
  // filter, in timestamp order, ties in input order.
  std::vector<QueryRecord> select_queries(const Period& period,
                                          const Filter<QueryRecord>& f = {}) const;
  std::vector<DisplayRecord> select_displays(
      const Period& period, const Filter<DisplayRecord>& f = {}) const;
  std::vector<OrderRecord> select_orders(const Period& period,
                                         const Filter<OrderRecord>& f = {}) const;

  const BiblioRecord* find_biblio(const std::string& record_id) const;
  const CustomerAttributes* find_customer(const std::string& customer_id) const;

  // Left join on record_id; unmatched events are kept, so the output always
  // has the same length as the input. Orders additionally pick up country
  // and activity from the customer table when the log did not carry them.
  std::vector<EnrichedEvent> enrich(std::span<const DisplayRecord> events) const;
  std::vector<EnrichedEvent> enrich(std::span<const OrderRecord> events) const;
  std::vector<EnrichedEvent> enrich_events(EventKind kind,
                                           const Period& period) const;

  StoreSnapshot snapshot() const;
  std::filesystem::path stat_dir() const { return root_ / "stat"; }
  const std::filesystem::path& root() const { return root_; }

 private:
  template <typename Record>
  StoreSnapshot import_store(const std::string& store,
                             std::vector<Record>& target,
                             const std::vector<Record>& records,
                             const std::function<void()>& validate = {});
  std::size_t load_customers(std::istream& csv);
  void persist_manifest() const;
  StoreSnapshot make_snapshot() const;
  std::string store_content_hash() const;

  std::filesystem::path root_;
  std::vector<QueryRecord> queries_;
  std::vector<DisplayRecord> displays_;
  std::vector<OrderRecord> orders_;
  std::vector<BiblioRecord> biblio_;
  std::map<std::string, std::size_t> biblio_index_;
  std::map<std::string, CustomerAttributes> customers_;
  std::vector<std::pair<std::string, std::string>> batches_;  // (store, hash)
  std::uint64_t snapshot_id_ = 0;
};

}  // namespace miriad
