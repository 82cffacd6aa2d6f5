#include "miriad/datastore.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "miriad/errors.hpp"
#include "miriad/util.hpp"

namespace miriad {

namespace {

constexpr const char* kStores[] = {"query", "display", "order", "biblio"};

std::filesystem::path store_file(const std::filesystem::path& root,
                                 const std::string& store) {
  return root / (store + ".jsonl");
}

template <typename Record>
std::string record_line(const Record& r) {
  nlohmann::json j = r;
  return j.dump();
}

template <typename Record>
void load_store(const std::filesystem::path& file, std::vector<Record>& out) {
  std::ifstream in(file);
  if (!in) return;  // a store that was never written to
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<Record>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(file.string() + ":" + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
}

template <typename Record>
std::uint64_t hash_records(std::uint64_t h, const std::vector<Record>& records) {
  for (const auto& r : records) {
    h = fnv1a64(record_line(r), h);
    h = fnv1a64("\n", h);
  }
  return h;
}

Timestamp event_time(const QueryRecord& r) { return r.timestamp; }
Timestamp event_time(const DisplayRecord& r) { return r.timestamp; }
Timestamp event_time(const OrderRecord& r) { return r.timestamp; }

template <typename Record>
std::vector<Record> select_records(const std::vector<Record>& all,
                                   const Period& period,
                                   const std::function<bool(const Record&)>& f) {
  if (period.end < period.begin)
    throw ArgumentError("inverted interval in select");
  std::vector<Record> out;
  for (const auto& r : all) {
    if (!period.contains(event_time(r))) continue;
    if (f && !f(r)) continue;
    out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Record& a, const Record& b) {
                     return event_time(a) < event_time(b);
                   });
  return out;
}

}  // namespace

Datastore::Datastore(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
  std::filesystem::create_directories(stat_dir());

  load_store(store_file(root_, "query"), queries_);
  load_store(store_file(root_, "display"), displays_);
  load_store(store_file(root_, "order"), orders_);
  load_store(store_file(root_, "biblio"), biblio_);
  for (std::size_t i = 0; i < biblio_.size(); ++i) {
    if (!biblio_index_.emplace(biblio_[i].record_id, i).second)
      throw DataError("duplicate key in biblio store: " +
                      biblio_[i].record_id);
  }

  auto manifest_path = root_ / "manifest.json";
  if (std::filesystem::exists(manifest_path)) {
    std::ifstream in(manifest_path);
    nlohmann::json m;
    try {
      in >> m;
    } catch (const nlohmann::json::exception& e) {
      throw DataError("unreadable manifest " + manifest_path.string() + ": " +
                      e.what());
    }
    snapshot_id_ = m.value("snapshot_id", std::uint64_t{0});
    for (const auto& b : m.value("batches", nlohmann::json::array()))
      batches_.emplace_back(b.at("store").get<std::string>(),
                            b.at("hash").get<std::string>());
    auto recorded = m.value("content_hash", std::string{});
    if (!recorded.empty() && recorded != store_content_hash())
      throw DataError("store content does not match manifest hash in " +
                      root_.string());
  }

  auto customers_path = root_ / "customers.csv";
  if (std::filesystem::exists(customers_path)) {
    std::ifstream in(customers_path);
    load_customers(in);
  }
}

template <typename Record>
StoreSnapshot Datastore::import_store(const std::string& store,
                                      std::vector<Record>& target,
                                      const std::vector<Record>& records,
                                      const std::function<void()>& validate) {
  std::vector<std::string> lines;
  lines.reserve(records.size());
  std::uint64_t h = fnv1a64(store);
  for (const auto& r : records) {
    lines.push_back(record_line(r));
    h = fnv1a64(lines.back(), h);
    h = fnv1a64("\n", h);
  }
  std::string batch_hash = to_hex(h);

  // byte-identical re-imports are no-ops, checked before any validation
  for (const auto& [s, bh] : batches_) {
    if (s == store && bh == batch_hash) {
      StoreSnapshot snap = make_snapshot();
      snap.duplicate_batch = true;
      return snap;
    }
  }
  if (validate) validate();

  auto path = store_file(root_, store);
  std::ofstream out(path, std::ios::app | std::ios::binary);
  if (!out) throw IoError("cannot write store file: " + path.string());
  for (const auto& line : lines) out << line << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());

  target.insert(target.end(), records.begin(), records.end());
  batches_.emplace_back(store, batch_hash);
  ++snapshot_id_;
  persist_manifest();
  return make_snapshot();
}

StoreSnapshot Datastore::import_queries(const std::vector<QueryRecord>& records) {
  return import_store("query", queries_, records);
}

StoreSnapshot Datastore::import_displays(
    const std::vector<DisplayRecord>& records) {
  return import_store("display", displays_, records);
}

StoreSnapshot Datastore::import_orders(const std::vector<OrderRecord>& records) {
  return import_store("order", orders_, records);
}

StoreSnapshot Datastore::import_biblio(const std::vector<BiblioRecord>& records) {
  std::map<std::string, std::size_t> staged;
  auto validate = [&] {
    staged = biblio_index_;
    std::size_t next = biblio_.size();
    for (const auto& r : records) {
      if (r.record_id.empty())
        throw DataError("biblio record without record_id");
      if (!staged.emplace(r.record_id, next++).second)
        throw DataError("duplicate key: " + r.record_id);
      if (!plausible_publication_year(r.publication_year))
        throw DataError("implausible publication_year " +
                        std::to_string(r.publication_year) + " for " +
                        r.record_id);
    }
  };
  StoreSnapshot snap = import_store("biblio", biblio_, records, validate);
  if (!snap.duplicate_batch) biblio_index_ = std::move(staged);
  return snap;
}

std::size_t Datastore::load_customers(std::istream& csv) {
  std::string line;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  while (std::getline(csv, line)) {
    ++line_no;
    auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto fields = split(text, ',');
    if (fields.size() != 3)
      throw DataError("bad customer row " + std::to_string(line_no) + ": " +
                      line);
    CustomerAttributes attrs;
    auto country = trim(fields[1]);
    attrs.country =
        country.empty() ? std::string(kUnknownCountry) : to_upper(country);
    attrs.activity =
        parse_activity(trim(fields[2])).value_or(CustomerActivity::other);
    customers_[std::string(trim(fields[0]))] = attrs;
    ++rows;
  }
  return rows;
}

std::size_t Datastore::import_customers(std::istream& csv) {
  std::size_t rows = load_customers(csv);
  std::ofstream out(root_ / "customers.csv", std::ios::binary);
  if (!out) throw IoError("cannot write customers.csv in " + root_.string());
  for (const auto& [id, attrs] : customers_)
    out << id << ',' << attrs.country << ','
        << activity_label(attrs.activity) << '\n';
  return rows;
}

std::size_t Datastore::import_customers_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read customer table: " + file.string());
  return import_customers(in);
}

std::vector<QueryRecord> Datastore::select_queries(
    const Period& period, const Filter<QueryRecord>& f) const {
  return select_records(queries_, period, f);
}

std::vector<DisplayRecord> Datastore::select_displays(
    const Period& period, const Filter<DisplayRecord>& f) const {
  return select_records(displays_, period, f);
}

std::vector<OrderRecord> Datastore::select_orders(
    const Period& period, const Filter<OrderRecord>& f) const {
  return select_records(orders_, period, f);
}

const BiblioRecord* Datastore::find_biblio(const std::string& record_id) const {
  auto it = biblio_index_.find(record_id);
  return it == biblio_index_.end() ? nullptr : &biblio_[it->second];
}

const CustomerAttributes* Datastore::find_customer(
    const std::string& customer_id) const {
  auto it = customers_.find(customer_id);
  return it == customers_.end() ? nullptr : &it->second;
}

std::vector<EnrichedEvent> Datastore::enrich(
    std::span<const DisplayRecord> events) const {
  std::vector<EnrichedEvent> out;
  out.reserve(events.size());
  for (const auto& d : events) {
    EnrichedEvent e;
    e.kind = EventKind::display;
    e.timestamp = d.timestamp;
    e.actor_id = d.user_id;
    e.tld = d.tld;
    e.country = d.country;
    e.record_id = d.record_id;
    e.biblio = find_biblio(d.record_id);
    e.join_status =
        e.biblio ? EnrichedEvent::Join::matched : EnrichedEvent::Join::unmatched;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EnrichedEvent> Datastore::enrich(
    std::span<const OrderRecord> events) const {
  std::vector<EnrichedEvent> out;
  out.reserve(events.size());
  for (const auto& o : events) {
    EnrichedEvent e;
    e.kind = EventKind::order;
    e.timestamp = o.timestamp;
    e.actor_id = o.customer_id;
    e.country = o.customer_country;
    e.activity = o.customer_activity;
    // the customer table fills what the log line left unspecified
    if (const auto* attrs = find_customer(o.customer_id)) {
      if (e.country == kUnknownCountry) e.country = attrs->country;
      if (e.activity == CustomerActivity::other) e.activity = attrs->activity;
    }
    e.record_id = o.record_id;
    e.biblio = find_biblio(o.record_id);
    e.join_status =
        e.biblio ? EnrichedEvent::Join::matched : EnrichedEvent::Join::unmatched;
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EnrichedEvent> Datastore::enrich_events(EventKind kind,
                                                    const Period& period) const {
  if (kind == EventKind::display) {
    auto selected = select_displays(period);
    return enrich(std::span<const DisplayRecord>(selected));
  }
  auto selected = select_orders(period);
  return enrich(std::span<const OrderRecord>(selected));
}

StoreSnapshot Datastore::make_snapshot() const {
  StoreSnapshot snap;
  snap.snapshot_id = snapshot_id_;
  snap.counts = {{"query", queries_.size()},
                 {"display", displays_.size()},
                 {"order", orders_.size()},
                 {"biblio", biblio_.size()}};
  std::optional<Timestamp> lo, hi;
  auto widen = [&](Timestamp t) {
    if (!lo || t < *lo) lo = t;
    if (!hi || t > *hi) hi = t;
  };
  for (const auto& r : queries_) widen(r.timestamp);
  for (const auto& r : displays_) widen(r.timestamp);
  for (const auto& r : orders_) widen(r.timestamp);
  if (lo)
    snap.covered = Period{*lo, *hi + std::chrono::seconds{1}};
  snap.content_hash = store_content_hash();
  return snap;
}

std::string Datastore::store_content_hash() const {
  std::uint64_t h = fnv1a64("miriad-store");
  h = fnv1a64("query", h);
  h = hash_records(h, queries_);
  h = fnv1a64("display", h);
  h = hash_records(h, displays_);
  h = fnv1a64("order", h);
  h = hash_records(h, orders_);
  h = fnv1a64("biblio", h);
  h = hash_records(h, biblio_);
  return to_hex(h);
}

StoreSnapshot Datastore::snapshot() const { return make_snapshot(); }

void Datastore::persist_manifest() const {
  StoreSnapshot snap = make_snapshot();
  nlohmann::json m;
  m["format"] = 1;
  m["snapshot_id"] = snap.snapshot_id;
  m["content_hash"] = snap.content_hash;
  nlohmann::json counts;
  for (const auto& store : kStores)
    counts[store] = snap.counts.at(store);
  m["counts"] = counts;
  if (snap.covered) {
    m["covered"] = {{"from", format_timestamp(snap.covered->begin)},
                    {"to", format_timestamp(snap.covered->end)}};
  }
  auto batches = nlohmann::json::array();
  for (const auto& [store, hash] : batches_)
    batches.push_back({{"store", store}, {"hash", hash}});
  m["batches"] = batches;

  auto path = root_ / "manifest.json";
  auto tmp = root_ / "manifest.json.tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write manifest in " + root_.string());
    out << m.dump(2) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace miriad
