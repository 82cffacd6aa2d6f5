#include "miriad/usage_factors.hpp"

#include <algorithm>

#include "miriad/errors.hpp"
#include "miriad/util.hpp"

namespace miriad {

namespace {

EventKind event_kind(FactorKind kind) {
  return kind == FactorKind::wuf ? EventKind::display : EventKind::order;
}

std::uint64_t count_events(const Datastore& store, FactorKind kind,
                           std::string_view normalized_journal,
                           const Period& period, std::optional<int> year) {
  std::uint64_t n = 0;
  for (const auto& e : store.enrich_events(event_kind(kind), period)) {
    if (!e.matched()) continue;
    if (normalize_journal(e.biblio->journal_title) != normalized_journal)
      continue;
    if (year && e.biblio->publication_year != *year) continue;
    ++n;
  }
  return n;
}

FactorResult factor_impl(const Datastore& store, FactorKind kind,
                         std::string_view journal, const Period& period,
                         std::optional<int> year,
                         std::optional<std::uint64_t> stored_count) {
  auto key = normalize_journal(journal);
  JournalHoldings holdings(store.biblio());
  std::uint64_t denom = stored_count
                            ? *stored_count
                            : (year ? holdings.stored_count(key, *year)
                                    : holdings.stored_count(key));
  auto numer = count_events(store, kind, key, period, year);
  return make_factor(kind, holdings.display_title(key), period, year, numer,
                     denom);
}

}  // namespace

std::string_view to_string(FactorKind kind) {
  return kind == FactorKind::wuf ? "wuf" : "cof";
}

std::optional<FactorKind> parse_factor_kind(std::string_view name) {
  if (name == "wuf") return FactorKind::wuf;
  if (name == "cof") return FactorKind::cof;
  return std::nullopt;
}

int factor_decimals(FactorKind kind) {
  return kind == FactorKind::wuf ? 2 : 3;
}

std::string normalize_journal(std::string_view title) {
  return to_lower(trim(title));
}

JournalHoldings::JournalHoldings(std::span<const BiblioRecord> records) {
  for (const auto& r : records) {
    auto key = normalize_journal(r.journal_title);
    if (key.empty()) continue;
    auto& entry = journals_[key];
    if (entry.display.empty()) entry.display = trim(r.journal_title);
    ++entry.total;
    ++entry.by_year[r.publication_year];
  }
}

std::uint64_t JournalHoldings::stored_count(std::string_view journal) const {
  auto it = journals_.find(normalize_journal(journal));
  return it == journals_.end() ? 0 : it->second.total;
}

std::uint64_t JournalHoldings::stored_count(std::string_view journal,
                                            int year) const {
  auto it = journals_.find(normalize_journal(journal));
  if (it == journals_.end()) return 0;
  auto yit = it->second.by_year.find(year);
  return yit == it->second.by_year.end() ? 0 : yit->second;
}

std::vector<int> JournalHoldings::years(std::string_view journal) const {
  std::vector<int> out;
  auto it = journals_.find(normalize_journal(journal));
  if (it == journals_.end()) return out;
  for (const auto& [year, count] : it->second.by_year) out.push_back(year);
  return out;
}

std::string JournalHoldings::display_title(std::string_view journal) const {
  auto key = normalize_journal(journal);
  auto it = journals_.find(key);
  return it == journals_.end() ? key : it->second.display;
}

FactorResult make_factor(FactorKind kind, std::string journal_title,
                         const Period& period,
                         std::optional<int> publication_year,
                         std::uint64_t numerator, std::uint64_t denominator) {
  if (denominator == 0) {
    std::string what = "undefined factor: journal '" + journal_title +
                       "' has no stored articles";
    if (publication_year)
      what += " for publication year " + std::to_string(*publication_year);
    throw DataError(what);
  }
  FactorResult r;
  r.journal_title = std::move(journal_title);
  r.period = period;
  r.kind = kind;
  r.publication_year = publication_year;
  r.numerator = numerator;
  r.denominator = denominator;
  r.value = double(numerator) / double(denominator);
  return r;
}

FactorResult wuf(const Datastore& store, std::string_view journal,
                 const Period& period,
                 std::optional<std::uint64_t> stored_count) {
  return factor_impl(store, FactorKind::wuf, journal, period, std::nullopt,
                     stored_count);
}

FactorResult wuf_by_year(const Datastore& store, std::string_view journal,
                         const Period& period, int publication_year,
                         std::optional<std::uint64_t> stored_count) {
  return factor_impl(store, FactorKind::wuf, journal, period, publication_year,
                     stored_count);
}

FactorResult cof(const Datastore& store, std::string_view journal,
                 const Period& period,
                 std::optional<std::uint64_t> stored_count) {
  return factor_impl(store, FactorKind::cof, journal, period, std::nullopt,
                     stored_count);
}

FactorResult cof_by_year(const Datastore& store, std::string_view journal,
                         const Period& period, int publication_year,
                         std::optional<std::uint64_t> stored_count) {
  return factor_impl(store, FactorKind::cof, journal, period, publication_year,
                     stored_count);
}

std::vector<FactorResult> factor_table(const Datastore& store, FactorKind kind,
                                       const Period& period,
                                       const std::vector<std::string>& journals) {
  JournalHoldings holdings(store.biblio());
  std::map<std::string, std::uint64_t> counts;
  if (journals.empty()) {
    // one row per journal seen in events of the period
    for (const auto& e : store.enrich_events(event_kind(kind), period)) {
      if (!e.matched()) continue;
      auto key = normalize_journal(e.biblio->journal_title);
      if (key.empty()) continue;
      ++counts[key];
    }
  } else {
    for (const auto& j : journals) {
      auto key = normalize_journal(j);
      counts[key] = count_events(store, kind, key, period, std::nullopt);
    }
  }

  std::vector<FactorResult> rows;
  rows.reserve(counts.size());
  for (const auto& [key, numer] : counts) {
    auto denom = holdings.stored_count(key);
    FactorResult r;
    if (denom == 0) {
      // requested journal absent from holdings: report a zero row
      r.journal_title = holdings.display_title(key);
      r.period = period;
      r.kind = kind;
      r.numerator = numer;
      r.denominator = 0;
      r.value = 0.0;
    } else {
      r = make_factor(kind, holdings.display_title(key), period, std::nullopt,
                      numer, denom);
    }
    rows.push_back(std::move(r));
  }
  std::sort(rows.begin(), rows.end(),
            [](const FactorResult& a, const FactorResult& b) {
              if (a.numerator != b.numerator) return a.numerator > b.numerator;
              return a.journal_title < b.journal_title;
            });
  return rows;
}

std::vector<FactorResult> factor_by_year_table(const Datastore& store,
                                               FactorKind kind,
                                               std::string_view journal,
                                               const Period& period) {
  JournalHoldings holdings(store.biblio());
  std::vector<FactorResult> rows;
  for (int year : holdings.years(journal)) {
    rows.push_back(factor_impl(store, kind, journal, period, year,
                               std::nullopt));
  }
  return rows;
}

std::string render_csv(std::span<const FactorResult> rows,
                       std::optional<int> decimals) {
  std::string out = "rank,journal,count,factor\n";
  std::size_t rank = 1;
  for (const auto& row : rows) {
    int dec = decimals.value_or(factor_decimals(row.kind));
    out += csv_row({std::to_string(rank++), row.journal_title,
                    std::to_string(row.numerator),
                    format_fixed(round_decimals(row.value, dec), dec)});
  }
  return out;
}

}  // namespace miriad
