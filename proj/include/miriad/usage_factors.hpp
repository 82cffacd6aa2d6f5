#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "miriad/datastore.hpp"
#include "miriad/records.hpp"
#include "miriad/time.hpp"

namespace miriad {

enum class FactorKind { wuf, cof };

std::string_view to_string(FactorKind kind);
std::optional<FactorKind> parse_factor_kind(std::string_view name);

// decimal places used when rendering factor tables (wuf: 2, cof: 3)
int factor_decimals(FactorKind kind);

// trimmed + ASCII-lowercased; journal matching is exact on this form
std::string normalize_journal(std::string_view title);

struct FactorResult {
  std::string journal_title;
  Period period;
  FactorKind kind = FactorKind::wuf;
  std::optional<int> publication_year;
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;
  double value = 0.0;
};

// stored-article counts per journal (and per publication year), from BIBLIO
class JournalHoldings {
 public:
  JournalHoldings() = default;
  explicit JournalHoldings(std::span<const BiblioRecord> records);

  std::uint64_t stored_count(std::string_view journal) const;
  std::uint64_t stored_count(std::string_view journal, int year) const;
  // publication years with at least one stored article, ascending
  std::vector<int> years(std::string_view journal) const;
  // original-casing title as first stored; normalized input if unknown
  std::string display_title(std::string_view journal) const;

 private:
  struct Entry {
    std::string display;
    std::uint64_t total = 0;
    std::map<int, std::uint64_t> by_year;
  };
  std::map<std::string, Entry> journals_;
};

// pure form: validates denominator > 0 and computes the ratio
FactorResult make_factor(FactorKind kind, std::string journal_title,
                         const Period& period,
                         std::optional<int> publication_year,
                         std::uint64_t numerator, std::uint64_t denominator);

FactorResult wuf(const Datastore& store, std::string_view journal,
                 const Period& period,
                 std::optional<std::uint64_t> stored_count = {});
FactorResult wuf_by_year(const Datastore& store, std::string_view journal,
                         const Period& period, int publication_year,
                         std::optional<std::uint64_t> stored_count = {});
FactorResult cof(const Datastore& store, std::string_view journal,
                 const Period& period,
                 std::optional<std::uint64_t> stored_count = {});
FactorResult cof_by_year(const Datastore& store, std::string_view journal,
                         const Period& period, int publication_year,
                         std::optional<std::uint64_t> stored_count = {});

// one row per journal with >= 1 event, or per requested journal;
// sorted numerator descending, then journal ascending
std::vector<FactorResult> factor_table(
    const Datastore& store, FactorKind kind, const Period& period,
    const std::vector<std::string>& journals = {});

// one row per stored publication year of the journal, year ascending
std::vector<FactorResult> factor_by_year_table(const Datastore& store,
                                               FactorKind kind,
                                               std::string_view journal,
                                               const Period& period);

// "rank,journal,count,factor"; decimals defaults per kind of each row
std::string render_csv(std::span<const FactorResult> rows,
                       std::optional<int> decimals = {});

}  // namespace miriad
