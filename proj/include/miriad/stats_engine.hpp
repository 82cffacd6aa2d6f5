#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "miriad/datastore.hpp"
#include "miriad/time.hpp"

namespace miriad {

enum class Dataset { query, display, order };

enum class Dimension {
  tld,
  country,
  title_word,
  author_in_query,
  keyword,
  record,
  scientific_domain,
  publication_year,
  author,
  author_country,
  journal,
  publishing_country,
  customer_country,
  customer_activity,
};

std::string_view to_string(Dataset d);
std::string_view to_string(Dimension d);
std::optional<Dataset> parse_dataset(std::string_view name);
std::optional<Dimension> parse_dimension(std::string_view name);

// Which dimensions make sense for which event stream.
bool dimension_valid(Dataset dataset, Dimension dimension);
std::vector<Dimension> dimensions_for(Dataset dataset);

// Key used when a display/order event has no bibliographic match.
inline constexpr const char* kUnmatchedKey = "(unmatched)";
// Key used when a matched record leaves a scalar field empty.
inline constexpr const char* kNoneKey = "(none)";

struct DistributionRow {
  std::string key;
  std::uint64_t count = 0;
  double percent = 0.0;  // round(100*count/total, 2)
};

// A group-by count over one dimension. Rows are sorted by count descending,
// ties by key ascending; total is the sum of counts (multi-valued fields
// contribute once per value, so it can exceed the event count). Percents are
// rounded per row and need not sum to exactly 100.
struct Distribution {
  Dataset dataset = Dataset::query;
  Dimension dimension = Dimension::tld;
  Period period;
  std::vector<DistributionRow> rows;
  std::uint64_t total = 0;
};

// Builds a distribution from externally supplied counts, applying the same
// ordering and percent rules as the group-by path. Duplicate keys add up.
Distribution distribution_from_counts(
    Dataset dataset, Dimension dimension, const Period& period,
    const std::vector<std::pair<std::string, std::uint64_t>>& counts);

// Exact group-by count over select(store, period). Dimensions that need
// bibliographic fields count unmatched events under "(unmatched)".
// Throws ArgumentError for an invalid dataset/dimension pair.
Distribution distribution(const Datastore& store, Dataset dataset,
                          Dimension dimension, const Period& period);

// First n rows by the standing sort order; total is unchanged. n >= 1.
Distribution top_n(const Distribution& dist, std::size_t n);

struct StatReport {
  Periodicity periodicity = Periodicity::month;
  Timestamp start{};
  Period period;
  std::vector<Distribution> distributions;
  // deterministic by default (the period end) so re-runs write identical
  // bytes; pass a wall-clock time to record real generation times
  Timestamp generated_at{};
};

// One report per slot of the aligned range, each holding every valid
// dataset x dimension distribution. Re-running is deterministic.
std::vector<StatReport> precompute(const Datastore& store, Periodicity p,
                                   const Period& range,
                                   std::optional<Timestamp> generated_at = {});

// Writes reports into the store's stat/ directory, one JSON document each,
// named <periodicity>-<start date>.json. Re-running overwrites identically.
std::vector<std::filesystem::path> write_stat_reports(
    const Datastore& store, std::span<const StatReport> reports);

// Table layout: rank,key,count,percent.
std::string render_csv(const Distribution& dist);

void to_json(nlohmann::json& j, const Distribution& d);
void to_json(nlohmann::json& j, const StatReport& r);

}  // namespace miriad
