#include "miriad/stats_engine.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "miriad/errors.hpp"
#include "miriad/util.hpp"

namespace miriad {

namespace {

struct DimensionName {
  Dimension dim;
  std::string_view name;
};

constexpr DimensionName kDimensionNames[] = {
    {Dimension::tld, "tld"},
    {Dimension::country, "country"},
    {Dimension::title_word, "title_word"},
    {Dimension::author_in_query, "author_in_query"},
    {Dimension::keyword, "keyword"},
    {Dimension::record, "record"},
    {Dimension::scientific_domain, "scientific_domain"},
    {Dimension::publication_year, "publication_year"},
    {Dimension::author, "author"},
    {Dimension::author_country, "author_country"},
    {Dimension::journal, "journal"},
    {Dimension::publishing_country, "publishing_country"},
    {Dimension::customer_country, "customer_country"},
    {Dimension::customer_activity, "customer_activity"},
};

const std::vector<Dimension> kQueryDims = {
    Dimension::tld, Dimension::country, Dimension::title_word,
    Dimension::author_in_query, Dimension::keyword};

const std::vector<Dimension> kDisplayDims = {
    Dimension::tld,           Dimension::country,
    Dimension::record,        Dimension::journal,
    Dimension::publication_year, Dimension::author,
    Dimension::author_country,   Dimension::publishing_country,
    Dimension::scientific_domain};

const std::vector<Dimension> kOrderDims = {
    Dimension::customer_country, Dimension::customer_activity,
    Dimension::record,           Dimension::journal,
    Dimension::publication_year, Dimension::author,
    Dimension::author_country,   Dimension::publishing_country,
    Dimension::scientific_domain};

std::string scalar_or_none(const std::string& value) {
  return value.empty() ? std::string(kNoneKey) : value;
}

// one key per counted value; multi-valued fields explode
void query_keys(const QueryRecord& q, Dimension dim,
                std::vector<std::string>& out) {
  switch (dim) {
    case Dimension::tld:
      out.push_back(q.tld);
      break;
    case Dimension::country:
      out.push_back(q.country);
      break;
    case Dimension::title_word:
      for (const auto& w : q.title_words)
        for (const auto& token : split_values(to_lower(w), ' '))
          out.push_back(token);
      break;
    case Dimension::author_in_query:
      if (!q.author_query.empty()) out.push_back(q.author_query);
      break;
    case Dimension::keyword:
      for (const auto& k : q.keywords) out.push_back(k);
      break;
    default:
      break;
  }
}

void event_keys(const EnrichedEvent& e, Dimension dim,
                std::vector<std::string>& out) {
  switch (dim) {
    case Dimension::tld:
      out.push_back(e.tld);
      return;
    case Dimension::country:
    case Dimension::customer_country:
      out.push_back(e.country);
      return;
    case Dimension::customer_activity:
      out.emplace_back(activity_label(e.activity));
      return;
    case Dimension::record:
      out.push_back(e.record_id);
      return;
    default:
      break;
  }
  // bibliographic dimensions
  if (!e.matched()) {
    out.emplace_back(kUnmatchedKey);
    return;
  }
  const BiblioRecord& b = *e.biblio;
  switch (dim) {
    case Dimension::scientific_domain:
      out.push_back(scalar_or_none(b.scientific_domain));
      break;
    case Dimension::publication_year:
      out.push_back(std::to_string(b.publication_year));
      break;
    case Dimension::author:
      for (const auto& a : b.authors) out.push_back(a);
      break;
    case Dimension::author_country:
      for (const auto& c : b.author_countries) out.push_back(c);
      break;
    case Dimension::journal:
      out.push_back(scalar_or_none(b.journal_title));
      break;
    case Dimension::publishing_country:
      out.push_back(scalar_or_none(b.publishing_country));
      break;
    default:
      break;
  }
}

Distribution finalize(Dataset dataset, Dimension dimension,
                      const Period& period,
                      std::unordered_map<std::string, std::uint64_t>&& counts) {
  Distribution dist;
  dist.dataset = dataset;
  dist.dimension = dimension;
  dist.period = period;
  dist.rows.reserve(counts.size());
  for (auto& [key, count] : counts) {
    dist.rows.push_back({key, count, 0.0});
    dist.total += count;
  }
  std::sort(dist.rows.begin(), dist.rows.end(),
            [](const DistributionRow& a, const DistributionRow& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.key < b.key;
            });
  if (dist.total > 0) {
    for (auto& row : dist.rows)
      row.percent = round_decimals(
          100.0 * double(row.count) / double(dist.total), 2);
  }
  return dist;
}

}  // namespace

std::string_view to_string(Dataset d) {
  switch (d) {
    case Dataset::query: return "query";
    case Dataset::display: return "display";
    case Dataset::order: return "order";
  }
  return "?";
}

std::string_view to_string(Dimension d) {
  for (const auto& n : kDimensionNames)
    if (n.dim == d) return n.name;
  return "?";
}

std::optional<Dataset> parse_dataset(std::string_view name) {
  if (name == "query") return Dataset::query;
  if (name == "display") return Dataset::display;
  if (name == "order") return Dataset::order;
  return std::nullopt;
}

std::optional<Dimension> parse_dimension(std::string_view name) {
  for (const auto& n : kDimensionNames)
    if (n.name == name) return n.dim;
  return std::nullopt;
}

std::vector<Dimension> dimensions_for(Dataset dataset) {
  switch (dataset) {
    case Dataset::query: return kQueryDims;
    case Dataset::display: return kDisplayDims;
    case Dataset::order: return kOrderDims;
  }
  return {};
}

bool dimension_valid(Dataset dataset, Dimension dimension) {
  auto dims = dimensions_for(dataset);
  return std::find(dims.begin(), dims.end(), dimension) != dims.end();
}

Distribution distribution_from_counts(
    Dataset dataset, Dimension dimension, const Period& period,
    const std::vector<std::pair<std::string, std::uint64_t>>& counts) {
  std::unordered_map<std::string, std::uint64_t> merged;
  for (const auto& [key, count] : counts) merged[key] += count;
  return finalize(dataset, dimension, period, std::move(merged));
}

Distribution distribution(const Datastore& store, Dataset dataset,
                          Dimension dimension, const Period& period) {
  if (!dimension_valid(dataset, dimension))
    throw ArgumentError("dimension '" + std::string(to_string(dimension)) +
                        "' is not defined for dataset '" +
                        std::string(to_string(dataset)) + "'");
  std::unordered_map<std::string, std::uint64_t> counts;
  std::vector<std::string> keys;
  if (dataset == Dataset::query) {
    for (const auto& q : store.select_queries(period)) {
      keys.clear();
      query_keys(q, dimension, keys);
      for (const auto& k : keys) ++counts[k];
    }
  } else {
    auto kind =
        dataset == Dataset::display ? EventKind::display : EventKind::order;
    for (const auto& e : store.enrich_events(kind, period)) {
      keys.clear();
      event_keys(e, dimension, keys);
      for (const auto& k : keys) ++counts[k];
    }
  }
  return finalize(dataset, dimension, period, std::move(counts));
}

Distribution top_n(const Distribution& dist, std::size_t n) {
  if (n < 1) throw ArgumentError("top_n requires n >= 1");
  Distribution out = dist;
  if (out.rows.size() > n) out.rows.resize(n);
  return out;
}

std::vector<StatReport> precompute(const Datastore& store, Periodicity p,
                                   const Period& range,
                                   std::optional<Timestamp> generated_at) {
  std::vector<StatReport> reports;
  for (const auto& slot : split_periods(range, p)) {
    StatReport report;
    report.periodicity = p;
    report.start = slot.begin;
    report.period = slot;
    report.generated_at = generated_at.value_or(slot.end);
    for (Dataset dataset : {Dataset::query, Dataset::display, Dataset::order})
      for (Dimension dim : dimensions_for(dataset))
        report.distributions.push_back(
            distribution(store, dataset, dim, slot));
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<std::filesystem::path> write_stat_reports(
    const Datastore& store, std::span<const StatReport> reports) {
  std::vector<std::filesystem::path> written;
  std::filesystem::create_directories(store.stat_dir());
  for (const auto& report : reports) {
    auto name = std::string(to_string(report.periodicity)) + "-" +
                format_date(report.start) + ".json";
    auto path = store.stat_dir() / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write stat report: " + path.string());
    nlohmann::json j = report;
    out << j.dump(2) << '\n';
    written.push_back(path);
  }
  return written;
}

std::string render_csv(const Distribution& dist) {
  std::string out = "rank,key,count,percent\n";
  std::size_t rank = 1;
  for (const auto& row : dist.rows) {
    out += csv_row({std::to_string(rank++), row.key,
                    std::to_string(row.count),
                    format_fixed(row.percent, 2)});
  }
  return out;
}

void to_json(nlohmann::json& j, const Distribution& d) {
  auto rows = nlohmann::json::array();
  for (const auto& row : d.rows)
    rows.push_back({{"key", row.key},
                    {"count", row.count},
                    {"percent", row.percent}});
  j = nlohmann::json{{"dataset", std::string(to_string(d.dataset))},
                     {"dimension", std::string(to_string(d.dimension))},
                     {"from", format_timestamp(d.period.begin)},
                     {"to", format_timestamp(d.period.end)},
                     {"total", d.total},
                     {"rows", rows}};
}

void to_json(nlohmann::json& j, const StatReport& r) {
  j = nlohmann::json{{"periodicity", std::string(to_string(r.periodicity))},
                     {"start", format_timestamp(r.start)},
                     {"from", format_timestamp(r.period.begin)},
                     {"to", format_timestamp(r.period.end)},
                     {"generated_at", format_timestamp(r.generated_at)},
                     {"distributions", r.distributions}};
}

}  // namespace miriad
