// Acceptance harness: eight end-to-end checks over the analysis pipeline,
// one PASS/FAIL line each. Where reference outputs cannot exist (the original
// logs are private), checks are arithmetic identities, independent oracles,
// and structural properties. Tolerances are pinned here, next to their use.
//
// Usage: miriad_acceptance [path-to-cli-binary]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "miriad/clusterer.hpp"
#include "miriad/cousage.hpp"
#include "miriad/datastore.hpp"
#include "miriad/errors.hpp"
#include "miriad/fixture.hpp"
#include "miriad/log_ingest.hpp"
#include "miriad/rng.hpp"
#include "miriad/stats_engine.hpp"
#include "miriad/strategic_map.hpp"
#include "miriad/time.hpp"
#include "miriad/usage_factors.hpp"
#include "miriad/util.hpp"
#include "common.hpp"

std::string g_cli_path;  // consumed by run_cli in common.hpp

namespace {

using namespace miriad;

constexpr double kPercentTol = 0.05 + 1e-9;  // one-decimal reference values
constexpr double kOracleTol = 1e-9;          // co-usage math vs brute force
constexpr double kMetricTol = 1e-12;         // metric recomputation

int failures = 0;

void criterion(int number, const std::string& name, double budget_seconds,
               const std::function<std::string()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  std::string detail;
  try {
    detail = body();
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (detail.empty() && elapsed > budget_seconds) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "took %.1fs, budget %.0fs", elapsed,
                  budget_seconds);
    detail = buf;
  }
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.2fs", elapsed);
  if (detail.empty()) {
    std::printf("PASS %d %s (%s)\n", number, name.c_str(), timing);
  } else {
    std::printf("FAIL %d %s (%s): %s\n", number, name.c_str(), timing,
                detail.c_str());
    ++failures;
  }
  std::fflush(stdout);
}

Timestamp ts(const char* text) { return *parse_timestamp(text); }

Period year_2002() {
  return {ts("2002-01-01 00:00:00"), ts("2003-01-01 00:00:00")};
}

// ---- 1: arithmetic consistency on the reference count tables ---------------

std::string check_reference_tables() {
  // customer-activity mix: counts against their one-decimal percentages
  const std::vector<std::pair<std::string, std::uint64_t>> activity = {
      {"higher-education", 38333}, {"research-institution", 20070},
      {"commercial-firm", 8996},   {"information-center", 1625},
      {"private-person", 769},     {"hospital", 736},
      {"other", 679},
  };
  const double expected[] = {53.8, 28.2, 12.6, 2.3, 1.1, 1.0, 0.9};
  auto dist = distribution_from_counts(
      Dataset::order, Dimension::customer_activity, year_2002(), activity);
  if (dist.total != 71208) return "activity total != 71208";
  for (std::size_t i = 0; i < dist.rows.size(); ++i) {
    if (std::fabs(dist.rows[i].percent - expected[i]) > kPercentTol) {
      std::ostringstream why;
      why << dist.rows[i].key << ": " << dist.rows[i].percent << " vs "
          << expected[i];
      return why.str();
    }
  }

  auto w = make_factor(FactorKind::wuf, "Macromolecules", year_2002(), {},
                       3086, 19288);
  if (format_fixed(round_decimals(w.value, 2), 2) != "0.16")
    return "display factor for 3086/19288 is not 0.16";
  auto c = make_factor(FactorKind::cof, "Journal of applied polymer science",
                       year_2002(), {}, 366, 16636);
  if (format_fixed(round_decimals(c.value, 3), 3) != "0.022")
    return "order factor for 366/16636 is not 0.022";
  return "";
}

// ---- 2: distributions against a filter-and-count oracle --------------------

struct OracleEvent {
  Timestamp when{};
  std::string tld;
  std::string country;
  std::string activity;  // label
  std::string record_id;
  const BiblioRecord* bib = nullptr;
};

using Counts = std::map<std::string, std::uint64_t>;

void oracle_add_query(Counts& counts, const QueryRecord& q, Dimension dim) {
  switch (dim) {
    case Dimension::tld: ++counts[q.tld]; break;
    case Dimension::country: ++counts[q.country]; break;
    case Dimension::title_word:
      for (const auto& w : q.title_words) {
        std::string lowered = to_lower(w);
        std::istringstream words(lowered);
        std::string token;
        while (words >> token) ++counts[token];
      }
      break;
    case Dimension::author_in_query:
      if (!q.author_query.empty()) ++counts[q.author_query];
      break;
    case Dimension::keyword:
      for (const auto& k : q.keywords) ++counts[k];
      break;
    default: break;
  }
}

void oracle_add_event(Counts& counts, const OracleEvent& e, Dimension dim) {
  switch (dim) {
    case Dimension::tld: ++counts[e.tld]; return;
    case Dimension::country:
    case Dimension::customer_country: ++counts[e.country]; return;
    case Dimension::customer_activity: ++counts[e.activity]; return;
    case Dimension::record: ++counts[e.record_id]; return;
    default: break;
  }
  if (!e.bib) {
    ++counts["(unmatched)"];
    return;
  }
  switch (dim) {
    case Dimension::scientific_domain:
      ++counts[e.bib->scientific_domain.empty() ? "(none)"
                                                : e.bib->scientific_domain];
      break;
    case Dimension::publication_year:
      ++counts[std::to_string(e.bib->publication_year)];
      break;
    case Dimension::author:
      for (const auto& a : e.bib->authors) ++counts[a];
      break;
    case Dimension::author_country:
      for (const auto& c : e.bib->author_countries) ++counts[c];
      break;
    case Dimension::journal:
      ++counts[e.bib->journal_title.empty() ? "(none)" : e.bib->journal_title];
      break;
    case Dimension::publishing_country:
      ++counts[e.bib->publishing_country.empty() ? "(none)"
                                                 : e.bib->publishing_country];
      break;
    default: break;
  }
}

Counts to_counts(const Distribution& dist) {
  Counts out;
  for (const auto& row : dist.rows) out[row.key] = row.count;
  return out;
}

std::string diff_counts(const std::string& what, const Counts& got,
                        const Counts& want) {
  if (got == want) return "";
  for (const auto& [key, count] : want) {
    auto it = got.find(key);
    if (it == got.end())
      return what + ": missing key '" + key + "'";
    if (it->second != count)
      return what + ": key '" + key + "' is " + std::to_string(it->second) +
             ", oracle says " + std::to_string(count);
  }
  for (const auto& [key, count] : got)
    if (!want.count(key)) return what + ": extra key '" + key + "'";
  return what + ": count maps differ";
}

std::string check_distributions_oracle() {
  TempDir work("acceptance-stats");
  FixtureSpec spec;
  spec.seed = 7;
  spec.communities = {{5, 8}, {5, 8}};
  spec.cross_community_orders = 40;
  spec.query_events = 4000;
  spec.display_events = 3500;
  spec.order_events = 2100;
  spec.background_documents = 30;
  spec.background_customers = 12;
  auto files = generate_fixture(spec, work / "fixture");

  std::ifstream log_in(files.log);
  auto log = parse_log(log_in, TldTable::builtin());
  if (!log.errors.empty()) return "fixture log has parse errors";
  std::size_t events = log.record_count();
  if (events < 9800) return "fixture smaller than advertised";

  TempDir store_dir("acceptance-stats-store");
  Datastore store(store_dir.path());
  store.import_queries(log.queries);
  store.import_displays(log.displays);
  store.import_orders(log.orders);

  std::vector<BiblioRecord> refs;
  {
    std::ifstream in(files.biblio);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty())
        refs.push_back(nlohmann::json::parse(line).get<BiblioRecord>());
  }
  store.import_biblio(refs);
  store.import_customers_file(files.customers);

  // the oracle joins and fills attributes on its own, from the raw files
  std::map<std::string, const BiblioRecord*> by_id;
  for (const auto& b : refs) by_id[b.record_id] = &b;
  std::map<std::string, std::pair<std::string, std::string>> customer_rows;
  {
    std::ifstream in(files.customers);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto first = line.find(',');
      auto second = line.find(',', first + 1);
      std::string country =
          to_upper(trim(line.substr(first + 1, second - first - 1)));
      if (country.empty()) country = kUnknownCountry;
      auto activity = parse_activity(trim(line.substr(second + 1)));
      customer_rows[std::string(trim(line.substr(0, first)))] = {
          country, std::string(activity_label(
                       activity.value_or(CustomerActivity::other)))};
    }
  }

  std::vector<OracleEvent> shown, bought;
  for (const auto& d : log.displays) {
    OracleEvent e;
    e.when = d.timestamp;
    e.tld = d.tld;
    e.country = d.country;
    e.record_id = d.record_id;
    auto it = by_id.find(d.record_id);
    e.bib = it == by_id.end() ? nullptr : it->second;
    shown.push_back(e);
  }
  for (const auto& o : log.orders) {
    OracleEvent e;
    e.when = o.timestamp;
    e.country = o.customer_country;
    e.activity = std::string(activity_label(o.customer_activity));
    auto row = customer_rows.find(o.customer_id);
    if (row != customer_rows.end()) {
      if (e.country == "UNKNOWN") e.country = row->second.first;
      if (e.activity == "other") e.activity = row->second.second;
    }
    e.record_id = o.record_id;
    auto it = by_id.find(o.record_id);
    e.bib = it == by_id.end() ? nullptr : it->second;
    bought.push_back(e);
  }

  auto whole = year_2002();
  auto months = split_periods(whole, Periodicity::month);

  for (auto dataset : {Dataset::query, Dataset::display, Dataset::order}) {
    for (auto dim : dimensions_for(dataset)) {
      Counts want;
      std::uint64_t want_total = 0;
      if (dataset == Dataset::query) {
        for (const auto& q : log.queries)
          if (whole.contains(q.timestamp)) oracle_add_query(want, q, dim);
      } else {
        const auto& events_list = dataset == Dataset::display ? shown : bought;
        for (const auto& e : events_list)
          if (whole.contains(e.when)) oracle_add_event(want, e, dim);
      }
      for (const auto& [key, count] : want) want_total += count;

      auto dist = distribution(store, dataset, dim, whole);
      std::string tag = std::string(to_string(dataset)) + "/" +
                        std::string(to_string(dim));
      auto mismatch = diff_counts(tag, to_counts(dist), want);
      if (!mismatch.empty()) return mismatch;
      if (dist.total != want_total) return tag + ": totals differ";

      // monthly slices must partition the year exactly
      Counts merged;
      std::uint64_t merged_total = 0;
      for (const auto& slot : months) {
        auto part = distribution(store, dataset, dim, slot);
        for (const auto& row : part.rows) merged[row.key] += row.count;
        merged_total += part.total;
      }
      if (merged != to_counts(dist) || merged_total != dist.total)
        return tag + ": monthly slices do not partition the year";
    }
  }
  return "";
}

// ---- 3: co-usage math against a quadratic oracle ---------------------------

std::string check_cousage_oracle() {
  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    TransactionSet t;
    auto users = 3 + rng.below(40);
    auto pool = 3 + rng.below(48);  // distinct documents, at most 50
    for (std::uint64_t u = 0; u < users; ++u) {
      std::set<std::string> docs;
      auto n = 1 + rng.below(8);
      for (std::uint64_t k = 0; k < n; ++k)
        docs.insert("d" + std::to_string(rng.below(pool)));
      t.users["u" + std::to_string(u)] = docs;
    }

    for (auto kind : {MatrixKind::document, MatrixKind::user}) {
      auto cooc = cooccurrence(t, kind);
      auto assoc = equivalence(cooc);
      auto n = std::uint32_t(assoc.items.size());
      if (n > 50) return "item universe larger than intended";

      for (std::uint32_t i = 0; i < n; ++i) {
        // occurrences straight from the definition
        std::uint64_t oi = 0;
        if (kind == MatrixKind::document) {
          for (const auto& [user, docs] : t.users)
            oi += docs.count(assoc.items[i]);
        } else {
          oi = t.users.at(assoc.items[i]).size();
        }
        if (oi != cooc.occurrences[i])
          return "occurrence count differs from oracle";

        for (std::uint32_t j = i + 1; j < n; ++j) {
          std::uint64_t cij = 0;
          if (kind == MatrixKind::document) {
            for (const auto& [user, docs] : t.users)
              if (docs.count(assoc.items[i]) && docs.count(assoc.items[j]))
                ++cij;
          } else {
            for (const auto& doc : t.users.at(assoc.items[i]))
              cij += t.users.at(assoc.items[j]).count(doc);
          }
          if (cij != cooc.count(i, j))
            return "pair count differs from oracle";
          std::uint64_t oj = cooc.occurrences[j];
          double want =
              cij == 0 ? 0.0
                       : double(cij) * double(cij) / (double(oi) * double(oj));
          double got = assoc.value(i, j);
          if (std::fabs(got - want) > kOracleTol)
            return "equivalence differs from oracle";
          if (got < 0.0 || got > 1.0) return "equivalence out of [0,1]";
          if (assoc.value(j, i) != got) return "equivalence not symmetric";
        }
      }
    }
  }
  return "";
}

// ---- 4 and 5: clustering properties and metric recomputation ---------------

AssociationMatrix random_assoc(Rng& rng, std::size_t n, double edge_p) {
  AssociationMatrix m;
  for (std::size_t i = 0; i < n; ++i) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "i%03zu", i);
    m.items.push_back(buf);
  }
  m.occurrences.assign(n, 1);
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (rng.chance(edge_p))
        m.values[{i, j}] = double(1 + rng.below(1000)) / 1000.0;
  return m;
}

std::string connected(const Cluster& c) {
  std::map<std::string, std::vector<std::string>> adjacent;
  for (const auto& a : c.internal_associations) {
    adjacent[a.a].push_back(a.b);
    adjacent[a.b].push_back(a.a);
  }
  std::set<std::string> seen;
  std::deque<std::string> queue{c.internal_items.front()};
  seen.insert(c.internal_items.front());
  while (!queue.empty()) {
    auto item = queue.front();
    queue.pop_front();
    for (const auto& next : adjacent[item])
      if (seen.insert(next).second) queue.push_back(next);
  }
  for (const auto& item : c.internal_items)
    if (!seen.count(item)) return "cluster " + std::to_string(c.id) +
                                  " is not single-link connected";
  return "";
}

// Runs 200 seeded clusterings and hands each one to `check`; both criterion
// 4 and criterion 5 fold over the same sequence independently.
std::string seeded_runs(
    const std::function<std::string(const AssociationMatrix&,
                                    const ClusterParams&, const ClusterResult&,
                                    Rng&)>& check) {
  Rng rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    auto n = 6 + rng.below(30);
    auto m = random_assoc(rng, n, 0.1 + 0.01 * double(rng.below(15)));
    ClusterParams p;
    p.min_cluster_size = 2 + rng.below(3);
    p.max_cluster_size = p.min_cluster_size + rng.below(8);
    p.max_internal_associations = 1 + rng.below(30);
    const double floors[] = {0.0, 0.2, 0.5};
    p.association_floor = floors[rng.below(3)];
    auto r = cluster(m, p);
    auto trouble = check(m, p, r, rng);
    if (!trouble.empty())
      return "trial " + std::to_string(trial) + ": " + trouble;
  }
  return "";
}

std::string cluster_properties(const AssociationMatrix& m,
                               const ClusterParams& p, const ClusterResult& r,
                               Rng& rng) {
  std::set<std::string> all_internal;
  for (const auto& c : r.clusters) {
    if (c.size() < p.min_cluster_size || c.size() > p.max_cluster_size)
      return "cluster size out of bounds";
    if (c.internal_associations.size() > p.max_internal_associations)
      return "association budget exceeded";
    if (c.internal_associations.empty()) return "cluster with no associations";
    auto broken = connected(c);
    if (!broken.empty()) return broken;
    for (const auto& item : c.internal_items)
      if (!all_internal.insert(item).second) return "clusters overlap";

    double total = double(c.internal_associations.size() +
                          c.external_associations.size());
    double ksum = 0.0;
    double internal_mass = 0.0;
    for (const auto& [item, w] : c.item_weights) {
      if (!(w > 0.0) || w > 1.0) return "item weight out of (0,1]";
      ksum += w * total;
      if (c.contains(item)) internal_mass += w;
    }
    if (std::fabs(ksum - 2.0 * total) > 1e-9 * std::max(1.0, total))
      return "k-sum identity broken";

    // relevance over random source units
    std::map<std::string, std::set<std::string>> units;
    for (int u = 0; u < 5; ++u) {
      std::set<std::string> unit;
      auto picks = 1 + rng.below(6);
      for (std::uint64_t k = 0; k < picks; ++k)
        unit.insert(m.items[std::size_t(rng.below(m.items.size()))]);
      units["unit" + std::to_string(u)] = unit;
    }
    for (const auto& row : relevance(c, units)) {
      if (!(row.r > 0.0)) return "relevance not positive";
      double bound = internal_mass / double(row.total);
      if (row.r > bound + kMetricTol) return "relevance above its bound";
    }
  }
  for (const auto& item : r.unclustered)
    if (all_internal.count(item)) return "unclustered item inside a cluster";
  if (all_internal.size() + r.unclustered.size() != m.items.size())
    return "items lost or duplicated";
  return "";
}

std::string check_clustering_properties() {
  auto trouble = seeded_runs(cluster_properties);
  if (!trouble.empty()) return trouble;

  // planted two-block recovery
  AssociationMatrix planted;
  planted.items = {"a1", "a2", "a3", "a4", "b1", "b2", "b3", "b4"};
  planted.occurrences.assign(8, 1);
  for (std::uint32_t i = 0; i < 4; ++i)
    for (std::uint32_t j = i + 1; j < 4; ++j) {
      planted.values[{i, j}] = 0.9;
      planted.values[{i + 4, j + 4}] = 0.8;
    }
  planted.values[{0, 4}] = 0.05;
  auto blocks = cluster(planted, ClusterParams{3, 10, 20, 0.1});
  if (blocks.clusters.size() != 2) return "planted blocks not recovered";
  std::set<std::string> left(blocks.clusters[0].internal_items.begin(),
                             blocks.clusters[0].internal_items.end());
  std::set<std::string> right(blocks.clusters[1].internal_items.begin(),
                              blocks.clusters[1].internal_items.end());
  if (left != std::set<std::string>{"a1", "a2", "a3", "a4"} ||
      right != std::set<std::string>{"b1", "b2", "b3", "b4"})
    return "planted block membership wrong";

  // unconstrained runs equal a reference single-link clustering: the
  // connected components of the pairs-at-or-above-the-floor graph
  Rng ref_rng(203);
  for (int trial = 0; trial < 30; ++trial) {
    auto n = 5 + ref_rng.below(16);  // at most 20 items
    auto m = random_assoc(ref_rng, n, 0.15);
    double floor = 0.3;
    ClusterParams p;
    p.min_cluster_size = 2;
    p.max_cluster_size = m.items.size();
    p.max_internal_associations = m.values.size() + 1;
    p.association_floor = floor;
    auto r = cluster(m, p);

    std::map<std::string, std::string> parent;
    for (const auto& i : m.items) parent[i] = i;
    std::function<std::string(std::string)> find = [&](std::string x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (const auto& [key, e] : m.values)
      if (e >= floor)
        parent[find(m.items[key.first])] = find(m.items[key.second]);
    std::map<std::string, std::set<std::string>> components;
    for (const auto& i : m.items) components[find(i)].insert(i);
    std::vector<std::set<std::string>> want;
    for (auto& [root, members] : components)
      if (members.size() >= 2) want.push_back(std::move(members));
    std::vector<std::set<std::string>> got;
    for (const auto& c : r.clusters)
      got.push_back({c.internal_items.begin(), c.internal_items.end()});
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    if (got != want) return "unconstrained run differs from reference";
  }
  return "";
}

std::string check_metric_recomputation() {
  auto trouble = seeded_runs([](const AssociationMatrix&, const ClusterParams&,
                                const ClusterResult& r, Rng&) -> std::string {
    for (const auto& c : r.clusters) {
      double density = 0.0;
      for (const auto& a : c.internal_associations) density += a.e;
      density /= double(c.internal_associations.size());
      double centrality = 0.0;
      if (!c.external_associations.empty()) {
        for (const auto& a : c.external_associations) centrality += a.e;
        centrality /= double(c.external_associations.size());
      }
      if (std::fabs(c.density - density) > kMetricTol)
        return "density does not recompute";
      if (std::fabs(c.centrality - centrality) > kMetricTol)
        return "centrality does not recompute";
      if (std::fabs(c.structural - centrality / density) > kMetricTol)
        return "structural index does not recompute";
    }
    return "";
  });
  if (!trouble.empty()) return trouble;

  // isolated clusters: no external association, centrality exactly zero
  AssociationMatrix m;
  m.items = {"x1", "x2", "x3", "y1", "y2", "y3"};
  m.occurrences.assign(6, 1);
  m.values[{0, 1}] = 0.7;
  m.values[{1, 2}] = 0.6;
  m.values[{3, 4}] = 0.9;
  m.values[{4, 5}] = 0.8;
  auto r = cluster(m, ClusterParams{3, 10, 20, 0.0});
  if (r.clusters.size() != 2) return "expected two isolated clusters";
  for (const auto& c : r.clusters) {
    if (!c.external_associations.empty())
      return "isolated cluster has external associations";
    if (c.centrality != 0.0) return "isolated centrality not exactly zero";
    if (c.structural != 0.0) return "isolated structural not exactly zero";
  }
  return "";
}

// ---- 6: factor partition over publication years -----------------------------

std::string check_factor_partition() {
  TempDir dir("acceptance-factors");
  Datastore store(dir.path());

  const char* journals[] = {"Alpha", "Beta", "Gamma", "Delta", "Epsilon"};
  std::vector<BiblioRecord> refs;
  int id = 1;
  for (const auto* journal : journals)
    for (int year = 1999; year <= 2002; ++year)
      for (int k = 0; k < 1 + (id % 3); ++k) {
        BiblioRecord b;
        b.record_id = std::to_string(id++);
        b.title = "T";
        b.authors = {"A"};
        b.journal_title = journal;
        b.publication_year = year;
        b.publishing_country = "FR";
        b.scientific_domain = "d";
        b.document_type = "article";
        refs.push_back(b);
      }
  store.import_biblio(refs);

  std::vector<DisplayRecord> shows;
  std::vector<OrderRecord> carts;
  Rng rng(55);
  Timestamp clock = ts("2002-01-01 08:00:00");
  for (const auto& b : refs) {
    for (std::uint64_t k = 0; k < 1 + rng.below(4); ++k) {
      DisplayRecord d;
      d.timestamp = clock;
      clock += std::chrono::seconds{61};
      d.user_id = "u" + std::to_string(rng.below(9));
      d.tld = "fr";
      d.country = "FR";
      d.record_id = b.record_id;
      shows.push_back(d);
    }
    for (std::uint64_t k = 0; k < rng.below(3); ++k) {
      OrderRecord o;
      o.timestamp = clock;
      clock += std::chrono::seconds{61};
      o.customer_id = "c" + std::to_string(rng.below(5));
      o.record_id = b.record_id;
      carts.push_back(o);
    }
  }
  store.import_displays(shows);
  store.import_orders(carts);

  JournalHoldings holdings(refs);
  for (const auto* journal : journals) {
    for (auto kind : {FactorKind::wuf, FactorKind::cof}) {
      auto whole = kind == FactorKind::wuf
                       ? wuf(store, journal, year_2002())
                       : cof(store, journal, year_2002());
      std::uint64_t numerators = 0, denominators = 0;
      auto years = holdings.years(journal);
      if (years.size() != 4) return "expected four publication years";
      for (int year : years) {
        auto slice = kind == FactorKind::wuf
                         ? wuf_by_year(store, journal, year_2002(), year)
                         : cof_by_year(store, journal, year_2002(), year);
        numerators += slice.numerator;
        denominators += slice.denominator;
      }
      if (numerators != whole.numerator)
        return std::string(journal) + ": year numerators do not add up";
      if (denominators != whole.denominator)
        return std::string(journal) + ": year denominators do not add up";
    }
  }
  return "";
}

// ---- 7: strategic map types and output stability ----------------------------

std::string svg_grammar(const std::string& svg) {
  if (svg.rfind("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n", 0) != 0)
    return "svg missing xml prologue";
  if (svg.size() < 8 || svg.substr(svg.size() - 7) != "</svg>\n")
    return "svg not closed";
  if (std::count(svg.begin(), svg.end(), '<') !=
      std::count(svg.begin(), svg.end(), '>'))
    return "svg brackets unbalanced";
  if (std::count(svg.begin(), svg.end(), '"') % 2 != 0)
    return "svg quotes unbalanced";
  return "";
}

std::string dot_grammar(const std::string& dot) {
  if (dot.rfind("graph ", 0) != 0) return "dot missing graph header";
  if (dot.substr(dot.size() - 2) != "}\n") return "dot not closed";
  if (std::count(dot.begin(), dot.end(), '{') !=
      std::count(dot.begin(), dot.end(), '}'))
    return "dot braces unbalanced";
  if (std::count(dot.begin(), dot.end(), '"') % 2 != 0)
    return "dot quotes unbalanced";
  return "";
}

std::string check_map() {
  // clusters with a real boundary so the map has edges
  AssociationMatrix m;
  m.items = {"a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3"};
  m.occurrences.assign(9, 1);
  auto link = [&](std::uint32_t i, std::uint32_t j, double e) {
    m.values[{i, j}] = e;
  };
  link(0, 1, 0.9); link(0, 2, 0.85); link(1, 2, 0.8);   // block a
  link(3, 4, 0.7); link(3, 5, 0.65); link(4, 5, 0.6);   // block b
  link(6, 7, 0.5); link(6, 8, 0.45); link(7, 8, 0.4);   // block c
  link(2, 3, 0.3);                                      // a-b boundary
  link(5, 6, 0.2);                                      // b-c boundary
  auto r = cluster(m, ClusterParams{3, 3, 20, 0.0});
  if (r.clusters.size() != 3) return "expected three clusters";

  auto map = build_map(r.clusters);
  if (map.points.size() != 3) return "map dropped a cluster";
  if (map.edges.size() != 2) return "boundary associations lost";
  for (const auto& p : map.points) {
    if (classify(p.x, p.y, map.x_split, map.y_split) != p.type)
      return "stored quadrant type does not recompute";
  }
  for (const auto& e : map.edges)
    if (!(e.a < e.b) || e.weight <= 0.0) return "edge endpoints disordered";

  auto svg = export_svg(map);
  auto bad = svg_grammar(svg);
  if (!bad.empty()) return bad;
  auto dot = export_dot(map);
  bad = dot_grammar(dot);
  if (!bad.empty()) return bad;

  // byte identity across a full rebuild
  auto rebuilt = cluster(m, ClusterParams{3, 3, 20, 0.0});
  auto again = build_map(rebuilt.clusters);
  if (export_svg(again) != svg) return "svg differs across runs";
  if (export_dot(again) != dot) return "dot differs across runs";
  if (export_csv(again) != export_csv(map)) return "csv differs across runs";
  return "";
}

// ---- 8: end-to-end determinism through the command line ---------------------

std::string run_pipeline(const std::filesystem::path& root,
                         const std::filesystem::path& scratch) {
  auto q = [](const std::filesystem::path& p) {
    return "\"" + p.string() + "\"";
  };
  auto fixture = root / "fixture";
  auto store = root / "store";
  auto out = root / "out";
  const std::vector<std::string> commands = {
      "fixture --seed 42 --out " + q(fixture),
      "ingest --store " + q(store) + " " + q(fixture / "usage.log"),
      "import-biblio --store " + q(store) + " " + q(fixture / "biblio.jsonl"),
      "import-customers --store " + q(store) + " " +
          q(fixture / "customers.csv"),
      "stats --store " + q(store),
      "factors --store " + q(store) + " --kind wuf --out " +
          q(out / "wuf.csv"),
      "factors --store " + q(store) + " --kind cof --out " +
          q(out / "cof.csv"),
      "cousage --store " + q(store) + " --out " + q(out / "cousage"),
      "map --store " + q(store) + " --out " + q(out / "map"),
  };
  for (const auto& command : commands) {
    auto result = run_cli(command, scratch);
    if (result.exit_code != 0)
      return "command failed (" + std::to_string(result.exit_code) +
             "): " + command;
  }
  return "";
}

std::map<std::string, std::string> tree_bytes(
    const std::filesystem::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    out[std::filesystem::relative(entry.path(), root).string()] =
        read_file(entry.path());
  }
  return out;
}

std::string check_end_to_end_determinism() {
  if (g_cli_path.empty()) return "no CLI binary path given";
  TempDir scratch("acceptance-e2e-scratch");
  TempDir first("acceptance-e2e-a");
  TempDir second("acceptance-e2e-b");
  auto trouble = run_pipeline(first.path(), scratch.path());
  if (!trouble.empty()) return trouble;
  trouble = run_pipeline(second.path(), scratch.path());
  if (!trouble.empty()) return trouble;

  auto a = tree_bytes(first.path());
  auto b = tree_bytes(second.path());
  if (a.size() != b.size()) return "output trees differ in file count";
  for (const auto& [path, bytes] : a) {
    auto it = b.find(path);
    if (it == b.end()) return "second run is missing " + path;
    if (it->second != bytes) return path + " differs between runs";
  }
  if (a.count("store/stat/year-2002-01-01.json") == 0)
    return "pipeline did not write the yearly report";
  if (a.count("out/cousage/document-clusters.json") == 0)
    return "pipeline did not write the cluster file";
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];

  criterion(1, "reference tables reproduce their derived values", 1.0,
            check_reference_tables);
  criterion(2, "distributions match the filter-and-count oracle", 10.0,
            check_distributions_oracle);
  criterion(3, "co-usage math matches the quadratic oracle", 5.0,
            check_cousage_oracle);
  criterion(4, "clustering invariants hold on seeded matrices", 60.0,
            check_clustering_properties);
  criterion(5, "cluster metrics recompute from stored lists", 60.0,
            check_metric_recomputation);
  criterion(6, "usage factors partition by publication year", 10.0,
            check_factor_partition);
  criterion(7, "strategic maps classify and render stably", 10.0,
            check_map);
  criterion(8, "the CLI pipeline is deterministic end to end", 120.0,
            check_end_to_end_determinism);

  return failures == 0 ? 0 : 1;
}
