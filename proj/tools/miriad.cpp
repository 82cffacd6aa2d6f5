// miriad: web-usage analysis for a bibliographic service.
// Subcommands cover the pipeline: ingest logs into a store, import the
// bibliographic and customer tables, compute descriptive statistics and
// usage factors, run co-usage clustering, and draw the strategic map.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "miriad/clusterer.hpp"
#include "miriad/cousage.hpp"
#include "miriad/datastore.hpp"
#include "miriad/errors.hpp"
#include "miriad/fixture.hpp"
#include "miriad/log_ingest.hpp"
#include "miriad/stats_engine.hpp"
#include "miriad/strategic_map.hpp"
#include "miriad/time.hpp"
#include "miriad/usage_factors.hpp"
#include "miriad/util.hpp"

namespace {

using namespace miriad;

Timestamp need_timestamp(const std::string& text, const char* flag) {
  auto t = parse_timestamp_or_date(text);
  if (!t)
    throw ArgumentError(std::string(flag) + " expects a date or timestamp, got '" +
                        text + "'");
  return *t;
}

// --from/--to when given, else the store's covered range; nullopt when the
// store is empty and no explicit bounds exist
std::optional<Period> resolve_period(const Datastore& store,
                                     const std::string& from,
                                     const std::string& to) {
  std::optional<Timestamp> begin, end;
  if (!from.empty()) begin = need_timestamp(from, "--from");
  if (!to.empty()) end = need_timestamp(to, "--to");
  if (!begin || !end) {
    auto covered = store.snapshot().covered;
    if (!covered) {
      if (begin && end) return make_period(*begin, *end);
      return std::nullopt;
    }
    if (!begin) begin = covered->begin;
    if (!end) end = covered->end;
  }
  return make_period(*begin, *end);
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << body;
}

void emit(const std::string& out, const std::string& body) {
  if (out.empty())
    std::cout << body;
  else
    write_text(out, body);
}

struct StoreOpts {
  std::string store;
  std::string from;
  std::string to;
};

void add_store_opts(CLI::App* cmd, StoreOpts& o, bool with_period = true) {
  cmd->add_option("--store", o.store, "datastore root directory")->required();
  if (with_period) {
    cmd->add_option("--from", o.from,
                    "period start (YYYY-MM-DD or timestamp); default: store "
                    "coverage");
    cmd->add_option("--to", o.to, "period end (exclusive); default: store "
                    "coverage");
  }
}

// ---- ingest -------------------------------------------------------------

struct IngestOpts {
  std::string store;
  std::vector<std::string> files;
  std::string tld_table;
};

void cmd_ingest(const IngestOpts& o) {
  TldTable tlds = o.tld_table.empty() ? TldTable::builtin()
                                      : TldTable::load_csv(o.tld_table);
  Datastore store(o.store);
  std::size_t bad_lines = 0;
  for (const auto& file : o.files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot read log file: " + file);
    auto parsed = parse_log(in, tlds);
    for (const auto& e : parsed.errors)
      std::cerr << file << ":" << e.line_no << ": " << e.message << "\n";
    for (const auto& w : parsed.warnings)
      std::cerr << file << ":" << w.line_no << ": warning: " << w.message
                << "\n";
    bad_lines += parsed.errors.size();
    std::vector<std::uint64_t> snapshots;
    if (!parsed.queries.empty())
      snapshots.push_back(store.import_queries(parsed.queries).snapshot_id);
    if (!parsed.displays.empty())
      snapshots.push_back(store.import_displays(parsed.displays).snapshot_id);
    if (!parsed.orders.empty())
      snapshots.push_back(store.import_orders(parsed.orders).snapshot_id);
    std::cout << file << ": " << parsed.queries.size() << " queries, "
              << parsed.displays.size() << " displays, "
              << parsed.orders.size() << " orders, " << parsed.errors.size()
              << " bad lines";
    if (!snapshots.empty()) std::cout << "; snapshot " << snapshots.back();
    std::cout << "\n";
  }
  auto snap = store.snapshot();
  std::cout << "store content " << snap.content_hash << ", " << bad_lines
            << " bad lines total\n";
}

// ---- import-biblio / import-customers -----------------------------------

struct ImportBiblioOpts {
  std::string store;
  std::vector<std::string> files;
};

void cmd_import_biblio(const ImportBiblioOpts& o) {
  Datastore store(o.store);
  for (const auto& file : o.files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot read biblio file: " + file);
    std::vector<BiblioRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (trim(line).empty()) continue;
      try {
        records.push_back(nlohmann::json::parse(line).get<BiblioRecord>());
      } catch (const nlohmann::json::exception& e) {
        throw DataError(file + ":" + std::to_string(line_no) + ": " +
                        e.what());
      }
    }
    auto snap = store.import_biblio(records);
    std::cout << file << ": " << records.size() << " records"
              << (snap.duplicate_batch ? " (duplicate batch, no-op)" : "")
              << "; snapshot " << snap.snapshot_id << "\n";
  }
}

struct ImportCustomersOpts {
  std::string store;
  std::string file;
};

void cmd_import_customers(const ImportCustomersOpts& o) {
  Datastore store(o.store);
  auto rows = store.import_customers_file(o.file);
  std::cout << o.file << ": " << rows << " customer rows\n";
}

// ---- stats ---------------------------------------------------------------

struct StatsOpts {
  StoreOpts store;
  std::string periodicity = "month,year";
  std::string dataset;
  std::string dimension;
  std::size_t top = 0;
  std::string out;
};

void cmd_stats(const StatsOpts& o) {
  Datastore store(o.store.store);
  auto period = resolve_period(store, o.store.from, o.store.to);

  if (!o.dataset.empty() || !o.dimension.empty()) {
    if (o.dataset.empty() || o.dimension.empty())
      throw ArgumentError("--dataset and --dimension go together");
    auto ds = parse_dataset(o.dataset);
    if (!ds) throw ArgumentError("unknown dataset '" + o.dataset + "'");
    auto dim = parse_dimension(o.dimension);
    if (!dim) throw ArgumentError("unknown dimension '" + o.dimension + "'");
    auto dist = distribution(store, *ds, *dim, period.value_or(Period{}));
    if (o.top > 0) dist = top_n(dist, o.top);
    emit(o.out, render_csv(dist));
    return;
  }

  if (!period) {
    std::cout << "store is empty; no reports written\n";
    return;
  }
  for (const auto& name : split_values(o.periodicity, ',')) {
    auto p = parse_periodicity(trim(name));
    if (!p) throw ArgumentError("unknown periodicity '" + name + "'");
    auto range = make_period(floor_boundary(period->begin, *p),
                             ceil_boundary(period->end, *p));
    auto reports = precompute(store, *p, range);
    for (const auto& path : write_stat_reports(store, reports))
      std::cout << path.string() << "\n";
  }
}

// ---- factors ---------------------------------------------------------------

struct FactorsOpts {
  StoreOpts store;
  std::string kind = "wuf";
  std::vector<std::string> journals;
  bool by_year = false;
  std::string out;
};

void cmd_factors(const FactorsOpts& o) {
  auto kind = parse_factor_kind(o.kind);
  if (!kind) throw ArgumentError("unknown factor kind '" + o.kind + "'");
  Datastore store(o.store.store);
  auto period =
      resolve_period(store, o.store.from, o.store.to).value_or(Period{});

  if (o.by_year) {
    if (o.journals.empty())
      throw ArgumentError("--by-year needs at least one --journal");
    int dec = factor_decimals(*kind);
    std::string body = "journal,year,count,stored,factor\n";
    for (const auto& journal : o.journals) {
      for (const auto& r : factor_by_year_table(store, *kind, journal, period))
        body += csv_row({r.journal_title,
                         std::to_string(r.publication_year.value_or(0)),
                         std::to_string(r.numerator),
                         std::to_string(r.denominator),
                         format_fixed(round_decimals(r.value, dec), dec)});
    }
    emit(o.out, body);
    return;
  }
  auto rows = factor_table(store, *kind, period, o.journals);
  emit(o.out, render_csv(rows));
}

// ---- cousage / map ---------------------------------------------------------

struct ClusterOpts {
  std::size_t min_size = 3;
  std::size_t max_size = 10;
  std::size_t max_assoc = 20;
  double floor = 0.0;

  ClusterParams params() const {
    return ClusterParams{min_size, max_size, max_assoc, floor};
  }
};

void add_cluster_opts(CLI::App* cmd, ClusterOpts& o) {
  cmd->add_option("--min-size", o.min_size, "minimum cluster size");
  cmd->add_option("--max-size", o.max_size, "maximum cluster size");
  cmd->add_option("--max-associations", o.max_assoc,
                  "maximum internal associations per cluster");
  cmd->add_option("--floor", o.floor, "minimum association value considered");
}

struct CousageOpts {
  StoreOpts store;
  std::string events = "order";
  std::string kind = "both";
  ClusterOpts cluster;
  std::string out = "cousage";
};

EventKind parse_events_flag(const std::string& value) {
  if (value == "order") return EventKind::order;
  if (value == "display") return EventKind::display;
  throw ArgumentError("--events expects 'order' or 'display', got '" + value +
                      "'");
}

TransactionSet load_transactions(const Datastore& store,
                                 const StoreOpts& opts,
                                 const std::string& events) {
  auto kind = parse_events_flag(events);
  auto period = resolve_period(store, opts.from, opts.to);
  if (!period)
    throw DataError("no usage events in the store; nothing to analyse");
  auto transactions = build_transactions(store, kind, *period);
  if (transactions.empty())
    throw DataError("no usage transactions in the selected period");
  return transactions;
}

void run_cousage_side(const TransactionSet& transactions, MatrixKind kind,
                      const ClusterParams& params,
                      const std::filesystem::path& out_dir) {
  std::string prefix(to_string(kind));
  auto cooc = cooccurrence(transactions, kind);
  auto assoc = equivalence(cooc);
  auto result = cluster(assoc, params);

  write_text(out_dir / (prefix + "-matrix.csv"), render_matrix_csv(assoc));
  write_text(out_dir / (prefix + "-occurrences.csv"),
             render_occurrences_csv(assoc.items, assoc.occurrences));
  nlohmann::json clusters_json = result;
  write_text(out_dir / (prefix + "-clusters.json"),
             clusters_json.dump(2) + "\n");

  // relevance units are the opposite side of the transaction matrix
  std::map<std::string, std::set<std::string>> units;
  if (kind == MatrixKind::document) {
    units = transactions.users;
  } else {
    for (const auto& [user, docs] : transactions.users)
      for (const auto& doc : docs) units[doc].insert(user);
  }
  std::string rel = "cluster,unit,shared,total,relevance\n";
  for (const auto& c : result.clusters) {
    write_text(out_dir / (prefix + "-cluster-" + std::to_string(c.id) + ".dot"),
               export_dot(c));
    for (const auto& row : relevance(c, units))
      rel += csv_row({std::to_string(row.cluster_id), row.unit,
                      std::to_string(row.shared), std::to_string(row.total),
                      format_value(row.r)});
  }
  write_text(out_dir / (prefix + "-relevance.csv"), rel);

  auto map = build_map(result.clusters);
  write_text(out_dir / (prefix + "-map.svg"), export_svg(map));
  write_text(out_dir / (prefix + "-map.dot"), export_dot(map));
  write_text(out_dir / (prefix + "-map.csv"), export_csv(map));

  std::cout << prefix << ": " << result.clusters.size() << " clusters, "
            << result.unclustered.size() << " unclustered items\n";
}

void cmd_cousage(const CousageOpts& o) {
  if (o.kind != "document" && o.kind != "user" && o.kind != "both")
    throw ArgumentError("--kind expects 'document', 'user' or 'both'");
  auto params = o.cluster.params();
  params.validate();
  Datastore store(o.store.store);
  auto transactions = load_transactions(store, o.store, o.events);
  if (o.kind != "user")
    run_cousage_side(transactions, MatrixKind::document, params, o.out);
  if (o.kind != "document")
    run_cousage_side(transactions, MatrixKind::user, params, o.out);
}

struct MapOpts {
  StoreOpts store;
  std::string events = "order";
  std::string kind = "document";
  ClusterOpts cluster;
  std::optional<double> x_split;
  std::optional<double> y_split;
  std::string out = "map";
};

void cmd_map(const MapOpts& o) {
  auto kind = parse_matrix_kind(o.kind);
  if (!kind) throw ArgumentError("--kind expects 'document' or 'user'");
  auto params = o.cluster.params();
  params.validate();
  Datastore store(o.store.store);
  auto transactions = load_transactions(store, o.store, o.events);
  auto assoc = equivalence(cooccurrence(transactions, *kind));
  auto result = cluster(assoc, params);

  MapOptions options;
  options.x_split = o.x_split;
  options.y_split = o.y_split;
  auto map = build_map(result.clusters, options);
  std::string prefix(to_string(*kind));
  write_text(std::filesystem::path(o.out) / (prefix + "-map.svg"),
             export_svg(map, options));
  write_text(std::filesystem::path(o.out) / (prefix + "-map.dot"),
             export_dot(map));
  write_text(std::filesystem::path(o.out) / (prefix + "-map.csv"),
             export_csv(map));
  std::cout << prefix << "-map: " << map.points.size() << " clusters, "
            << map.edges.size() << " links; splits " << format_value(map.x_split)
            << " / " << format_value(map.y_split) << "\n";
}

// ---- fixture ---------------------------------------------------------------

struct FixtureOpts {
  std::string out;
  std::uint64_t seed = 1;
  std::string communities = "5x8,5x8";
  std::size_t cross = 4;
  std::size_t queries = 40;
  std::size_t displays = 60;
  std::size_t orders = 20;
  std::size_t background_docs = 10;
  std::size_t background_customers = 6;
  int year = 2002;
};

std::vector<CommunitySpec> parse_communities(const std::string& text) {
  std::vector<CommunitySpec> out;
  if (text.empty() || text == "none") return out;
  for (const auto& item : split_values(text, ',')) {
    auto sep = item.find('x');
    int users = 0, docs = 0;
    if (sep == std::string::npos ||
        !parse_int(trim(item.substr(0, sep)), users) ||
        !parse_int(trim(item.substr(sep + 1)), docs) || users < 0 || docs < 0)
      throw ArgumentError("--communities expects USERSxDOCS items, got '" +
                          item + "'");
    out.push_back({std::size_t(users), std::size_t(docs)});
  }
  return out;
}

void cmd_fixture(const FixtureOpts& o) {
  FixtureSpec spec;
  spec.seed = o.seed;
  spec.year = o.year;
  spec.communities = parse_communities(o.communities);
  spec.cross_community_orders = o.cross;
  spec.query_events = o.queries;
  spec.display_events = o.displays;
  spec.order_events = o.orders;
  spec.background_documents = o.background_docs;
  spec.background_customers = o.background_customers;
  auto files = generate_fixture(spec, o.out);
  std::cout << files.log.string() << "\n"
            << files.biblio.string() << "\n"
            << files.customers.string() << "\n"
            << files.manifest.string() << "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"web-usage analysis for a bibliographic service"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from a config file");

  IngestOpts ingest;
  auto* c_ingest = app.add_subcommand("ingest", "parse usage logs into a store");
  c_ingest->add_option("--store", ingest.store, "datastore root directory")
      ->required();
  c_ingest->add_option("files", ingest.files, "log files (Q/D/O lines, TSV)")
      ->required()
      ->check(CLI::ExistingFile);
  c_ingest->add_option("--tld-table", ingest.tld_table,
                       "CSV of TLD suffix,country overriding the builtin table")
      ->check(CLI::ExistingFile);
  c_ingest->callback([&] { cmd_ingest(ingest); });

  ImportBiblioOpts biblio;
  auto* c_biblio =
      app.add_subcommand("import-biblio", "import bibliographic records");
  c_biblio->add_option("--store", biblio.store, "datastore root directory")
      ->required();
  c_biblio->add_option("files", biblio.files, "JSON-lines biblio files")
      ->required()
      ->check(CLI::ExistingFile);
  c_biblio->callback([&] { cmd_import_biblio(biblio); });

  ImportCustomersOpts customers;
  auto* c_customers =
      app.add_subcommand("import-customers", "import the customer table");
  c_customers
      ->add_option("--store", customers.store, "datastore root directory")
      ->required();
  c_customers
      ->add_option("file", customers.file,
                   "CSV of customer_id,country,activity")
      ->required()
      ->check(CLI::ExistingFile);
  c_customers->callback([&] { cmd_import_customers(customers); });

  StatsOpts stats;
  auto* c_stats = app.add_subcommand(
      "stats", "write periodic reports or print one distribution");
  add_store_opts(c_stats, stats.store);
  c_stats->add_option("--periodicity", stats.periodicity,
                      "comma list of day/week/month/year");
  c_stats->add_option("--dataset", stats.dataset,
                      "query/display/order (table mode)");
  c_stats->add_option("--dimension", stats.dimension,
                      "dimension for table mode");
  c_stats->add_option("--top", stats.top, "keep only the top N rows");
  c_stats->add_option("--out", stats.out, "write the table here, not stdout");
  c_stats->callback([&] { cmd_stats(stats); });

  FactorsOpts factors;
  auto* c_factors =
      app.add_subcommand("factors", "usage factors per journal (wuf/cof)");
  add_store_opts(c_factors, factors.store);
  c_factors->add_option("--kind", factors.kind, "wuf or cof");
  c_factors->add_option("--journal", factors.journals,
                        "restrict to these journals (repeatable)");
  c_factors->add_flag("--by-year", factors.by_year,
                      "break a journal's factor down by publication year");
  c_factors->add_option("--out", factors.out, "write the table here");
  c_factors->callback([&] { cmd_factors(factors); });

  CousageOpts cousage;
  auto* c_cousage = app.add_subcommand(
      "cousage", "co-usage matrices, clusters, relevance tables and maps");
  add_store_opts(c_cousage, cousage.store);
  c_cousage->add_option("--events", cousage.events, "order or display");
  c_cousage->add_option("--kind", cousage.kind, "document, user or both");
  add_cluster_opts(c_cousage, cousage.cluster);
  c_cousage->add_option("--out", cousage.out, "output directory");
  c_cousage->callback([&] { cmd_cousage(cousage); });

  MapOpts map;
  auto* c_map =
      app.add_subcommand("map", "strategic map of one co-usage clustering");
  add_store_opts(c_map, map.store);
  c_map->add_option("--events", map.events, "order or display");
  c_map->add_option("--kind", map.kind, "document or user");
  add_cluster_opts(c_map, map.cluster);
  c_map->add_option("--x-split", map.x_split, "override the centrality split");
  c_map->add_option("--y-split", map.y_split, "override the density split");
  c_map->add_option("--out", map.out, "output directory");
  c_map->callback([&] { cmd_map(map); });

  FixtureOpts fixture;
  auto* c_fixture = app.add_subcommand(
      "fixture", "generate a deterministic synthetic corpus");
  c_fixture->add_option("--out", fixture.out, "output directory")->required();
  c_fixture->add_option("--seed", fixture.seed, "RNG seed");
  c_fixture->add_option("--communities", fixture.communities,
                        "USERSxDOCS list, e.g. 5x8,5x8 ('none' for empty)");
  c_fixture->add_option("--cross", fixture.cross,
                        "cross-community noise orders");
  c_fixture->add_option("--queries", fixture.queries, "background queries");
  c_fixture->add_option("--displays", fixture.displays,
                        "background displays");
  c_fixture->add_option("--orders", fixture.orders, "background orders");
  c_fixture->add_option("--background-docs", fixture.background_docs,
                        "documents outside any community");
  c_fixture->add_option("--background-customers",
                        fixture.background_customers,
                        "customers outside any community");
  c_fixture->add_option("--year", fixture.year, "event year");
  c_fixture->callback([&] { cmd_fixture(fixture); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors are exit 2
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
