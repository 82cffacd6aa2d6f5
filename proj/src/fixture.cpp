#include "miriad/fixture.hpp"

#include <chrono>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "miriad/errors.hpp"
#include "miriad/log_ingest.hpp"
#include "miriad/records.hpp"
#include "miriad/rng.hpp"
#include "miriad/time.hpp"

namespace miriad {

namespace {

constexpr std::string_view kTlds[] = {"fr", "de",  "com", "edu",    "uk",
                                      "it", "es",  "edu.au", "net", "ca"};
constexpr std::string_view kJournals[] = {
    "Journal of Applied Polymer Science", "Macromolecules", "Polymer",
    "European Polymer Journal", "Journal of Polymer Science"};
constexpr std::string_view kSurnames[] = {
    "Martin", "Bernard", "Dubois", "Thomas", "Robert",
    "Richard", "Petit", "Durand", "Leroy", "Moreau"};
constexpr std::string_view kWords[] = {"polymer",  "catalysis", "protein",
                                       "spectroscopy", "kinetics", "thermal",
                                       "surface",  "membrane"};
constexpr std::string_view kDomains[] = {"chemistry", "physics",
                                         "polymer science",
                                         "materials science", "biochemistry"};

struct Weighted {
  std::string_view value;
  int weight;
};

constexpr Weighted kCustomerCountries[] = {{"FR", 60}, {"DE", 10}, {"IT", 8},
                                           {"ES", 7},  {"GB", 6},  {"US", 5},
                                           {"BE", 4}};
constexpr Weighted kPublishingCountries[] = {
    {"NL", 30}, {"GB", 25}, {"US", 20}, {"DE", 15}, {"FR", 10}};
constexpr Weighted kActivityMix[] = {
    {"higher-education", 35}, {"research-institution", 30},
    {"commercial-firm", 12},  {"information-center", 10},
    {"hospital", 6},          {"private-person", 5},
    {"other", 2}};

std::string_view pick_weighted(Rng& rng, std::span<const Weighted> pool) {
  std::uint64_t total = 0;
  for (const auto& w : pool) total += std::uint64_t(w.weight);
  std::uint64_t roll = rng.below(total);
  for (const auto& w : pool) {
    if (roll < std::uint64_t(w.weight)) return w.value;
    roll -= std::uint64_t(w.weight);
  }
  return pool.back().value;
}

template <typename T, std::size_t N>
std::string_view pick(Rng& rng, const T (&pool)[N]) {
  return pool[std::size_t(rng.below(N))];
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << body;
}

}  // namespace

FixtureSpec demo_fixture_spec(std::uint64_t seed) {
  FixtureSpec spec;
  spec.seed = seed;
  spec.communities = {{5, 8}, {5, 8}};
  spec.cross_community_orders = 4;
  spec.query_events = 40;
  spec.display_events = 60;
  spec.order_events = 20;
  spec.background_documents = 10;
  spec.background_customers = 6;
  return spec;
}

FixtureFiles generate_fixture(const FixtureSpec& spec,
                              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  Rng rng(spec.seed);

  const std::size_t ncomm = spec.communities.size();
  std::vector<std::vector<std::string>> comm_users(ncomm);
  std::vector<std::vector<std::string>> comm_docs(ncomm);
  std::vector<std::string> comm_journal(ncomm);
  std::vector<std::string> all_docs;

  for (std::size_t c = 0; c < ncomm; ++c) {
    for (std::size_t u = 0; u < spec.communities[c].users; ++u)
      comm_users[c].push_back("c" + std::to_string(c + 1) + "u" +
                              std::to_string(u + 1));
    for (std::size_t d = 0; d < spec.communities[c].documents; ++d) {
      comm_docs[c].push_back(std::to_string(1000 * (c + 1) + d + 1));
      all_docs.push_back(comm_docs[c].back());
    }
    comm_journal[c] = "Community " + std::to_string(c + 1) + " Studies";
  }
  std::vector<std::string> background_docs;
  for (std::size_t d = 0; d < spec.background_documents; ++d) {
    background_docs.push_back(std::to_string(1000 * (ncomm + 1) + d + 1));
    all_docs.push_back(background_docs.back());
  }

  // bibliographic records, one per document
  std::string biblio_lines;
  auto add_biblio = [&](const std::string& id, std::string_view journal) {
    BiblioRecord b;
    b.record_id = id;
    b.title = "Article " + id + ": " + std::string(pick(rng, kWords)) +
              " " + std::string(pick(rng, kWords));
    b.authors.emplace_back(pick(rng, kSurnames));
    if (rng.chance(0.5)) b.authors.emplace_back(pick(rng, kSurnames));
    b.author_countries.emplace_back(
        pick_weighted(rng, kCustomerCountries));
    b.journal_title = std::string(journal);
    b.publication_year = spec.year - int(rng.below(5));
    b.publishing_country = std::string(pick_weighted(rng, kPublishingCountries));
    b.scientific_domain = std::string(pick(rng, kDomains));
    b.document_type = "article";
    nlohmann::json j = b;
    biblio_lines += j.dump();
    biblio_lines += '\n';
  };
  for (std::size_t c = 0; c < ncomm; ++c)
    for (const auto& id : comm_docs[c]) add_biblio(id, comm_journal[c]);
  for (const auto& id : background_docs) add_biblio(id, pick(rng, kJournals));

  // customer table; order lines leave country/activity blank so enrichment
  // has to fill them from here
  std::vector<std::string> customers;
  std::string customer_rows;
  auto add_customer = [&](const std::string& id) {
    customers.push_back(id);
    customer_rows += id;
    customer_rows += ',';
    customer_rows += pick_weighted(rng, kCustomerCountries);
    customer_rows += ',';
    customer_rows += pick_weighted(rng, kActivityMix);
    customer_rows += '\n';
  };
  for (std::size_t c = 0; c < ncomm; ++c)
    for (const auto& id : comm_users[c]) add_customer(id);
  for (std::size_t k = 0; k < spec.background_customers; ++k)
    add_customer("bg" + std::to_string(k + 1));

  // events, spread evenly over the year
  std::size_t planted = 0;
  for (std::size_t c = 0; c < ncomm; ++c)
    planted += comm_users[c].size() * comm_docs[c].size();
  std::size_t total_events = spec.query_events + spec.display_events +
                             spec.order_events + spec.cross_community_orders +
                             2 * planted;
  using namespace std::chrono;
  Timestamp t0{sys_days{year{spec.year} / January / 1}};
  Timestamp t1{sys_days{year{spec.year + 1} / January / 1}};
  seconds step{std::max<std::int64_t>(
      1, (t1 - t0).count() / std::int64_t(total_events + 1))};
  Timestamp clock = t0;
  auto next_ts = [&] {
    Timestamp t = clock;
    clock += step;
    return t;
  };

  std::string log;
  std::size_t q_lines = 0, d_lines = 0, o_lines = 0;
  auto order_line = [&](const std::string& customer, const std::string& doc) {
    log += "O\t" + format_timestamp(next_ts()) + "\t" + customer + "\t\t\t" +
           doc + "\n";
    ++o_lines;
  };

  for (std::size_t k = 0; k < spec.query_events; ++k) {
    QueryRecord q;
    q.timestamp = next_ts();
    if (k % 7 != 3) q.user_id = "q" + std::to_string(rng.below(25) + 1);
    q.tld = std::string(pick(rng, kTlds));
    q.language = rng.chance(0.8) ? "en" : "fr";
    if (rng.chance(0.3)) q.journal_filter.emplace_back(pick(rng, kJournals));
    if (rng.chance(0.4)) {
      q.year_from = 1992 + int(rng.below(6));
      q.year_to = *q.year_from + int(rng.below(8));
    }
    if (rng.chance(0.3)) q.author_query = std::string(pick(rng, kSurnames));
    for (std::uint64_t w = rng.below(4); w > 0; --w)
      q.title_words.emplace_back(pick(rng, kWords));
    for (std::uint64_t w = rng.below(3); w > 0; --w)
      q.keywords.emplace_back(pick(rng, kWords));
    q.n_retrieved = rng.below(200);
    q.n_explored = q.n_retrieved + rng.below(100000);
    log += serialize(q);
    log += '\n';
    ++q_lines;
  }

  // planted blocks: every user displays and orders every community document
  for (std::size_t c = 0; c < ncomm; ++c) {
    for (const auto& user : comm_users[c]) {
      for (const auto& doc : comm_docs[c]) {
        DisplayRecord d;
        d.timestamp = next_ts();
        d.user_id = user;
        d.tld = std::string(pick(rng, kTlds));
        d.record_id = doc;
        log += serialize(d);
        log += '\n';
        ++d_lines;
      }
    }
  }
  for (std::size_t k = 0; k < spec.display_events; ++k) {
    DisplayRecord d;
    d.timestamp = next_ts();
    d.user_id = "w" + std::to_string(rng.below(30) + 1);
    d.tld = std::string(pick(rng, kTlds));
    d.record_id = (k % 9 == 4 || all_docs.empty())
                      ? "7777"  // no such record: exercises the unmatched path
                      : all_docs[std::size_t(rng.below(all_docs.size()))];
    log += serialize(d);
    log += '\n';
    ++d_lines;
  }

  for (std::size_t c = 0; c < ncomm; ++c)
    for (const auto& user : comm_users[c])
      for (const auto& doc : comm_docs[c]) order_line(user, doc);

  std::size_t cross_emitted = 0;
  if (ncomm >= 2) {
    for (std::size_t k = 0; k < spec.cross_community_orders; ++k) {
      auto a = std::size_t(rng.below(ncomm));
      auto b = (a + 1 + std::size_t(rng.below(ncomm - 1))) % ncomm;
      if (comm_users[a].empty() || comm_docs[b].empty()) continue;
      order_line(comm_users[a][std::size_t(rng.below(comm_users[a].size()))],
                 comm_docs[b][std::size_t(rng.below(comm_docs[b].size()))]);
      ++cross_emitted;
    }
  }
  if (!customers.empty() && !all_docs.empty()) {
    for (std::size_t k = 0; k < spec.order_events; ++k)
      order_line(customers[std::size_t(rng.below(customers.size()))],
                 all_docs[std::size_t(rng.below(all_docs.size()))]);
  }

  FixtureFiles files;
  files.log = out_dir / "usage.log";
  files.biblio = out_dir / "biblio.jsonl";
  files.customers = out_dir / "customers.csv";
  files.manifest = out_dir / "manifest.json";
  write_file(files.log, log);
  write_file(files.biblio, biblio_lines);
  write_file(files.customers, customer_rows);

  auto communities = nlohmann::json::array();
  for (std::size_t c = 0; c < ncomm; ++c)
    communities.push_back({{"id", c + 1},
                           {"journal", comm_journal[c]},
                           {"users", comm_users[c]},
                           {"documents", comm_docs[c]}});
  nlohmann::json manifest{
      {"seed", spec.seed},
      {"year", spec.year},
      {"communities", communities},
      {"cross_community_orders", cross_emitted},
      {"background",
       {{"queries", spec.query_events},
        {"displays", spec.display_events},
        {"orders", spec.order_events},
        {"documents", background_docs},
        {"customers", spec.background_customers}}},
      {"lines",
       {{"query", q_lines}, {"display", d_lines}, {"order", o_lines}}},
      {"files",
       {{"log", files.log.filename().string()},
        {"biblio", files.biblio.filename().string()},
        {"customers", files.customers.filename().string()}}}};
  write_file(files.manifest, manifest.dump(2) + "\n");
  return files;
}

}  // namespace miriad
