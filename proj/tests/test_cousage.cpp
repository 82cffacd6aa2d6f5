#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "miriad/cousage.hpp"
#include "miriad/rng.hpp"
#include "common.hpp"

using namespace miriad;

namespace {

Timestamp ts(const char* text) { return *parse_timestamp(text); }

TransactionSet transactions(
    std::map<std::string, std::set<std::string>> users) {
  TransactionSet t;
  t.users = std::move(users);
  return t;
}

std::uint32_t index_of(const std::vector<std::string>& items,
                       const std::string& name) {
  auto it = std::find(items.begin(), items.end(), name);
  REQUIRE(it != items.end());
  return std::uint32_t(it - items.begin());
}

// quadratic reference count, straight from the definition
std::uint64_t brute_pairs(const TransactionSet& t, MatrixKind kind,
                          const std::string& a, const std::string& b) {
  if (kind == MatrixKind::document) {
    std::uint64_t n = 0;
    for (const auto& [user, docs] : t.users)
      if (docs.count(a) && docs.count(b)) ++n;
    return n;
  }
  std::uint64_t shared = 0;
  for (const auto& doc : t.users.at(a))
    if (t.users.at(b).count(doc)) ++shared;
  return shared;
}

std::uint64_t brute_occ(const TransactionSet& t, MatrixKind kind,
                        const std::string& a) {
  if (kind == MatrixKind::document) {
    std::uint64_t n = 0;
    for (const auto& [user, docs] : t.users) n += docs.count(a);
    return n;
  }
  return t.users.at(a).size();
}

}  // namespace

TEST_CASE("the three-user worked example") {
  // u1 used d1 and d2, u2 used d1 and d2, u3 used only d1
  auto t = transactions({{"u1", {"d1", "d2"}},
                         {"u2", {"d1", "d2"}},
                         {"u3", {"d1"}}});
  CHECK(t.user_count() == 3);
  CHECK(t.document_count() == 2);

  auto cooc = cooccurrence(t, MatrixKind::document);
  REQUIRE(cooc.items == std::vector<std::string>{"d1", "d2"});
  CHECK(cooc.occurrences == std::vector<std::uint64_t>{3, 2});
  CHECK(cooc.count(0, 1) == 2);
  CHECK(cooc.count(1, 0) == 2);  // symmetric accessor
  CHECK(cooc.count(0, 0) == 0);  // the diagonal is not a pair

  auto assoc = equivalence(cooc);
  CHECK(assoc.value(0, 1) == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
  CHECK(assoc.value(1, 0) == assoc.value(0, 1));
}

TEST_CASE("user matrices count shared documents") {
  auto t = transactions({{"u1", {"d1", "d2", "d3"}},
                         {"u2", {"d2", "d3"}},
                         {"u3", {"d9"}}});
  auto cooc = cooccurrence(t, MatrixKind::user);
  REQUIRE(cooc.items == std::vector<std::string>{"u1", "u2", "u3"});
  CHECK(cooc.occurrences == std::vector<std::uint64_t>{3, 2, 1});
  auto i1 = index_of(cooc.items, "u1");
  auto i2 = index_of(cooc.items, "u2");
  auto i3 = index_of(cooc.items, "u3");
  CHECK(cooc.count(i1, i2) == 2);
  CHECK(cooc.count(i1, i3) == 0);

  auto assoc = equivalence(cooc);
  CHECK(assoc.value(i1, i2) == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
  CHECK(assoc.value(i1, i3) == 0.0);
}

TEST_CASE("equivalence is symmetric, bounded, and exact on a random set") {
  Rng rng(11);
  TransactionSet t;
  for (int u = 0; u < 40; ++u) {
    std::set<std::string> docs;
    auto n = 1 + rng.below(6);
    for (std::uint64_t k = 0; k < n; ++k)
      docs.insert("d" + std::to_string(rng.below(25)));
    t.users["u" + std::to_string(u)] = docs;
  }

  for (auto kind : {MatrixKind::document, MatrixKind::user}) {
    auto cooc = cooccurrence(t, kind);
    auto assoc = equivalence(cooc);
    REQUIRE(assoc.items.size() == cooc.items.size());
    CHECK(std::is_sorted(assoc.items.begin(), assoc.items.end()));

    for (std::uint32_t i = 0; i < assoc.items.size(); ++i) {
      CHECK(cooc.occurrences[i] == brute_occ(t, kind, assoc.items[i]));
      for (std::uint32_t j = i + 1; j < assoc.items.size(); ++j) {
        auto c = brute_pairs(t, kind, assoc.items[i], assoc.items[j]);
        CHECK(cooc.count(i, j) == c);
        double oi = double(cooc.occurrences[i]);
        double oj = double(cooc.occurrences[j]);
        double expect = c ? double(c) * double(c) / (oi * oj) : 0.0;
        CHECK(assoc.value(i, j) == doctest::Approx(expect).epsilon(1e-12));
        CHECK(assoc.value(i, j) >= 0.0);
        CHECK(assoc.value(i, j) <= 1.0);
        CHECK(assoc.value(j, i) == assoc.value(i, j));
      }
    }
    // C(i,j) can never exceed either occurrence count
    for (const auto& [key, c] : cooc.pairs) {
      CHECK(c <= cooc.occurrences[key.first]);
      CHECK(c <= cooc.occurrences[key.second]);
    }
  }
}

TEST_CASE("transactions build from enriched events with set semantics") {
  std::vector<EnrichedEvent> events;
  auto push = [&](std::string actor, std::string rec) {
    EnrichedEvent e;
    e.kind = EventKind::display;
    e.timestamp = ts("2002-01-05 10:00:00");
    e.actor_id = std::move(actor);
    e.record_id = std::move(rec);
    events.push_back(std::move(e));
  };
  push("u1", "d1");
  push("u1", "d1");  // repeat use collapses
  push("u1", "d2");
  push("u2", "d1");
  push("", "d3");    // anonymous actors are unusable for co-usage
  push("u3", "");    // as are events without a record
  auto t = build_transactions(events);
  CHECK(t.user_count() == 2);
  CHECK(t.users.at("u1") == std::set<std::string>{"d1", "d2"});
  CHECK(t.users.at("u2") == std::set<std::string>{"d1"});
}

TEST_CASE("transactions read straight from a datastore period") {
  TempDir dir("cousage-store");
  Datastore store(dir.path());
  DisplayRecord d;
  d.user_id = "u1";
  d.tld = "fr";
  d.country = "FR";
  d.record_id = "100";
  d.timestamp = ts("2002-01-05 10:00:00");
  DisplayRecord d2 = d;
  d2.record_id = "200";
  d2.timestamp = ts("2002-01-06 10:00:00");
  DisplayRecord late = d;
  late.record_id = "300";
  late.timestamp = ts("2004-01-01 00:00:00");
  store.import_displays({d, d2, late});
  auto t = build_transactions(store, EventKind::display,
                              {ts("2002-01-01 00:00:00"),
                               ts("2003-01-01 00:00:00")});
  CHECK(t.users.at("u1") == std::set<std::string>{"100", "200"});
}

TEST_CASE("pairs with no co-occurrence stay out of the sparse maps") {
  auto t = transactions({{"u1", {"d1"}}, {"u2", {"d2"}}});
  auto cooc = cooccurrence(t, MatrixKind::document);
  CHECK(cooc.pairs.empty());
  auto assoc = equivalence(cooc);
  CHECK(assoc.values.empty());
  CHECK(assoc.value(0, 1) == 0.0);
}

TEST_CASE("matrix csv lists triples with stable formatting") {
  auto t = transactions({{"u1", {"d1", "d2"}},
                         {"u2", {"d1", "d2"}},
                         {"u3", {"d1"}}});
  auto cooc = cooccurrence(t, MatrixKind::document);
  CHECK(render_matrix_csv(cooc) ==
        "item_i,item_j,value\n"
        "d1,d2,2\n");
  auto assoc = equivalence(cooc);
  auto csv = render_matrix_csv(assoc);
  CHECK(csv.substr(0, 20) == "item_i,item_j,value\n");
  CHECK(csv.find("d1,d2,0.6666666") != std::string::npos);
  CHECK(render_occurrences_csv(cooc.items, cooc.occurrences) ==
        "item,occurrences\n"
        "d1,3\n"
        "d2,2\n");
}
