#include "miriad/records.hpp"

#include <nlohmann/json.hpp>

#include "miriad/errors.hpp"
#include "miriad/util.hpp"

namespace miriad {

namespace {

struct ActivityName {
  CustomerActivity activity;
  std::string_view code;
  std::string_view label;
};

constexpr ActivityName kActivities[] = {
    {CustomerActivity::commercial_firm, "COM", "commercial-firm"},
    {CustomerActivity::research_institution, "RES", "research-institution"},
    {CustomerActivity::higher_education, "EDU", "higher-education"},
    {CustomerActivity::hospital, "HOS", "hospital"},
    {CustomerActivity::information_center, "INF", "information-center"},
    {CustomerActivity::private_person, "PRI", "private-person"},
    {CustomerActivity::other, "OTH", "other"},
};

Timestamp json_timestamp(const nlohmann::json& j, const char* field) {
  auto text = j.at(field).get<std::string>();
  auto ts = parse_timestamp(text);
  if (!ts) throw DataError("bad timestamp in stored record: " + text);
  return *ts;
}

}  // namespace

std::string_view activity_label(CustomerActivity a) {
  for (const auto& n : kActivities)
    if (n.activity == a) return n.label;
  return "other";
}

std::string_view activity_code(CustomerActivity a) {
  for (const auto& n : kActivities)
    if (n.activity == a) return n.code;
  return "OTH";
}

std::optional<CustomerActivity> parse_activity(std::string_view text) {
  for (const auto& n : kActivities) {
    if (text == n.code || text == n.label) return n.activity;
  }
  return std::nullopt;
}

bool plausible_publication_year(int year) {
  using namespace std::chrono;
  year_month_day today{floor<days>(system_clock::now())};
  return year >= 1500 && year <= int(today.year()) + 1;
}

void to_json(nlohmann::json& j, const QueryRecord& r) {
  j = nlohmann::json{{"timestamp", format_timestamp(r.timestamp)},
                     {"user_id", r.user_id},
                     {"tld", r.tld},
                     {"country", r.country},
                     {"language", r.language},
                     {"journal_filter", r.journal_filter},
                     {"author_query", r.author_query},
                     {"title_words", r.title_words},
                     {"keywords", r.keywords},
                     {"n_explored", r.n_explored},
                     {"n_retrieved", r.n_retrieved}};
  if (r.year_from) j["year_from"] = *r.year_from;
  if (r.year_to) j["year_to"] = *r.year_to;
}

void from_json(const nlohmann::json& j, QueryRecord& r) {
  r.timestamp = json_timestamp(j, "timestamp");
  j.at("user_id").get_to(r.user_id);
  j.at("tld").get_to(r.tld);
  j.at("country").get_to(r.country);
  j.at("language").get_to(r.language);
  j.at("journal_filter").get_to(r.journal_filter);
  j.at("author_query").get_to(r.author_query);
  j.at("title_words").get_to(r.title_words);
  j.at("keywords").get_to(r.keywords);
  j.at("n_explored").get_to(r.n_explored);
  j.at("n_retrieved").get_to(r.n_retrieved);
  r.year_from = j.contains("year_from")
                    ? std::optional<int>(j["year_from"].get<int>())
                    : std::nullopt;
  r.year_to = j.contains("year_to")
                  ? std::optional<int>(j["year_to"].get<int>())
                  : std::nullopt;
}

void to_json(nlohmann::json& j, const DisplayRecord& r) {
  j = nlohmann::json{{"timestamp", format_timestamp(r.timestamp)},
                     {"user_id", r.user_id},
                     {"tld", r.tld},
                     {"country", r.country},
                     {"record_id", r.record_id}};
}

void from_json(const nlohmann::json& j, DisplayRecord& r) {
  r.timestamp = json_timestamp(j, "timestamp");
  j.at("user_id").get_to(r.user_id);
  j.at("tld").get_to(r.tld);
  j.at("country").get_to(r.country);
  j.at("record_id").get_to(r.record_id);
}

void to_json(nlohmann::json& j, const OrderRecord& r) {
  j = nlohmann::json{
      {"timestamp", format_timestamp(r.timestamp)},
      {"customer_id", r.customer_id},
      {"customer_country", r.customer_country},
      {"customer_activity", std::string(activity_label(r.customer_activity))},
      {"record_id", r.record_id}};
}

void from_json(const nlohmann::json& j, OrderRecord& r) {
  r.timestamp = json_timestamp(j, "timestamp");
  j.at("customer_id").get_to(r.customer_id);
  j.at("customer_country").get_to(r.customer_country);
  auto activity = parse_activity(j.at("customer_activity").get<std::string>());
  r.customer_activity = activity.value_or(CustomerActivity::other);
  j.at("record_id").get_to(r.record_id);
}

void to_json(nlohmann::json& j, const BiblioRecord& r) {
  j = nlohmann::json{{"record_id", r.record_id},
                     {"title", r.title},
                     {"authors", r.authors},
                     {"author_countries", r.author_countries},
                     {"journal_title", r.journal_title},
                     {"publication_year", r.publication_year},
                     {"publishing_country", r.publishing_country},
                     {"scientific_domain", r.scientific_domain},
                     {"document_type", r.document_type}};
}

void from_json(const nlohmann::json& j, BiblioRecord& r) {
  j.at("record_id").get_to(r.record_id);
  j.at("title").get_to(r.title);
  j.at("authors").get_to(r.authors);
  j.at("author_countries").get_to(r.author_countries);
  j.at("journal_title").get_to(r.journal_title);
  j.at("publication_year").get_to(r.publication_year);
  j.at("publishing_country").get_to(r.publishing_country);
  j.at("scientific_domain").get_to(r.scientific_domain);
  j.at("document_type").get_to(r.document_type);
}

}  // namespace miriad
