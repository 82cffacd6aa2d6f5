#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "miriad/time.hpp"

namespace miriad {

// Sentinel country value used whenever TLD or attribute resolution fails.
inline constexpr const char* kUnknownCountry = "UNKNOWN";

// One search event. Multi-valued fields hold one entry per value.
struct QueryRecord {
  Timestamp timestamp{};
  std::string user_id;
  std::string tld;         // lowercase dotted suffix, e.g. "edu.au"
  std::string country = kUnknownCountry;
  std::string language;    // empty when not specified
  std::vector<std::string> journal_filter;
  std::optional<int> year_from;
  std::optional<int> year_to;
  std::string author_query;
  std::vector<std::string> title_words;
  std::vector<std::string> keywords;
  std::uint64_t n_explored = 0;
  std::uint64_t n_retrieved = 0;

  bool operator==(const QueryRecord&) const = default;
};

// One displayed bibliographic record event.
struct DisplayRecord {
  Timestamp timestamp{};
  std::string user_id;
  std::string tld;
  std::string country = kUnknownCountry;
  std::string record_id;

  bool operator==(const DisplayRecord&) const = default;
};

enum class CustomerActivity {
  commercial_firm,
  research_institution,
  higher_education,
  hospital,
  information_center,
  private_person,
  other,
};

// Stable label, e.g. "commercial-firm"; used in reports and JSON.
std::string_view activity_label(CustomerActivity a);
// Short log code, e.g. "COM".
std::string_view activity_code(CustomerActivity a);
// Accepts codes and labels; nullopt for anything unrecognised.
std::optional<CustomerActivity> parse_activity(std::string_view text);

// One document order event.
struct OrderRecord {
  Timestamp timestamp{};
  std::string customer_id;
  std::string customer_country = kUnknownCountry;
  CustomerActivity customer_activity = CustomerActivity::other;
  std::string record_id;

  bool operator==(const OrderRecord&) const = default;
};

// A bibliographic reference, used to enrich display and order events.
struct BiblioRecord {
  std::string record_id;
  std::string title;
  std::vector<std::string> authors;
  std::vector<std::string> author_countries;  // may be empty
  std::string journal_title;
  int publication_year = 0;
  std::string publishing_country = kUnknownCountry;
  std::string scientific_domain;
  std::string document_type;

  bool operator==(const BiblioRecord&) const = default;
};

// Publication years outside [1500, current year + 1] are rejected on import.
bool plausible_publication_year(int year);

void to_json(nlohmann::json& j, const QueryRecord& r);
void from_json(const nlohmann::json& j, QueryRecord& r);
void to_json(nlohmann::json& j, const DisplayRecord& r);
void from_json(const nlohmann::json& j, DisplayRecord& r);
void to_json(nlohmann::json& j, const OrderRecord& r);
void from_json(const nlohmann::json& j, OrderRecord& r);
void to_json(nlohmann::json& j, const BiblioRecord& r);
void from_json(const nlohmann::json& j, BiblioRecord& r);

}  // namespace miriad
