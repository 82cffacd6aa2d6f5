#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "miriad/records.hpp"

namespace miriad {

// Maps dotted TLD suffixes to ISO 3166-1 alpha-2 codes. Longest suffix wins:
// "edu.au" is tried before "au". Generic TLDs (com, net, org, ...) are simply
// absent from the table and resolve to UNKNOWN.
class TldTable {
 public:
  // Country-code TLDs of ISO 3166-1 (uk -> GB and friends included).
  static TldTable builtin();
  // CSV rows "suffix,country_code". Throws IoError when unreadable.
  static TldTable load_csv(const std::filesystem::path& file);

  void add(std::string suffix, std::string country);
  std::string resolve(std::string_view tld) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::string> entries_;
};

// Total and deterministic; UNKNOWN whenever no suffix matches.
std::string resolve_country(std::string_view tld, const TldTable& table);

struct ParseError {
  std::size_t line_no = 0;  // 1-based, counting every physical line
  std::string message;
};

// Malformed lines land in `errors`; they are reported, never silently
// dropped. Lines that parse with a repairable defect land in `warnings`
// and still produce a record. records + errors account for every non-blank
// line of the input.
template <typename Record>
struct ParseResult {
  std::vector<Record> records;
  std::vector<ParseError> errors;
  std::vector<ParseError> warnings;
  std::size_t non_blank_lines = 0;
};

// Single-stream parsers. Each expects only lines of its own record tag;
// other tags count as per-line errors.
ParseResult<QueryRecord> parse_query_log(std::istream& source,
                                         const TldTable& tlds);
ParseResult<DisplayRecord> parse_display_log(std::istream& source,
                                             const TldTable& tlds);
ParseResult<OrderRecord> parse_order_log(std::istream& source);

// A log file may interleave Q, D and O lines; this dispatches on the tag.
struct ParsedLog {
  std::vector<QueryRecord> queries;
  std::vector<DisplayRecord> displays;
  std::vector<OrderRecord> orders;
  std::vector<ParseError> errors;
  std::vector<ParseError> warnings;
  std::size_t non_blank_lines = 0;

  std::size_t record_count() const {
    return queries.size() + displays.size() + orders.size();
  }
};

ParsedLog parse_log(std::istream& source, const TldTable& tlds);

// Inverse of parsing: the exact TSV line (no trailing newline).
std::string serialize(const QueryRecord& r);
std::string serialize(const DisplayRecord& r);
std::string serialize(const OrderRecord& r);

}  // namespace miriad
