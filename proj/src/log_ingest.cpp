#include "miriad/log_ingest.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "miriad/errors.hpp"
#include "miriad/util.hpp"

namespace miriad {

namespace {

// ISO 3166-1 alpha-2 country-code TLDs. The code equals the upper-cased
// suffix except where noted.
constexpr std::string_view kCcTlds[] = {
    "ad", "ae", "af", "ag", "ai", "al", "am", "ao", "aq", "ar", "as", "at",
    "au", "aw", "ax", "az", "ba", "bb", "bd", "be", "bf", "bg", "bh", "bi",
    "bj", "bl", "bm", "bn", "bo", "bq", "br", "bs", "bt", "bv", "bw", "by",
    "bz", "ca", "cc", "cd", "cf", "cg", "ch", "ci", "ck", "cl", "cm", "cn",
    "co", "cr", "cu", "cv", "cw", "cx", "cy", "cz", "de", "dj", "dk", "dm",
    "do", "dz", "ec", "ee", "eg", "eh", "er", "es", "et", "fi", "fj", "fk",
    "fm", "fo", "fr", "ga", "gb", "gd", "ge", "gf", "gg", "gh", "gi", "gl",
    "gm", "gn", "gp", "gq", "gr", "gs", "gt", "gu", "gw", "gy", "hk", "hm",
    "hn", "hr", "ht", "hu", "id", "ie", "il", "im", "in", "io", "iq", "ir",
    "is", "it", "je", "jm", "jo", "jp", "ke", "kg", "kh", "ki", "km", "kn",
    "kp", "kr", "kw", "ky", "kz", "la", "lb", "lc", "li", "lk", "lr", "ls",
    "lt", "lu", "lv", "ly", "ma", "mc", "md", "me", "mf", "mg", "mh", "mk",
    "ml", "mm", "mn", "mo", "mp", "mq", "mr", "ms", "mt", "mu", "mv", "mw",
    "mx", "my", "mz", "na", "nc", "ne", "nf", "ng", "ni", "nl", "no", "np",
    "nr", "nu", "nz", "om", "pa", "pe", "pf", "pg", "ph", "pk", "pl", "pm",
    "pn", "pr", "ps", "pt", "pw", "py", "qa", "re", "ro", "rs", "ru", "rw",
    "sa", "sb", "sc", "sd", "se", "sg", "sh", "si", "sj", "sk", "sl", "sm",
    "sn", "so", "sr", "ss", "st", "sv", "sx", "sy", "sz", "tc", "td", "tf",
    "tg", "th", "tj", "tk", "tl", "tm", "tn", "to", "tr", "tt", "tv", "tw",
    "tz", "ua", "ug", "um", "us", "uy", "uz", "va", "vc", "ve", "vg", "vi",
    "vn", "vu", "wf", "ws", "ye", "yt", "za", "zm", "zw",
};

constexpr std::size_t kQueryFields = 13;
constexpr std::size_t kDisplayFields = 5;
constexpr std::size_t kOrderFields = 6;

struct LineContext {
  std::size_t line_no;
  std::vector<ParseError>* errors;
  std::vector<ParseError>* warnings;

  void error(std::string message) const {
    errors->push_back({line_no, std::move(message)});
  }
  void warn(std::string message) const {
    warnings->push_back({line_no, std::move(message)});
  }
};

std::string synthesized_user_id(std::size_t line_no) {
  return "anon/" + std::to_string(line_no);
}

bool parse_query_line(const std::vector<std::string>& f, const LineContext& cx,
                      const TldTable& tlds, QueryRecord& out) {
  if (f.size() != kQueryFields) {
    cx.error("expected " + std::to_string(kQueryFields) +
             " fields in Q line, got " + std::to_string(f.size()));
    return false;
  }
  auto ts = parse_timestamp(f[1]);
  if (!ts) {
    cx.error("bad timestamp '" + f[1] + "'");
    return false;
  }
  out.timestamp = *ts;
  out.user_id = f[2].empty() ? synthesized_user_id(cx.line_no) : f[2];
  out.tld = to_lower(trim(f[3]));
  if (out.tld.empty()) {
    cx.error("empty tld");
    return false;
  }
  out.country = tlds.resolve(out.tld);
  out.language = f[4];
  out.journal_filter = split_values(f[5]);
  out.year_from.reset();
  out.year_to.reset();
  if (!f[6].empty()) {
    int y;
    if (!parse_int(f[6], y)) {
      cx.error("bad year_from '" + f[6] + "'");
      return false;
    }
    out.year_from = y;
  }
  if (!f[7].empty()) {
    int y;
    if (!parse_int(f[7], y)) {
      cx.error("bad year_to '" + f[7] + "'");
      return false;
    }
    out.year_to = y;
  }
  if (out.year_from && out.year_to && *out.year_from > *out.year_to) {
    cx.error("year range inversion: " + f[6] + " > " + f[7]);
    return false;
  }
  out.author_query = f[8];
  out.title_words = split_values(f[9]);
  out.keywords = split_values(f[10]);
  if (!parse_u64(f[11], out.n_explored)) {
    cx.error("bad n_explored '" + f[11] + "'");
    return false;
  }
  if (!parse_u64(f[12], out.n_retrieved)) {
    cx.error("bad n_retrieved '" + f[12] + "'");
    return false;
  }
  if (out.n_retrieved > out.n_explored) {
    cx.error("count inversion: retrieved " + f[12] + " > explored " + f[11]);
    return false;
  }
  return true;
}

bool parse_display_line(const std::vector<std::string>& f,
                        const LineContext& cx, const TldTable& tlds,
                        DisplayRecord& out) {
  if (f.size() != kDisplayFields) {
    cx.error("expected " + std::to_string(kDisplayFields) +
             " fields in D line, got " + std::to_string(f.size()));
    return false;
  }
  auto ts = parse_timestamp(f[1]);
  if (!ts) {
    cx.error("bad timestamp '" + f[1] + "'");
    return false;
  }
  out.timestamp = *ts;
  out.user_id = f[2].empty() ? synthesized_user_id(cx.line_no) : f[2];
  out.tld = to_lower(trim(f[3]));
  if (out.tld.empty()) {
    cx.error("empty tld");
    return false;
  }
  out.country = tlds.resolve(out.tld);
  out.record_id = f[4];
  if (out.record_id.empty()) {
    cx.error("missing record_id");
    return false;
  }
  return true;
}

bool parse_order_line(const std::vector<std::string>& f, const LineContext& cx,
                      OrderRecord& out) {
  if (f.size() != kOrderFields) {
    cx.error("expected " + std::to_string(kOrderFields) +
             " fields in O line, got " + std::to_string(f.size()));
    return false;
  }
  auto ts = parse_timestamp(f[1]);
  if (!ts) {
    cx.error("bad timestamp '" + f[1] + "'");
    return false;
  }
  out.timestamp = *ts;
  out.customer_id = f[2];
  if (out.customer_id.empty()) {
    cx.error("missing customer_id");
    return false;
  }
  out.customer_country =
      f[3].empty() ? std::string(kUnknownCountry) : to_upper(trim(f[3]));
  if (f[4].empty()) {
    out.customer_activity = CustomerActivity::other;
  } else if (auto a = parse_activity(f[4])) {
    out.customer_activity = *a;
  } else {
    out.customer_activity = CustomerActivity::other;
    cx.warn("unknown activity code '" + f[4] + "', using 'other'");
  }
  out.record_id = f[5];
  if (out.record_id.empty()) {
    cx.error("missing record_id");
    return false;
  }
  return true;
}

// Drives line iteration; `handle` returns false for lines it cannot accept
// after reporting the error itself.
template <typename Handle>
std::size_t scan_lines(std::istream& source, Handle&& handle) {
  std::size_t line_no = 0;
  std::size_t non_blank = 0;
  std::string line;
  while (std::getline(source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    ++non_blank;
    handle(line_no, line);
  }
  return non_blank;
}

}  // namespace

TldTable TldTable::builtin() {
  TldTable t;
  for (auto suffix : kCcTlds) t.add(std::string(suffix), to_upper(suffix));
  t.add("uk", "GB");
  return t;
}

TldTable TldTable::load_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot read TLD table: " + file.string());
  TldTable t;
  std::string line;
  while (std::getline(in, line)) {
    auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    auto fields = split(text, ',');
    if (fields.size() != 2)
      throw DataError("bad TLD table row in " + file.string() + ": " + line);
    t.add(std::string(trim(fields[0])), to_upper(trim(fields[1])));
  }
  return t;
}

void TldTable::add(std::string suffix, std::string country) {
  entries_[to_lower(trim(suffix))] = std::move(country);
}

std::string TldTable::resolve(std::string_view tld) const {
  std::string lowered = to_lower(trim(tld));
  std::string_view rest = lowered;
  while (!rest.empty()) {
    auto it = entries_.find(std::string(rest));
    if (it != entries_.end()) return it->second;
    auto dot = rest.find('.');
    if (dot == std::string_view::npos) break;
    rest.remove_prefix(dot + 1);
  }
  return kUnknownCountry;
}

std::string resolve_country(std::string_view tld, const TldTable& table) {
  return table.resolve(tld);
}

ParseResult<QueryRecord> parse_query_log(std::istream& source,
                                         const TldTable& tlds) {
  ParseResult<QueryRecord> result;
  result.non_blank_lines =
      scan_lines(source, [&](std::size_t line_no, const std::string& line) {
        LineContext cx{line_no, &result.errors, &result.warnings};
        auto fields = split(line, '\t');
        if (fields[0] != "Q") {
          cx.error("unexpected record tag '" + fields[0] + "', want Q");
          return;
        }
        QueryRecord r;
        if (parse_query_line(fields, cx, tlds, r))
          result.records.push_back(std::move(r));
      });
  return result;
}

ParseResult<DisplayRecord> parse_display_log(std::istream& source,
                                             const TldTable& tlds) {
  ParseResult<DisplayRecord> result;
  result.non_blank_lines =
      scan_lines(source, [&](std::size_t line_no, const std::string& line) {
        LineContext cx{line_no, &result.errors, &result.warnings};
        auto fields = split(line, '\t');
        if (fields[0] != "D") {
          cx.error("unexpected record tag '" + fields[0] + "', want D");
          return;
        }
        DisplayRecord r;
        if (parse_display_line(fields, cx, tlds, r))
          result.records.push_back(std::move(r));
      });
  return result;
}

ParseResult<OrderRecord> parse_order_log(std::istream& source) {
  ParseResult<OrderRecord> result;
  result.non_blank_lines =
      scan_lines(source, [&](std::size_t line_no, const std::string& line) {
        LineContext cx{line_no, &result.errors, &result.warnings};
        auto fields = split(line, '\t');
        if (fields[0] != "O") {
          cx.error("unexpected record tag '" + fields[0] + "', want O");
          return;
        }
        OrderRecord r;
        if (parse_order_line(fields, cx, r))
          result.records.push_back(std::move(r));
      });
  return result;
}

ParsedLog parse_log(std::istream& source, const TldTable& tlds) {
  ParsedLog log;
  log.non_blank_lines =
      scan_lines(source, [&](std::size_t line_no, const std::string& line) {
        LineContext cx{line_no, &log.errors, &log.warnings};
        auto fields = split(line, '\t');
        if (fields[0] == "Q") {
          QueryRecord r;
          if (parse_query_line(fields, cx, tlds, r))
            log.queries.push_back(std::move(r));
        } else if (fields[0] == "D") {
          DisplayRecord r;
          if (parse_display_line(fields, cx, tlds, r))
            log.displays.push_back(std::move(r));
        } else if (fields[0] == "O") {
          OrderRecord r;
          if (parse_order_line(fields, cx, r))
            log.orders.push_back(std::move(r));
        } else {
          cx.error("unknown record tag '" + fields[0] + "'");
        }
      });
  return log;
}

std::string serialize(const QueryRecord& r) {
  std::ostringstream out;
  out << "Q\t" << format_timestamp(r.timestamp) << '\t' << r.user_id << '\t'
      << r.tld << '\t' << r.language << '\t' << join(r.journal_filter, '|')
      << '\t' << (r.year_from ? std::to_string(*r.year_from) : "") << '\t'
      << (r.year_to ? std::to_string(*r.year_to) : "") << '\t'
      << r.author_query << '\t' << join(r.title_words, '|') << '\t'
      << join(r.keywords, '|') << '\t' << r.n_explored << '\t'
      << r.n_retrieved;
  return out.str();
}

std::string serialize(const DisplayRecord& r) {
  std::ostringstream out;
  out << "D\t" << format_timestamp(r.timestamp) << '\t' << r.user_id << '\t'
      << r.tld << '\t' << r.record_id;
  return out.str();
}

std::string serialize(const OrderRecord& r) {
  std::ostringstream out;
  out << "O\t" << format_timestamp(r.timestamp) << '\t' << r.customer_id
      << '\t' << r.customer_country << '\t'
      << activity_code(r.customer_activity) << '\t' << r.record_id;
  return out.str();
}

}  // namespace miriad
