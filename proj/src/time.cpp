#include "miriad/time.hpp"

#include <cstdio>

#include "miriad/errors.hpp"
#include "miriad/util.hpp"

namespace miriad {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

int digits(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

std::optional<std::chrono::sys_days> parse_date_part(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  auto y = s.substr(0, 4), m = s.substr(5, 2), d = s.substr(8, 2);
  if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return std::nullopt;
  std::chrono::year_month_day ymd{std::chrono::year{digits(y)},
                                  std::chrono::month{unsigned(digits(m))},
                                  std::chrono::day{unsigned(digits(d))}};
  if (!ymd.ok()) return std::nullopt;
  return std::chrono::sys_days{ymd};
}

}  // namespace

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  std::string_view s = trim(text);
  if (!s.empty() && (s.back() == 'Z' || s.back() == 'z')) s.remove_suffix(1);
  if (s.size() != 19 || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
      s[16] != ':')
    return std::nullopt;
  auto date = parse_date_part(s.substr(0, 10));
  if (!date) return std::nullopt;
  auto hh = s.substr(11, 2), mm = s.substr(14, 2), ss = s.substr(17, 2);
  if (!all_digits(hh) || !all_digits(mm) || !all_digits(ss)) return std::nullopt;
  int h = digits(hh), m = digits(mm), sec = digits(ss);
  if (h > 23 || m > 59 || sec > 59) return std::nullopt;
  return *date + std::chrono::hours{h} + std::chrono::minutes{m} +
         std::chrono::seconds{sec};
}

std::optional<Timestamp> parse_timestamp_or_date(std::string_view text) {
  std::string_view s = trim(text);
  if (auto date = parse_date_part(s)) return Timestamp{*date};
  return parse_timestamp(s);
}

std::string format_timestamp(Timestamp t) {
  auto day = std::chrono::floor<std::chrono::days>(t);
  std::chrono::year_month_day ymd{day};
  std::chrono::hh_mm_ss tod{t - day};
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ld",
                int(ymd.year()), unsigned(ymd.month()), unsigned(ymd.day()),
                long(tod.hours().count()), long(tod.minutes().count()),
                long(tod.seconds().count()));
  return buf;
}

std::string format_date(Timestamp t) {
  auto day = std::chrono::floor<std::chrono::days>(t);
  std::chrono::year_month_day ymd{day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

Period make_period(Timestamp begin, Timestamp end) {
  if (end < begin)
    throw ArgumentError("inverted interval: " + format_timestamp(begin) +
                        " .. " + format_timestamp(end));
  return Period{begin, end};
}

std::string_view to_string(Periodicity p) {
  switch (p) {
    case Periodicity::day: return "day";
    case Periodicity::week: return "week";
    case Periodicity::month: return "month";
    case Periodicity::year: return "year";
  }
  return "?";
}

std::optional<Periodicity> parse_periodicity(std::string_view name) {
  if (name == "day") return Periodicity::day;
  if (name == "week") return Periodicity::week;
  if (name == "month") return Periodicity::month;
  if (name == "year") return Periodicity::year;
  return std::nullopt;
}

bool is_aligned(Timestamp t, Periodicity p) {
  using namespace std::chrono;
  auto day = floor<days>(t);
  if (t != day) return false;
  year_month_day ymd{day};
  switch (p) {
    case Periodicity::day: return true;
    case Periodicity::week: return weekday{day} == Monday;
    case Periodicity::month: return ymd.day() == 1d;
    case Periodicity::year: return ymd.month() == January && ymd.day() == 1d;
  }
  return false;
}

Timestamp next_boundary(Timestamp aligned, Periodicity p) {
  using namespace std::chrono;
  auto day = floor<days>(aligned);
  switch (p) {
    case Periodicity::day: return Timestamp{day + days{1}};
    case Periodicity::week: return Timestamp{day + days{7}};
    case Periodicity::month: {
      year_month_day ymd{day};
      return Timestamp{sys_days{(ymd.year() / ymd.month() + months{1}) / 1d}};
    }
    case Periodicity::year: {
      year_month_day ymd{day};
      return Timestamp{sys_days{(ymd.year() + years{1}) / January / 1d}};
    }
  }
  return aligned;
}

Timestamp floor_boundary(Timestamp t, Periodicity p) {
  using namespace std::chrono;
  auto day = floor<days>(t);
  year_month_day ymd{day};
  switch (p) {
    case Periodicity::day: return Timestamp{day};
    case Periodicity::week: return Timestamp{day - (weekday{day} - Monday)};
    case Periodicity::month:
      return Timestamp{sys_days{ymd.year() / ymd.month() / 1d}};
    case Periodicity::year:
      return Timestamp{sys_days{ymd.year() / January / 1d}};
  }
  return Timestamp{day};
}

Timestamp ceil_boundary(Timestamp t, Periodicity p) {
  if (is_aligned(t, p)) return t;
  return next_boundary(floor_boundary(t, p), p);
}

std::vector<Period> split_periods(const Period& range, Periodicity p) {
  if (!is_aligned(range.begin, p))
    throw ArgumentError("range start " + format_timestamp(range.begin) +
                        " is not aligned to periodicity '" +
                        std::string(to_string(p)) + "'");
  std::vector<Period> out;
  Timestamp t = range.begin;
  while (t < range.end) {
    Timestamp next = next_boundary(t, p);
    if (next > range.end)
      throw ArgumentError("range end " + format_timestamp(range.end) +
                          " is not aligned to periodicity '" +
                          std::string(to_string(p)) + "'");
    out.push_back(Period{t, next});
    t = next;
  }
  return out;
}

}  // namespace miriad
