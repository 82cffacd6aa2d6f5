#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace miriad {

// All timestamps are UTC with second precision. Inputs without a zone
// designator are taken as UTC.
using Timestamp = std::chrono::sys_seconds;

// Accepts "YYYY-MM-DDTHH:MM:SS" (also a space separator and a trailing 'Z').
std::optional<Timestamp> parse_timestamp(std::string_view text);

// Accepts a bare date "YYYY-MM-DD" (midnight) or a full timestamp.
std::optional<Timestamp> parse_timestamp_or_date(std::string_view text);

std::string format_timestamp(Timestamp t);  // "YYYY-MM-DDTHH:MM:SS"
std::string format_date(Timestamp t);       // "YYYY-MM-DD"

// Half-open interval [begin, end).
struct Period {
  Timestamp begin{};
  Timestamp end{};

  bool contains(Timestamp t) const { return begin <= t && t < end; }
  bool empty() const { return end <= begin; }
  bool operator==(const Period&) const = default;
};

// Throws ArgumentError when end < begin. begin == end is a valid empty period.
Period make_period(Timestamp begin, Timestamp end);

enum class Periodicity { day, week, month, year };

std::string_view to_string(Periodicity p);
std::optional<Periodicity> parse_periodicity(std::string_view name);

// A boundary is midnight UTC at the slot start; weeks start Monday.
bool is_aligned(Timestamp t, Periodicity p);
Timestamp next_boundary(Timestamp aligned, Periodicity p);

// Largest boundary <= t, and smallest boundary >= t.
Timestamp floor_boundary(Timestamp t, Periodicity p);
Timestamp ceil_boundary(Timestamp t, Periodicity p);

// Partitions an aligned range into consecutive slots. Throws ArgumentError
// when either end of the range is not on a slot boundary.
std::vector<Period> split_periods(const Period& range, Periodicity p);

}  // namespace miriad
