#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace miriad {

// Splits on every separator, keeping empty pieces ("a\t\tb" -> 3 fields).
std::vector<std::string> split(std::string_view text, char sep);

// Splits a multi-valued field, dropping empty pieces ("" -> no values).
std::vector<std::string> split_values(std::string_view text, char sep = '|');

std::string join(const std::vector<std::string>& parts, char sep);

std::string_view trim(std::string_view s);

// ASCII-only case fold; non-ASCII bytes pass through unchanged.
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);

bool parse_u64(std::string_view s, std::uint64_t& out);
bool parse_int(std::string_view s, int& out);

// Fixed-point formatting, "%.*f". Used wherever output must be byte-stable.
std::string format_fixed(double v, int decimals);

// Compact deterministic formatting for association values ("%.12g").
std::string format_value(double v);

// round half away from zero at the given number of decimals
double round_decimals(double v, int decimals);

std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ull);
std::string to_hex(std::uint64_t v);

// RFC-4180 style quoting, applied only when the field needs it.
std::string csv_field(std::string_view value);
std::string csv_row(const std::vector<std::string>& fields);

// double-quoted DOT identifier with backslash escapes
std::string dot_quote(std::string_view value);

// escapes &, <, >, " for XML/SVG text and attributes
std::string xml_escape(std::string_view value);

}  // namespace miriad
