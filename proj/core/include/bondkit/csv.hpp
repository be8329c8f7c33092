#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bondkit {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_shortest(double x);

/// printf("%.<digits>g") without locale surprises.
std::string format_general(double x, int significant_digits);

/// Scientific notation with `significant_digits` digits, e.g. 2.774e-07.
std::string format_scientific(double x, int significant_digits);

/// Fixed notation with `decimals` digits after the point.
std::string format_fixed(double x, int decimals);

/// Strict decimal parse of a whole string; nullopt on trailing garbage.
std::optional<double> parse_double(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// Parses "1,0.75,0.5" style lists. Throws Error(ParseError) on bad entries.
std::vector<double> parse_double_list(std::string_view text);

}  // namespace bondkit
