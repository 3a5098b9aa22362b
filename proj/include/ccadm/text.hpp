#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Small text helpers shared by the file readers and writers.
namespace ccadm::text {

std::string_view trim(std::string_view s);

/// Splits one delimited line. No quoting: fields may not contain the delimiter.
std::vector<std::string> split(std::string_view line, char delimiter);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Whole-field finite real number, or nullopt.
std::optional<double> parse_real(std::string_view s);

std::optional<long long> parse_integer(std::string_view s);

/// Shortest text that reads back to exactly the same double.
std::string format_real(double v);

/// Replaces characters that would break a one-line delimited field.
std::string sanitize_field(std::string_view s, char delimiter = ',');

bool iequals(std::string_view a, std::string_view b);

}  // namespace ccadm::text
