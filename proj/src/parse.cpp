#include "geonet/parse.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace geonet {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view text) noexcept {
  const auto first = text.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t");
  return text.substr(first, last - first + 1);
}

namespace {

double parse_decimal(std::string_view text, const std::string& field) {
  text = trim(text);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw std::invalid_argument(field + ": '" + std::string(text) + "' is not a number");
  }
  return value;
}

}  // namespace

double parse_number(std::string_view text, const std::string& field) {
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const double num = parse_decimal(text.substr(0, slash), field);
    const double den = parse_decimal(text.substr(slash + 1), field);
    if (den == 0.0) throw std::invalid_argument(field + ": zero denominator");
    return num / den;
  }
  return parse_decimal(text, field);
}

}  // namespace geonet
