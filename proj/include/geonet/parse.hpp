#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace geonet {

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text) noexcept;

/// Parses a finite decimal number or an exact fraction "p/q". `field` names
/// the value in the error message.
double parse_number(std::string_view text, const std::string& field);

}  // namespace geonet
