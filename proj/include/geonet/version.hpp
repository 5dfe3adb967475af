#pragma once

namespace geonet {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace geonet
