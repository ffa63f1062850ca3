#pragma once

#include <string_view>

namespace osclab {

inline constexpr std::string_view kVersion = "0.1.0";

// Bumped whenever a CSV column set changes.
inline constexpr int kCsvSchemaVersion = 1;

}  // namespace osclab
