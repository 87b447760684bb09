#pragma once

#include <string_view>

namespace spikeloop {

inline constexpr std::string_view kVersion = "0.1.0";
inline constexpr int kScenarioSchemaVersion = 1;

}  // namespace spikeloop
