#pragma once

#include <cstdint>
#include <string_view>

namespace tug {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

// On-disk format versions, bumped independently of the artifact version.
inline constexpr std::uint32_t kTugfVersion = 1;  // feature matrix
inline constexpr std::uint32_t kTugaVersion = 1;  // adapter checkpoint
inline constexpr std::uint32_t kTugnVersion = 1;  // encoder checkpoint
inline constexpr std::uint32_t kSplitVersion = 1; // edge split file

}  // namespace tug
