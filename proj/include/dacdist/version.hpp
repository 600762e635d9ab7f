#pragma once

namespace dacdist {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace dacdist
