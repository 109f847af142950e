#pragma once

namespace qotto {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kRngTag = "philox4x32-10";

}  // namespace qotto
