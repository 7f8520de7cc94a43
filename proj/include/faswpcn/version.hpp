#pragma once

namespace faswpcn {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace faswpcn
