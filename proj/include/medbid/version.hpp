#pragma once

namespace medbid {

inline constexpr const char* kVersion = "medbid 0.1.0";

}  // namespace medbid
