#pragma once

namespace relform {

inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace relform
