#pragma once

namespace mfsim {

inline constexpr const char* version_string = "0.1.0";

}  // namespace mfsim
