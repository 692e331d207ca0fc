#pragma once

namespace eulerstab {

inline constexpr const char* version = "0.1.0";

} // namespace eulerstab
