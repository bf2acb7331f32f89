#pragma once

namespace rotor {

inline constexpr const char* kVersion = "0.1.0";

} // namespace rotor
