#pragma once

namespace beamfamily {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace beamfamily
