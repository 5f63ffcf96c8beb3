#pragma once

namespace snmgeo {
inline constexpr const char* kVersion = "0.1.0";
}
