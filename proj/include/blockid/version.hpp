#pragma once

namespace blockid {

inline constexpr const char* kVersion = "0.1.0";

}
