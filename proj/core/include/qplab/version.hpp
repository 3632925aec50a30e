#pragma once

namespace qplab {
inline constexpr const char* kVersion = "0.1.0";
}
