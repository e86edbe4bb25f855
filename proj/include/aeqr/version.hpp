#pragma once

namespace aeqr {
inline constexpr const char* version_string = "aeqr 0.1.0";
}
