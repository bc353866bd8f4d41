#pragma once

namespace hypflow {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hypflow
