#pragma once

namespace fogform {

inline constexpr const char* kVersion = "1.0.0";

} // namespace fogform
