#ifndef LCR_VERSION_HPP
#define LCR_VERSION_HPP

namespace lcr {
inline constexpr const char* kToolName = "lcr";
inline constexpr const char* kToolVersion = "1.0.0";
}  // namespace lcr

#endif
