#pragma once

namespace lohi {

inline constexpr const char* kToolName = "lohi-split";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr int kManifestFormatVersion = 1;
inline constexpr int kKCutJsonFormatVersion = 1;
inline constexpr int kAuditFormatVersion = 1;

}  // namespace lohi
