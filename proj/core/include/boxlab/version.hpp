#pragma once

namespace boxlab {

inline constexpr const char* kArtifactName = "boxlab";
inline constexpr const char* kArtifactVersion = "0.3.0";

}  // namespace boxlab
