#pragma once

namespace yaf {

/// Library version recorded in manifests and checkpoints.
inline constexpr const char* kVersion = "0.1.0";

/// On-disk checkpoint layout version.  Readers refuse other values rather
/// than guessing at field meanings.
inline constexpr int kCheckpointFormatVersion = 1;

}  // namespace yaf
