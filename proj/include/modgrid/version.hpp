#pragma once

namespace modgrid {

// Participates in cache keys: bump on any change to family construction
// or serialization so stale cache entries are never reused.
inline constexpr const char* library_version = "0.1.0";

}  // namespace modgrid
