#pragma once

#include <cstddef>
#include <optional>

namespace ginn {

/// Bytes currently handed out by the process allocator (glibc mallinfo2:
/// arena blocks plus mmap'd blocks). nullopt where the platform has no such
/// counter. Differences around a construction approximate its allocation
/// footprint; allocator slack makes this a coarse measure.
std::optional<std::size_t> heap_bytes_in_use();

} // namespace ginn
