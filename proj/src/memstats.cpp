#include "ginn/memstats.hpp"

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace ginn {

std::optional<std::size_t> heap_bytes_in_use() {
#if defined(__GLIBC__)
    const struct mallinfo2 info = mallinfo2();
    return static_cast<std::size_t>(info.uordblks) + static_cast<std::size_t>(info.hblkhd);
#else
    return std::nullopt;
#endif
}

} // namespace ginn
