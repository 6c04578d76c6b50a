#pragma once

#include <cstddef>
#include <functional>

namespace screenlab {

// Worker count: explicit override if set, else SCREENLAB_THREADS, else hardware.
unsigned thread_count();
// 0 clears the override.
void set_thread_override(unsigned n);

// Runs body(begin, end) over contiguous chunks of [0, n). Chunk boundaries
// depend only on n, so per-chunk reductions combined in chunk order are
// bit-identical for any thread count.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t chunk, std::size_t begin,
                                                             std::size_t end)>& body);

std::size_t chunk_count(std::size_t n);

inline constexpr std::size_t kChunkSize = 4096;

}  // namespace screenlab
