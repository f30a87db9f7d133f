#pragma once

#include <cstdint>
#include <functional>

namespace greenpath {

// Worker count: explicit request > GREENPATH_THREADS > hardware concurrency.
int resolve_threads(int requested = 0);

// Runs fn(block_index, first_item, last_item) over ceil(n_items/block_size)
// blocks on the given number of workers.  Blocks are claimed from an atomic
// counter, so scheduling varies, but callers key every result by block index
// which makes the final reduction independent of the worker count.
void parallel_blocks(std::int64_t n_items, std::int64_t block_size, int threads,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn);

}  // namespace greenpath
