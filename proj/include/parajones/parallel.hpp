#pragma once

#include <functional>
#include <vector>

namespace parajones {

/// Machine parallelism (at least 1).
int hardware_workers();

/// Partition [begin, end) into `chunks` contiguous ranges and run
/// fn(chunk_index, chunk_begin, chunk_end) on them, one thread per chunk
/// (inline when chunks <= 1 or the range is empty). fn must be safe to call
/// concurrently for distinct chunks.
void parallel_for_chunks(long long begin, long long end, int chunks,
                         const std::function<void(int, long long, long long)>& fn);

/// Run tasks[0..n) on up to `workers` threads, pulling from a shared
/// queue. Tasks must be independent.
void parallel_tasks(int workers, const std::vector<std::function<void()>>& tasks);

}  // namespace parajones
