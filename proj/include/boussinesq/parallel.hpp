#pragma once

#include <cstddef>
#include <functional>

namespace boussinesq {

/// Worker count from BOUSSINESQ_LAB_WORKERS, else hardware concurrency.
std::size_t worker_count();

/// Runs body(i) for i in [begin, end) on up to worker_count() threads.
/// Each index is visited exactly once; callers write only to slots they own.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace boussinesq
