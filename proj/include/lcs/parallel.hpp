#ifndef LCS_PARALLEL_HPP
#define LCS_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace lcs {

/// Worker cap: LCS_WORKERS if set (minimum 1), hardware concurrency otherwise.
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Work is striped over a fixed thread count so
/// results written by index are identical no matter how many workers run.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

namespace detail {
/// Process-wide override of the worker cap; 0 restores the environment value.
void set_worker_override(std::size_t n);
} // namespace detail

} // namespace lcs

#endif
