#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace walip {

/// Caps the worker threads used by row-parallel kernels. 0 restores the
/// default (1). Results never depend on this value.
void set_thread_count(std::size_t n) noexcept;
std::size_t thread_count() noexcept;

/// Calls body(i) for i in [0, n). Rows are split into contiguous chunks, one
/// per worker; body must only touch state owned by index i. The first
/// exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace walip
