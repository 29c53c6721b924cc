#pragma once

#include <cstddef>
#include <string>

namespace chemotaxis {

/// Loop driver selection for the per-interface and per-cell kernels.
enum class Execution { Serial, Parallel };

/// Runs body(i) for i in [0, n). With Execution::Parallel the iterations are
/// distributed by OpenMP when available; every iteration must write only to
/// its own slot.
template <class Body>
void for_each_index(Execution exec, std::size_t n, Body&& body)
{
    const auto count = static_cast<std::ptrdiff_t>(n);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
    }
}

int max_threads();
std::string parallel_backend();

}  // namespace chemotaxis
