// execution.hpp: serial/parallel selection for the data-parallel kernels.
//
// Every kernel that takes an Execution argument produces bitwise identical
// output in both modes. Reductions are split into fixed-size chunks whose
// partial sums are combined in index order, independent of thread count.

#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <vector>

namespace cascade {

enum class Execution { serial, parallel };

// Chunk length for deterministic reductions.
inline constexpr std::size_t reduction_chunk = 2048;

void set_thread_count(int threads);
int thread_count();

// Sum of body(i) for i in [begin, end), combined chunk by chunk in order.
template <class T, class Body>
T chunked_sum(std::size_t begin, std::size_t end, Execution exec, Body&& body) {
    if (end <= begin) return T{};
    const std::size_t n = end - begin;
    const std::size_t chunks = (n + reduction_chunk - 1) / reduction_chunk;
    std::vector<T> partial(chunks, T{});
    auto run_chunk = [&](std::size_t c) {
        const std::size_t lo = begin + c * reduction_chunk;
        const std::size_t hi = std::min(end, lo + reduction_chunk);
        T acc{};
        for (std::size_t i = lo; i < hi; ++i) acc += body(i);
        partial[c] = acc;
    };
    if (exec == Execution::parallel && chunks > 1) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c)
            run_chunk(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    }
    T total{};
    for (const T& p : partial) total += p;
    return total;
}

} // namespace cascade
