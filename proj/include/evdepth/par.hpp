#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace evdepth::par {

// Deterministic reductions: the array is cut into fixed-size blocks, each
// block is summed serially in index order, and the block partials are folded
// by a pairwise tree whose shape depends only on the block count. Thread
// count affects scheduling, never the arithmetic, so results are bit-stable.
inline constexpr std::size_t kReduceBlock = 4096;

template <typename F>
double block_sum(std::size_t n, F&& term) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> partial(nblocks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[b] = s;
    }
    for (std::size_t stride = 1; stride < nblocks; stride *= 2) {
        for (std::size_t i = 0; i + stride < nblocks; i += 2 * stride) {
            partial[i] += partial[i + stride];
        }
    }
    return partial[0];
}

// Parallel loop over independent indices; each index owns its outputs.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        body(static_cast<std::size_t>(i));
    }
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#else
    (void)n;
#endif
}

}  // namespace evdepth::par
