#ifndef AUTOMLC_CORE_PARALLEL_HPP
#define AUTOMLC_CORE_PARALLEL_HPP

#include <cstddef>
#include <vector>

#ifdef AUTOMLC_HAS_OPENMP
#include <omp.h>
#endif

namespace automlc {

// Process-wide switch for the OpenMP kernels. Both paths compute the same
// result bit for bit: loop bodies write only to slots owned by their index,
// and reductions go through block_sum below with fixed block boundaries.
// The serial path doubles as the reference implementation in tests and in
// the benchmark tool.

void set_parallel_enabled(bool on);
bool parallel_enabled();
int parallel_threads();

template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
#ifdef AUTOMLC_HAS_OPENMP
    if (parallel_enabled() && n > 1) {
        const auto sn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < sn; ++i) fn(static_cast<std::size_t>(i));
        return;
    }
#endif
    for (std::size_t i = 0; i < n; ++i) fn(i);
}

/// Sum of term(i) over [0, n). Accumulates fixed 256-element blocks and
/// combines them in block order, so the result does not depend on the
/// thread count or on whether OpenMP is enabled at all.
template <typename Fn>
double block_sum(std::size_t n, Fn&& term) {
    constexpr std::size_t kBlock = 256;
    const std::size_t nblocks = (n + kBlock - 1) / kBlock;
    if (nblocks <= 1) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += term(i);
        return s;
    }
    std::vector<double> partial(nblocks, 0.0);
    parallel_for(nblocks, [&](std::size_t b) {
        const std::size_t lo = b * kBlock;
        const std::size_t hi = lo + kBlock < n ? lo + kBlock : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += term(i);
        partial[b] = s;
    });
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

}  // namespace automlc

#endif
