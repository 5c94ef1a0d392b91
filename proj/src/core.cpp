#include "automlc/core/matrix.hpp"
#include "automlc/core/parallel.hpp"
#include "automlc/core/rng.hpp"

#include <algorithm>
#include <atomic>
#include <limits>

namespace automlc {

double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_bytes(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t substream_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
    return mix64(mix64(seed ^ hash_bytes(tag)) + index);
}

Pcg32 substream(std::uint64_t seed, std::string_view tag, std::uint64_t index) {
    const std::uint64_t s = substream_seed(seed, tag, index);
    return Pcg32(s, mix64(s));
}

std::vector<int> shuffled_indices(std::size_t n, Pcg32& rng) {
    std::vector<int> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<int>(i);
    for (std::size_t i = n; i > 1; --i) {
        const std::uint32_t j = rng.bounded(static_cast<std::uint32_t>(i));
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

std::vector<int> sample_without_replacement(std::size_t n, std::size_t k, Pcg32& rng) {
    std::vector<int> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<int>(i);
    for (std::size_t t = 0; t < k; ++t) {
        const std::uint32_t j = rng.bounded(static_cast<std::uint32_t>(n - t));
        std::swap(pool[t], pool[t + j]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(out.begin(), out.end());
    return out;
}

namespace {
std::atomic<bool> g_parallel{true};
}

void set_parallel_enabled(bool on) { g_parallel.store(on); }

bool parallel_enabled() {
#ifdef AUTOMLC_HAS_OPENMP
    return g_parallel.load();
#else
    return false;
#endif
}

int parallel_threads() {
#ifdef AUTOMLC_HAS_OPENMP
    return parallel_enabled() ? omp_get_max_threads() : 1;
#else
    return 1;
#endif
}

}  // namespace automlc
