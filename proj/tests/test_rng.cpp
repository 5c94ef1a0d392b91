#include "doctest.h"

#include <set>

#include "automlc/core/parallel.hpp"
#include "automlc/core/rng.hpp"

using namespace automlc;

TEST_CASE("pcg32 streams are deterministic and substream-separated") {
    Pcg32 a = substream(42, "alpha");
    Pcg32 b = substream(42, "alpha");
    Pcg32 c = substream(42, "beta");
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 64; ++i) {
        const std::uint32_t x = a.next_u32();
        all_equal = all_equal && x == b.next_u32();
        any_diff = any_diff || x != c.next_u32();
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("bounded draws stay in range and hit every value") {
    Pcg32 rng(7, 3);
    std::set<std::uint32_t> seen;
    for (int i = 0; i < 1000; ++i) {
        const std::uint32_t v = rng.bounded(7);
        CHECK(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("shuffled_indices is a permutation") {
    Pcg32 rng = substream(1, "perm");
    const std::vector<int> p = shuffled_indices(100, rng);
    std::set<int> s(p.begin(), p.end());
    CHECK(s.size() == 100);
    CHECK(*s.begin() == 0);
    CHECK(*s.rbegin() == 99);
}

TEST_CASE("sample_without_replacement is sorted and distinct") {
    Pcg32 rng = substream(2, "sub");
    const std::vector<int> s = sample_without_replacement(10, 4, rng);
    CHECK(s.size() == 4);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
}

TEST_CASE("block_sum does not depend on the parallel switch") {
    std::vector<double> v(10000);
    Pcg32 rng(3, 1);
    for (double& x : v) x = rng.next_double() - 0.5;
    set_parallel_enabled(false);
    const double serial = block_sum(v.size(), [&](std::size_t i) { return v[i]; });
    set_parallel_enabled(true);
    const double parallel = block_sum(v.size(), [&](std::size_t i) { return v[i]; });
    CHECK(serial == parallel);
}
