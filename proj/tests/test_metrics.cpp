#include "doctest.h"

#include <cmath>

#include "automlc/core/rng.hpp"
#include "automlc/metrics/metrics.hpp"

using namespace automlc;

namespace {

// Brute-force oracles, written directly from the loss definitions and kept
// independent of the implementations they check.

double oracle_subset01(const BinaryMatrix& y, const BinaryMatrix& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.rows; ++i) {
        bool diff = false;
        for (std::size_t j = 0; j < y.cols; ++j) diff = diff || y.at(i, j) != h.at(i, j);
        s += diff ? 1.0 : 0.0;
    }
    return s / static_cast<double>(y.rows);
}

double oracle_hamming(const BinaryMatrix& y, const BinaryMatrix& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.rows; ++i) {
        double w = 0.0;
        for (std::size_t j = 0; j < y.cols; ++j) w += y.at(i, j) != h.at(i, j) ? 1.0 : 0.0;
        s += w / static_cast<double>(y.cols);
    }
    return s / static_cast<double>(y.rows);
}

double oracle_f(const BinaryMatrix& y, const BinaryMatrix& h) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.rows; ++i) {
        double num = 0.0, den = 0.0;
        for (std::size_t j = 0; j < y.cols; ++j) {
            num += 2.0 * y.at(i, j) * h.at(i, j);
            den += y.at(i, j) + h.at(i, j);
        }
        s += den == 0.0 ? 1.0 : num / den;
    }
    return s / static_cast<double>(y.rows);
}

std::pair<double, double> oracle_rank(const BinaryMatrix& y, const Matrix& f) {
    double norm_sum = 0.0, raw_sum = 0.0;
    for (std::size_t i = 0; i < y.rows; ++i) {
        double bad = 0.0, pairs = 0.0;
        for (std::size_t a = 0; a < y.cols; ++a)
            for (std::size_t b = 0; b < y.cols; ++b) {
                if (y.at(i, a) > y.at(i, b)) {
                    pairs += 1.0;
                    if (f.at(i, a) < f.at(i, b)) bad += 1.0;
                    if (f.at(i, a) == f.at(i, b)) bad += 0.5;
                }
            }
        raw_sum += bad;
        norm_sum += pairs > 0.0 ? bad / pairs : 0.0;
    }
    return {norm_sum / static_cast<double>(y.rows), raw_sum / static_cast<double>(y.rows)};
}

BinaryMatrix random_bits(std::size_t n, std::size_t m, Pcg32& rng) {
    BinaryMatrix b(n, m);
    for (auto& v : b.data) v = static_cast<std::uint8_t>(rng.bounded(2));
    return b;
}

}  // namespace

TEST_CASE("subset 0/1 loss examples") {
    BinaryMatrix y(2, 3), h(2, 3);
    y.at(0, 0) = 1;
    h.at(0, 0) = 1;
    CHECK(subset_zero_one(y, y).mean == 0.0);

    BinaryMatrix a(1, 4), b(1, 4);
    b.at(0, 2) = 1;
    CHECK(subset_zero_one(a, b).mean == 1.0);

    BinaryMatrix t4(4, 2), p4(4, 2);
    p4.at(1, 0) = 1;  // one mismatching row
    CHECK(subset_zero_one(t4, p4).mean == doctest::Approx(0.25));

    BinaryMatrix wrong(3, 2);
    CHECK_THROWS_AS(subset_zero_one(t4, wrong), ShapeMismatch);
}

TEST_CASE("hamming loss examples") {
    BinaryMatrix y(1, 4), h(1, 4);
    y.at(0, 0) = 1;
    y.at(0, 2) = 1;
    h = y;
    CHECK(hamming(y, h).mean == 0.0);

    BinaryMatrix flipped(1, 4);
    for (std::size_t j = 0; j < 4; ++j) flipped.at(0, j) = 1 - y.at(0, j);
    CHECK(hamming(y, flipped).mean == 1.0);

    BinaryMatrix p(1, 4);
    p.at(0, 0) = 1;
    p.at(0, 1) = 1;
    p.at(0, 2) = 1;  // y=(1,0,1,0) vs h=(1,1,1,0)
    CHECK(hamming(y, p).mean == doctest::Approx(0.25));
}

TEST_CASE("instance F-measure examples") {
    BinaryMatrix y(1, 3), h(1, 3);
    y.at(0, 0) = 1;
    h.at(0, 0) = 1;
    CHECK(instance_f_measure(y, h).mean == doctest::Approx(1.0));

    BinaryMatrix y2(1, 3), h2(1, 3);
    y2.at(0, 0) = 1;
    y2.at(0, 1) = 1;
    h2.at(0, 0) = 1;
    CHECK(instance_f_measure(y2, h2).mean == doctest::Approx(2.0 / 3.0));

    BinaryMatrix empty(1, 2), empty2(1, 2);
    CHECK(instance_f_measure(empty, empty2).mean == 1.0);  // 0/0 convention
}

TEST_CASE("rank loss examples") {
    BinaryMatrix y(1, 2);
    y.at(0, 0) = 1;
    Matrix good(1, 2), bad(1, 2), tie(1, 2);
    good.at(0, 0) = 0.9;
    good.at(0, 1) = 0.1;
    bad.at(0, 0) = 0.2;
    bad.at(0, 1) = 0.8;
    tie.at(0, 0) = 0.5;
    tie.at(0, 1) = 0.5;
    CHECK(rank_loss(y, good).mean == 0.0);
    CHECK(rank_loss(y, bad).mean == 1.0);
    CHECK(rank_loss(y, bad).raw_mean == 1.0);
    CHECK(rank_loss(y, tie).mean == doctest::Approx(0.5));

    BinaryMatrix nopair(1, 2);  // all irrelevant: flagged, contributes 0
    const RankLossReport r = rank_loss(nopair, good);
    CHECK(r.mean == 0.0);
    CHECK(r.degenerate[0] == 1);
}

TEST_CASE("oracle equivalence on 1000 random pairs") {
    Pcg32 rng = substream(2024, "metric-oracle");
    for (int it = 0; it < 1000; ++it) {
        const std::size_t n = 1 + rng.bounded(20);
        const std::size_t m = 1 + rng.bounded(8);
        const BinaryMatrix y = random_bits(n, m, rng);
        const BinaryMatrix h = random_bits(n, m, rng);
        Matrix f(n, m);
        for (auto& v : f.data) v = rng.bounded(11) / 10.0;  // grid scores make ties frequent
        CHECK(std::abs(subset_zero_one(y, h).mean - oracle_subset01(y, h)) <= 1e-12);
        CHECK(std::abs(hamming(y, h).mean - oracle_hamming(y, h)) <= 1e-12);
        CHECK(std::abs(instance_f_measure(y, h).mean - oracle_f(y, h)) <= 1e-12);
        const auto [norm, raw] = oracle_rank(y, f);
        const RankLossReport r = rank_loss(y, f);
        CHECK(std::abs(r.mean - norm) <= 1e-12);
        CHECK(std::abs(r.raw_mean - raw) <= 1e-12);
    }
}

TEST_CASE("exact match zero forces the other metrics") {
    Pcg32 rng = substream(11, "forcing");
    for (int it = 0; it < 50; ++it) {
        const BinaryMatrix y = random_bits(1 + rng.bounded(10), 1 + rng.bounded(6), rng);
        CHECK(subset_zero_one(y, y).mean == 0.0);
        CHECK(hamming(y, y).mean == 0.0);
        CHECK(instance_f_measure(y, y).mean == 1.0);
    }
}

TEST_CASE("identical column permutation leaves metrics unchanged") {
    Pcg32 rng = substream(12, "perm");
    for (int it = 0; it < 50; ++it) {
        const std::size_t n = 1 + rng.bounded(10);
        const std::size_t m = 2 + rng.bounded(6);
        const BinaryMatrix y = random_bits(n, m, rng);
        const BinaryMatrix h = random_bits(n, m, rng);
        Matrix f(n, m);
        for (auto& v : f.data) v = rng.bounded(11) / 10.0;
        std::vector<int> perm = shuffled_indices(m, rng);
        const BinaryMatrix yp = y.select_cols(perm);
        const BinaryMatrix hp = h.select_cols(perm);
        const Matrix fp = f.select_cols(perm);
        CHECK(subset_zero_one(y, h).mean == subset_zero_one(yp, hp).mean);
        CHECK(hamming(y, h).mean == hamming(yp, hp).mean);
        CHECK(instance_f_measure(y, h).mean == instance_f_measure(yp, hp).mean);
        CHECK(rank_loss(y, f).mean == rank_loss(yp, fp).mean);
    }
}

TEST_CASE("rank loss is invariant under strictly monotone score transforms") {
    Pcg32 rng = substream(13, "monotone");
    for (int it = 0; it < 50; ++it) {
        const std::size_t n = 1 + rng.bounded(10);
        const std::size_t m = 2 + rng.bounded(6);
        const BinaryMatrix y = random_bits(n, m, rng);
        Matrix f(n, m);
        for (auto& v : f.data) v = rng.bounded(11) / 10.0;
        Matrix g = f;
        for (auto& v : g.data) v = std::exp(v) * 3.0 - 1.0;
        CHECK(rank_loss(y, f).mean == rank_loss(y, g).mean);
        CHECK(rank_loss(y, f).raw_mean == rank_loss(y, g).raw_mean);
    }
}
