#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "automlc/core/rng.hpp"
#include "automlc/harness/experiment.hpp"
#include "automlc/learners/ml.hpp"
#include "automlc/metrics/metrics.hpp"

using namespace automlc;

namespace {

MLDataset toy_ml(std::vector<std::vector<double>> x, std::vector<std::vector<int>> y) {
    MLDataset d;
    d.features = Matrix(x.size(), x[0].size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x[i].size(); ++j) d.features.at(i, j) = x[i][j];
    d.labels = BinaryMatrix(y.size(), y[0].size());
    for (std::size_t i = 0; i < y.size(); ++i)
        for (std::size_t j = 0; j < y[i].size(); ++j) d.labels.at(i, j) = static_cast<std::uint8_t>(y[i][j]);
    return d;
}

MLDataset random_ml(Pcg32& rng, std::size_t n, std::size_t d, std::size_t m) {
    MLDataset data;
    data.features = Matrix(n, d);
    for (auto& v : data.features.data) v = rng.next_double() * 2.0 - 1.0;
    data.labels = BinaryMatrix(n, m);
    for (auto& v : data.labels.data) v = static_cast<std::uint8_t>(rng.bounded(2));
    return data;
}

std::vector<std::uint8_t> bits(std::initializer_list<int> v) {
    std::vector<std::uint8_t> out;
    for (int x : v) out.push_back(static_cast<std::uint8_t>(x));
    return out;
}

}  // namespace

TEST_CASE("majority label set memorizes the modal vector") {
    const MLDataset d = toy_ml({{0.0}, {0.0}, {0.0}}, {{1, 0}, {1, 0}, {0, 1}});
    const MLModel m = fit_multi_label(MLSpec::majority(), d, 1);
    const MLPrediction p = m.predict(d.features);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(p.labels.at(i, 0) == 1);
        CHECK(p.labels.at(i, 1) == 0);
    }
}

TEST_CASE("BR with ZeroR thresholds the label means") {
    MLDataset d = toy_ml({{0.0}}, {{1, 0}});
    d.features = Matrix(10, 1);
    d.labels = BinaryMatrix(10, 2);
    for (std::size_t i = 0; i < 8; ++i) d.labels.at(i, 0) = 1;  // means (0.8, 0.2)
    for (std::size_t i = 0; i < 2; ++i) d.labels.at(i, 1) = 1;
    const MLModel m = fit_multi_label(MLSpec::base(MLAlgo::BR, SLSpec::make(SLAlgo::ZeroR)), d, 1);
    const MLPrediction p = m.predict(d.features);
    CHECK(p.labels.at(0, 0) == 1);
    CHECK(p.labels.at(0, 1) == 0);
    CHECK(p.scores.at(0, 0) == doctest::Approx(0.8));
    CHECK(p.scores.at(0, 1) == doctest::Approx(0.2));
}

TEST_CASE("CC with a single label equals BR") {
    Pcg32 rng = substream(21, "ccbr");
    const MLDataset d = random_ml(rng, 30, 3, 1);
    const MLModel cc = fit_multi_label(MLSpec::base(MLAlgo::CC, SLSpec::make(SLAlgo::DecisionTree)), d, 7);
    const MLModel br = fit_multi_label(MLSpec::base(MLAlgo::BR, SLSpec::make(SLAlgo::DecisionTree)), d, 7);
    CHECK(cc.predict(d.features).labels == br.predict(d.features).labels);
    CHECK(cc.predict(d.features).scores == br.predict(d.features).scores);
}

TEST_CASE("CC is deterministic and seed changes only the order") {
    Pcg32 rng = substream(22, "ccdet");
    const MLDataset d = random_ml(rng, 25, 3, 4);
    const MLSpec spec = MLSpec::base(MLAlgo::CC, SLSpec::make(SLAlgo::NaiveBayes));
    const MLPrediction a = fit_multi_label(spec, d, 3).predict(d.features);
    const MLPrediction b = fit_multi_label(spec, d, 3).predict(d.features);
    CHECK(a.labels == b.labels);
    CHECK(a.scores == b.scores);
    const MLPrediction c = fit_multi_label(spec, d, 4).predict(d.features);
    CHECK(c.labels.rows == a.labels.rows);
    CHECK(c.labels.cols == a.labels.cols);
}

TEST_CASE("label powerset encode/decode") {
    BinaryMatrix rows(3, 2);
    rows.at(0, 1) = 1;  // (0,1)
    rows.at(1, 0) = 1;  // (1,0)
    rows.at(2, 1) = 1;  // (0,1)
    const auto [ids, cb] = label_powerset_encode(rows);
    CHECK(ids == std::vector<int>{0, 1, 0});
    CHECK(cb.size() == 2);
    CHECK(label_powerset_decode(ids, cb) == rows);
    CHECK_THROWS_AS(label_powerset_decode({2}, cb), UnknownClassId);

    BinaryMatrix same(4, 3);
    for (std::size_t i = 0; i < 4; ++i) same.at(i, 1) = 1;
    CHECK(label_powerset_encode(same).second.size() == 1);

    Pcg32 rng = substream(23, "lp");
    for (int it = 0; it < 20; ++it) {
        const BinaryMatrix m = random_ml(rng, 10, 1, 4).labels;
        const auto [i2, c2] = label_powerset_encode(m);
        CHECK(label_powerset_decode(i2, c2) == m);
    }
}

TEST_CASE("prune_label_sets examples") {
    // p=1 keeps everything as-is
    Pcg32 rng = substream(24, "ps1");
    const BinaryMatrix any = random_ml(rng, 12, 1, 3).labels;
    const auto kept = prune_label_sets(any, 1, 2);
    REQUIRE(kept.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(kept[i].row == static_cast<int>(i));
        CHECK(kept[i].labels == any.row_vec(i));
    }

    // all counts >= p: all kept
    BinaryMatrix freq(6, 2);
    for (std::size_t i = 0; i < 3; ++i) freq.at(i, 0) = 1;              // (1,0) x3
    for (std::size_t i = 3; i < 6; ++i) freq.at(i, 0) = freq.at(i, 1) = 1;  // (1,1) x3
    CHECK(prune_label_sets(freq, 2, 2).size() == 6);

    // the rare (1,1,1) is re-expressed as its two frequent strict sub-vectors
    BinaryMatrix mix(11, 3);
    for (std::size_t i = 0; i < 5; ++i) {
        mix.at(i, 0) = 1;
        mix.at(i, 1) = 1;
    }
    for (std::size_t i = 5; i < 10; ++i) {
        mix.at(i, 1) = 1;
        mix.at(i, 2) = 1;
    }
    mix.at(10, 0) = mix.at(10, 1) = mix.at(10, 2) = 1;
    const auto pruned = prune_label_sets(mix, 2, 2);
    REQUIRE(pruned.size() == 12);
    std::set<std::vector<std::uint8_t>> expansions;
    for (const auto& pi : pruned)
        if (pi.row == 10) expansions.insert(pi.labels);
    CHECK(expansions == std::set<std::vector<std::uint8_t>>{bits({1, 1, 0}), bits({0, 1, 1})});
}

TEST_CASE("prune_label_sets against a brute-force oracle") {
    Pcg32 rng = substream(25, "psprop");
    for (int it = 0; it < 30; ++it) {
        const std::size_t n = 4 + rng.bounded(12);
        const std::size_t m = 2 + rng.bounded(3);
        const BinaryMatrix labels = random_ml(rng, n, 1, m).labels;
        const int p = 1 + static_cast<int>(rng.bounded(3));
        const int b = static_cast<int>(rng.bounded(3));

        // oracle: literal restatement with exhaustive subset enumeration
        std::map<std::vector<std::uint8_t>, int> counts;
        for (std::size_t i = 0; i < n; ++i) ++counts[labels.row_vec(i)];
        std::vector<PrunedInstance> expected;
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = labels.row_vec(i);
            if (counts[v] >= p) {
                expected.push_back({static_cast<int>(i), v});
                continue;
            }
            struct C {
                std::vector<std::uint8_t> pat;
                int count;
                int card;
            };
            std::vector<C> cands;
            for (const auto& [pat, cnt] : counts) {
                if (cnt < p || pat == v) continue;
                bool sub = true;
                int card = 0;
                for (std::size_t j = 0; j < m; ++j) {
                    sub = sub && !(pat[j] && !v[j]);
                    card += pat[j];
                }
                if (sub) cands.push_back({pat, cnt, card});
            }
            std::stable_sort(cands.begin(), cands.end(), [](const C& a, const C& c) {
                if (a.count != c.count) return a.count > c.count;
                if (a.card != c.card) return a.card > c.card;
                return a.pat < c.pat;
            });
            for (int t = 0; t < b && t < static_cast<int>(cands.size()); ++t)
                expected.push_back({static_cast<int>(i), cands[static_cast<std::size_t>(t)].pat});
        }

        const auto got = prune_label_sets(labels, p, b);
        REQUIRE(got.size() == expected.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].row == expected[i].row);
            CHECK(got[i].labels == expected[i].labels);
        }
    }
}

TEST_CASE("draw_label_subsets contract") {
    // k = m: every subset is the full label set
    for (const auto& s : draw_label_subsets(4, 4, 3, 9))
        CHECK(s == std::vector<int>{0, 1, 2, 3});

    // m=6, k=3, 4 subsets cover all labels
    const auto subsets = draw_label_subsets(6, 3, 4, 11);
    CHECK(subsets.size() == 4);
    std::set<int> covered;
    for (const auto& s : subsets) {
        CHECK(s.size() == 3);
        CHECK(std::is_sorted(s.begin(), s.end()));
        covered.insert(s.begin(), s.end());
    }
    CHECK(covered.size() == 6);

    CHECK(draw_label_subsets(6, 3, 4, 11) == subsets);  // deterministic
    CHECK_THROWS_AS(draw_label_subsets(4, 5, 2, 1), InvalidK);
    CHECK_THROWS_AS(draw_label_subsets(4, 0, 2, 1), InvalidK);

    // coverage holds across many seeds
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        std::set<int> cov;
        for (const auto& s : draw_label_subsets(7, 2, 7, seed)) cov.insert(s.begin(), s.end());
        CHECK(cov.size() == 7);
    }
}

TEST_CASE("BR with a perfect per-label base gives zero training hamming loss") {
    // features reveal the labels directly; the tree nails each column
    Pcg32 rng = substream(26, "brperfect");
    MLDataset d = random_ml(rng, 40, 3, 3);
    for (std::size_t i = 0; i < 40; ++i)
        for (std::size_t j = 0; j < 3; ++j) d.features.at(i, j) = d.labels.at(i, j);
    const MLModel m = fit_multi_label(MLSpec::base(MLAlgo::BR, SLSpec::make(SLAlgo::DecisionTree)), d, 1);
    CHECK(hamming(d.labels, m.predict(d.features).labels).mean == 0.0);
}

TEST_CASE("LC training-set predictions stay inside the observed combinations") {
    Pcg32 rng = substream(27, "lcobs");
    const MLDataset d = random_ml(rng, 30, 4, 4);
    std::set<std::vector<std::uint8_t>> observed;
    for (std::size_t i = 0; i < d.labels.rows; ++i) observed.insert(d.labels.row_vec(i));
    const MLModel m = fit_multi_label(MLSpec::base(MLAlgo::LC, SLSpec::make(SLAlgo::KNN)), d, 2);
    const MLPrediction p = m.predict(d.features);
    for (std::size_t i = 0; i < p.labels.rows; ++i) CHECK(observed.count(p.labels.row_vec(i)) == 1);
}

TEST_CASE("RAkEL with k=m and a single subset equals LC") {
    Pcg32 rng = substream(28, "rakel");
    const MLDataset d = random_ml(rng, 30, 3, 3);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        MLSpec rk = MLSpec::base(MLAlgo::RAkEL, SLSpec::make(SLAlgo::DecisionTree));
        rk.hyper.rakel_k = 3;
        rk.hyper.rakel_count = 1;
        const MLSpec lc = MLSpec::base(MLAlgo::LC, SLSpec::make(SLAlgo::DecisionTree));
        const BinaryMatrix a = fit_multi_label(rk, d, seed).predict(d.features).labels;
        const BinaryMatrix b = fit_multi_label(lc, d, seed).predict(d.features).labels;
        CHECK(a == b);
    }
}

TEST_CASE("LC exploits label dependence where BR cannot") {
    const LabeledDataset ds = gen_dependent(1000, 42);
    const Matrix X = encode_features(ds);
    const SplitPair split = random_split(ds.n(), 0.7, 7);
    const MLDataset train{X.select_rows(split.train_indices), ds.labels.select_rows(split.train_indices)};
    const Matrix test_x = X.select_rows(split.test_indices);
    const BinaryMatrix test_y = ds.labels.select_rows(split.test_indices);

    const MLModel lc = fit_multi_label(MLSpec::base(MLAlgo::LC, SLSpec::make(SLAlgo::DecisionTree)), train, 1);
    const MLModel br = fit_multi_label(MLSpec::base(MLAlgo::BR, SLSpec::make(SLAlgo::DecisionTree)), train, 1);
    const double lc_loss = subset_zero_one(test_y, lc.predict(test_x).labels).mean;
    const double br_loss = subset_zero_one(test_y, br.predict(test_x).labels).mean;
    // analytic gap: best joint predictor loses 0.6, best marginal predictor 0.8
    CHECK(lc_loss <= br_loss - 0.1);
}

TEST_CASE("meta wrappers fit, predict, and are deterministic") {
    Pcg32 rng = substream(29, "mlmeta");
    const MLDataset d = random_ml(rng, 30, 4, 3);
    for (MLAlgo meta : {MLAlgo::BaggingML, MLAlgo::EnsembleML, MLAlgo::RandomSubspaceML}) {
        for (const MLSpec& inner : {MLSpec::base(MLAlgo::CC, SLSpec::make(SLAlgo::NaiveBayes)), MLSpec::majority()}) {
            const MLSpec spec = MLSpec::meta(meta, inner);
            const MLPrediction a = fit_multi_label(spec, d, 5).predict(d.features);
            const MLPrediction b = fit_multi_label(spec, d, 5).predict(d.features);
            CHECK(a.labels == b.labels);
            CHECK(a.scores == b.scores);
            CHECK(a.labels.cols == 3);
            for (double v : a.scores.data) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }
}

TEST_CASE("malformed multi-label specs are rejected") {
    MLSpec br_both = MLSpec::base(MLAlgo::BR, SLSpec::make(SLAlgo::ZeroR));
    br_both.ml_child.push_back(MLSpec::majority());
    CHECK_THROWS_AS(validate_spec(br_both), UnsupportedSpec);
    MLSpec meta_no_child;
    meta_no_child.algo = MLAlgo::BaggingML;
    CHECK_THROWS_AS(validate_spec(meta_no_child), UnsupportedSpec);
    MLSpec meta_meta = MLSpec::meta(MLAlgo::BaggingML, MLSpec::meta(MLAlgo::EnsembleML, MLSpec::majority()));
    CHECK_THROWS_AS(validate_spec(meta_meta), UnsupportedSpec);
    MLSpec mls_with_child = MLSpec::majority();
    mls_with_child.sl_child.push_back(SLSpec::make(SLAlgo::ZeroR));
    CHECK_THROWS_AS(validate_spec(mls_with_child), UnsupportedSpec);
    MLSpec ps_no_child;
    ps_no_child.algo = MLAlgo::PS;
    CHECK_THROWS_AS(validate_spec(ps_no_child), UnsupportedSpec);
}

TEST_CASE("PS trains and predicts like a pruned powerset") {
    Pcg32 rng = substream(30, "ps");
    const MLDataset d = random_ml(rng, 40, 3, 3);
    const MLModel m = fit_multi_label(MLSpec::base(MLAlgo::PS, SLSpec::make(SLAlgo::DecisionTree)), d, 3);
    const MLPrediction p = m.predict(d.features);
    CHECK(p.labels.rows == 40);
    CHECK(p.labels.cols == 3);
    // predictions decode through the pruned codebook: patterns seen in training
    std::set<std::vector<std::uint8_t>> observed;
    for (std::size_t i = 0; i < d.labels.rows; ++i) observed.insert(d.labels.row_vec(i));
    // sub-vector re-expression may introduce subsets of observed patterns; a
    // predicted pattern must at least be a subset of some observed one
    for (std::size_t i = 0; i < p.labels.rows; ++i) {
        const auto v = p.labels.row_vec(i);
        bool covered = false;
        for (const auto& o : observed) {
            bool sub = true;
            for (std::size_t j = 0; j < v.size(); ++j) sub = sub && !(v[j] && !o[j]);
            covered = covered || sub;
        }
        CHECK(covered);
    }
}
