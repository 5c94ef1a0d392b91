#include "doctest.h"

#include <cmath>

#include "automlc/core/rng.hpp"
#include "automlc/learners/sl.hpp"

using namespace automlc;

namespace {

SLDataset toy(std::vector<std::vector<double>> rows, std::vector<int> targets, int c) {
    SLDataset d;
    d.features = Matrix(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) d.features.at(i, j) = rows[i][j];
    d.targets = std::move(targets);
    d.class_count = c;
    return d;
}

SLDataset make_sl_data(Pcg32& rng, std::size_t n, std::size_t d, int c) {
    SLDataset data;
    data.features = Matrix(n, d);
    for (auto& v : data.features.data) v = rng.next_double() * 4.0 - 2.0;
    data.targets.resize(n);
    for (auto& t : data.targets) t = static_cast<int>(rng.bounded(static_cast<std::uint32_t>(c)));
    data.class_count = c;
    return data;
}

double training_error(const SLModel& m, const SLDataset& d) {
    const std::vector<int> p = m.predict(d.features);
    double wrong = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) wrong += p[i] != d.targets[i] ? 1.0 : 0.0;
    return wrong / static_cast<double>(p.size());
}

const std::vector<SLSpec>& all_specs() {
    static const std::vector<SLSpec> specs = [] {
        std::vector<SLSpec> out;
        const std::vector<SLAlgo> bases{SLAlgo::ZeroR,      SLAlgo::DecisionStump, SLAlgo::DecisionTree,
                                        SLAlgo::NaiveBayes, SLAlgo::Logistic,      SLAlgo::KNN};
        for (SLAlgo b : bases) out.push_back(SLSpec::make(b));
        for (SLAlgo m : {SLAlgo::Bagging, SLAlgo::AdaBoostM1, SLAlgo::RandomSubspace})
            for (SLAlgo b : bases) out.push_back(SLSpec::meta(m, SLSpec::make(b)));
        return out;
    }();
    return specs;
}

}  // namespace

TEST_CASE("ZeroR majority prediction and frequency scores") {
    const SLDataset d = toy({{0.0}, {1.0}, {2.0}}, {0, 0, 1}, 2);
    const SLModel m = fit_single_label(SLSpec::make(SLAlgo::ZeroR), d, 1);
    Matrix q(1, 1);
    q.at(0, 0) = 99.0;
    CHECK(m.predict(q) == std::vector<int>{0});
    const Matrix s = m.class_scores(q);
    CHECK(s.at(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(s.at(0, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("argmax tie-break goes to the smaller class id") {
    const SLDataset d = toy({{0.0}, {1.0}}, {0, 1}, 2);
    const SLModel m = fit_single_label(SLSpec::make(SLAlgo::ZeroR), d, 1);
    Matrix q(1, 1);
    CHECK(m.predict(q) == std::vector<int>{0});  // scores (0.5, 0.5)

    const SLDataset d2 = toy({{0.0}, {1.0}, {2.0}, {3.0}, {4.0}}, {0, 1, 1, 1, 1}, 2);
    const SLModel m2 = fit_single_label(SLSpec::make(SLAlgo::ZeroR), d2, 1);
    CHECK(m2.predict(q) == std::vector<int>{1});  // scores (0.2, 0.8)
}

TEST_CASE("KNN with k=1 reproduces training targets") {
    Pcg32 rng = substream(5, "knn");
    SLDataset d = make_sl_data(rng, 20, 3, 3);
    SLSpec spec = SLSpec::make(SLAlgo::KNN);
    spec.hyper.knn_k = 1;
    const SLModel m = fit_single_label(spec, d, 1);
    CHECK(m.predict(d.features) == d.targets);
}

TEST_CASE("KNN vote proportions") {
    SLSpec spec = SLSpec::make(SLAlgo::KNN);
    spec.hyper.knn_k = 3;
    const SLDataset d = toy({{0.0}, {0.1}, {0.2}, {9.0}}, {0, 0, 1, 1}, 2);
    const SLModel m = fit_single_label(spec, d, 1);
    Matrix q(1, 1);
    q.at(0, 0) = 0.05;  // neighbours: 0.0, 0.1, 0.2 -> classes {0,0,1}
    const Matrix s = m.class_scores(q);
    CHECK(s.at(0, 0) == doctest::Approx(2.0 / 3.0));
    CHECK(s.at(0, 1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("decision stump achieves the exhaustive-scan optimum on 1-d data") {
    const SLDataset d = toy({{0.0}, {1.0}, {2.0}, {3.0}}, {0, 0, 1, 1}, 2);
    const SLModel m = fit_single_label(SLSpec::make(SLAlgo::DecisionStump), d, 1);
    // oracle: best training accuracy over every threshold between sorted values
    double best_acc = 0.0;
    for (double thr : {-0.5, 0.5, 1.5, 2.5, 3.5}) {
        for (int flip = 0; flip < 2; ++flip) {
            double acc = 0.0;
            for (std::size_t i = 0; i < 4; ++i) {
                const int pred = (d.features.at(i, 0) <= thr) == (flip == 0) ? 0 : 1;
                acc += pred == d.targets[i] ? 0.25 : 0.0;
            }
            best_acc = std::max(best_acc, acc);
        }
    }
    CHECK(best_acc == 1.0);
    CHECK(training_error(m, d) == 0.0);
    // the split lies in (1,2): 1 goes left/class 0, 2 goes right/class 1
    Matrix q(2, 1);
    q.at(0, 0) = 1.0;
    q.at(1, 0) = 2.0;
    CHECK(m.predict(q) == std::vector<int>{0, 1});
}

TEST_CASE("batch predictions preserve order and length") {
    Pcg32 rng = substream(6, "batch");
    const SLDataset d = make_sl_data(rng, 30, 4, 3);
    const SLModel m = fit_single_label(SLSpec::make(SLAlgo::DecisionTree), d, 1);
    const std::vector<int> all = m.predict(d.features);
    CHECK(all.size() == 30);
    Matrix one(1, 4);
    for (std::size_t i = 0; i < 30; ++i) {
        for (std::size_t j = 0; j < 4; ++j) one.at(0, j) = d.features.at(i, j);
        CHECK(m.predict(one)[0] == all[i]);
    }
}

TEST_CASE("score rows are nonnegative and sum to one for every learner") {
    Pcg32 rng = substream(7, "scores");
    const SLDataset d = make_sl_data(rng, 25, 3, 3);
    for (const SLSpec& spec : all_specs()) {
        const SLModel m = fit_single_label(spec, d, 3);
        const Matrix s = m.class_scores(d.features);
        for (std::size_t i = 0; i < s.rows; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < s.cols; ++j) {
                CHECK(s.at(i, j) >= 0.0);
                sum += s.at(i, j);
            }
            CHECK(std::abs(sum - 1.0) <= 1e-9);
        }
    }
}

TEST_CASE("determinism: same spec, data, seed give identical scores") {
    Pcg32 rng = substream(8, "det");
    const SLDataset d = make_sl_data(rng, 20, 3, 2);
    for (const SLSpec& spec : all_specs()) {
        const Matrix a = fit_single_label(spec, d, 17).class_scores(d.features);
        const Matrix b = fit_single_label(spec, d, 17).class_scores(d.features);
        CHECK(a == b);
    }
}

TEST_CASE("fit totality on degenerate data") {
    const SLDataset constant = toy({{1.0, 2.0}, {1.0, 2.0}, {1.0, 2.0}}, {0, 1, 0}, 2);
    const SLDataset single_class = toy({{0.0}, {1.0}, {2.0}}, {1, 1, 1}, 2);
    const SLDataset one_row = toy({{0.5}}, {0}, 2);
    for (const SLSpec& spec : all_specs()) {
        for (const SLDataset* d : {&constant, &single_class, &one_row}) {
            const SLModel m = fit_single_label(spec, *d, 9);
            const std::vector<int> p = m.predict(d->features);
            CHECK(p.size() == d->targets.size());
        }
    }
    // single class: majority behaviour
    const SLModel m = fit_single_label(SLSpec::make(SLAlgo::DecisionTree), single_class, 1);
    CHECK(m.predict(single_class.features) == std::vector<int>{1, 1, 1});
}

TEST_CASE("unsupported nesting is rejected") {
    SLSpec no_base = SLSpec::make(SLAlgo::Bagging);
    CHECK_THROWS_AS(validate_spec(no_base), UnsupportedSpec);
    SLSpec meta_in_meta = SLSpec::meta(SLAlgo::Bagging, SLSpec::meta(SLAlgo::AdaBoostM1, SLSpec::make(SLAlgo::ZeroR)));
    CHECK_THROWS_AS(validate_spec(meta_in_meta), UnsupportedSpec);
    SLSpec base_with_base = SLSpec::make(SLAlgo::ZeroR);
    base_with_base.base.push_back(SLSpec::make(SLAlgo::KNN));
    CHECK_THROWS_AS(validate_spec(base_with_base), UnsupportedSpec);
}

TEST_CASE("bagging with one member and the full sample equals its base learner") {
    Pcg32 rng = substream(9, "bag1");
    const SLDataset d = make_sl_data(rng, 20, 3, 2);
    SLSpec spec = SLSpec::meta(SLAlgo::Bagging, SLSpec::make(SLAlgo::DecisionTree));
    spec.hyper.ensemble_members = 1;
    spec.hyper.bagging_bootstrap = false;
    const Matrix a = fit_single_label(spec, d, 5).class_scores(d.features);
    const Matrix b = fit_single_label(SLSpec::make(SLAlgo::DecisionTree), d, 5).class_scores(d.features);
    CHECK(a == b);
}

TEST_CASE("adaboost training error is non-increasing to zero on a separable toy set") {
    // diagonal boundary: no single stump separates it, boosting does
    std::vector<std::vector<double>> rows;
    std::vector<int> targets;
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b) {
            rows.push_back({static_cast<double>(a), static_cast<double>(b)});
            targets.push_back(a + b >= 5 ? 1 : 0);
        }
    const SLDataset d = toy(rows, targets, 2);

    double prev = 1.0;
    double last = 1.0;
    for (int rounds = 1; rounds <= 40; ++rounds) {
        SLSpec spec = SLSpec::meta(SLAlgo::AdaBoostM1, SLSpec::make(SLAlgo::DecisionStump));
        spec.hyper.boost_rounds = rounds;
        last = training_error(fit_single_label(spec, d, 3), d);
        CHECK(last <= prev + 1e-12);
        prev = last;
        if (last == 0.0) break;
    }
    CHECK(last == 0.0);
}

TEST_CASE("logistic gradient matches central finite differences") {
    Pcg32 rng = substream(10, "grad");
    for (int it = 0; it < 5; ++it) {
        const std::size_t n = 6 + rng.bounded(6);
        const std::size_t dn = 2 + rng.bounded(3);
        const int c = 2 + static_cast<int>(rng.bounded(2));
        const SLDataset d = make_sl_data(rng, n, dn, c);
        std::vector<double> w((dn + 1) * static_cast<std::size_t>(c));
        for (auto& x : w) x = rng.next_double() - 0.5;

        std::vector<double> grad;
        logistic_loss_grad(w, d.features, d.targets, c, 1e-4, &grad);

        const double h = 1e-5;
        for (std::size_t e = 0; e < w.size(); ++e) {
            std::vector<double> wp = w, wm = w;
            wp[e] += h;
            wm[e] -= h;
            const double fp = logistic_loss_grad(wp, d.features, d.targets, c, 1e-4, nullptr);
            const double fm = logistic_loss_grad(wm, d.features, d.targets, c, 1e-4, nullptr);
            const double fd = (fp - fm) / (2.0 * h);
            CHECK(std::abs(grad[e] - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("bootstrap_indices contract and uniformity") {
    CHECK(bootstrap_indices(1, 5) == std::vector<int>{0});
    const std::vector<int> idx = bootstrap_indices(10, 3);
    CHECK(idx.size() == 10);
    for (int i : idx) {
        CHECK(i >= 0);
        CHECK(i < 10);
    }
    CHECK(bootstrap_indices(10, 3) == idx);

    // 10,000 draws over n=10: each frequency within 3 binomial sigmas
    std::vector<int> counts(10, 0);
    for (int s = 0; s < 1000; ++s)
        for (int i : bootstrap_indices(10, 1000 + static_cast<std::uint64_t>(s))) ++counts[static_cast<std::size_t>(i)];
    const double sigma = std::sqrt(10000.0 * 0.1 * 0.9);
    for (int c : counts) CHECK(std::abs(c - 1000.0) <= 3.0 * sigma);
}
