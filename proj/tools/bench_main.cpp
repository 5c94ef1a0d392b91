// Benchmark of the OpenMP kernels against the serial reference path.
// Both paths are bit-identical by construction; this tool reports the
// wall-clock difference on representative workloads.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "CLI11.hpp"

#include "automlc/core/parallel.hpp"
#include "automlc/harness/experiment.hpp"
#include "automlc/learners/ml.hpp"
#include "automlc/search/search.hpp"

namespace {

using namespace automlc;
using Clock = std::chrono::steady_clock;

double time_call(const std::function<void()>& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        const auto t1 = Clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void report(const std::string& name, const std::function<void()>& fn, int reps) {
    set_parallel_enabled(false);
    const double serial = time_call(fn, reps);
    set_parallel_enabled(true);
    const double parallel = time_call(fn, reps);
    std::printf("%-28s serial %8.3f ms   omp(%d) %8.3f ms   speedup %.2fx\n", name.c_str(), serial * 1e3,
                parallel_threads(), parallel * 1e3, parallel > 0 ? serial / parallel : 0.0);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel benchmark"};
    std::size_t n = 3000, d = 24, m = 4;
    int reps = 3;
    app.add_option("--n", n, "instances")->default_val(3000);
    app.add_option("--d", d, "features")->default_val(24);
    app.add_option("--m", m, "labels")->default_val(4);
    app.add_option("--reps", reps, "repetitions per measurement (best is kept)")->default_val(3);
    CLI11_PARSE(app, argc, argv);

    const LabeledDataset ds = gen_independent(n, m, d, 7);
    const MLDataset data{encode_features(ds), ds.labels};
    std::printf("workload: n=%zu d=%zu m=%zu, %d thread(s) with OpenMP\n\n", n, d, m, parallel_threads());

    const SLSpec tree = SLSpec::make(SLAlgo::DecisionTree);
    const SLSpec knn = SLSpec::make(SLAlgo::KNN);
    const SLSpec logistic = SLSpec::make(SLAlgo::Logistic);

    SLDataset binary;
    binary.features = data.features;
    binary.class_count = 2;
    for (std::size_t i = 0; i < data.labels.rows; ++i) binary.targets.push_back(data.labels.at(i, 0));

    report("decision tree fit", [&] { fit_single_label(tree, binary, 1); }, reps);
    report("logistic fit", [&] { fit_single_label(logistic, binary, 1); }, reps);

    const SLModel knn_model = fit_single_label(knn, binary, 1);
    report("knn batch predict", [&] { predict_class_scores(knn_model, data.features); }, reps);

    const SLSpec bagged_tree = SLSpec::meta(SLAlgo::Bagging, tree);
    report("bagging(tree) fit", [&] { fit_single_label(bagged_tree, binary, 1); }, reps);

    const MLSpec br_tree = MLSpec::base(MLAlgo::BR, tree);
    report("BR(tree) fit", [&] { fit_multi_label(br_tree, data, 1); }, reps);

    const MLSpec cc_logistic = MLSpec::base(MLAlgo::CC, logistic);
    report("CC(logistic) fit", [&] { fit_multi_label(cc_logistic, data, 1); }, reps);

    const MLModel cc_model = fit_multi_label(cc_logistic, data, 1);
    report("CC(logistic) predict", [&] { cc_model.predict(data.features); }, reps);

    std::vector<int> rows(n);
    for (std::size_t i = 0; i < n; ++i) rows[i] = static_cast<int>(i);
    const SearchData sd = make_search_data(data.features, data.labels, rows);
    const MLSpec heavy = MLSpec::meta(MLAlgo::BaggingML, MLSpec::base(MLAlgo::LC, tree));
    report("candidate evaluation", [&] { evaluate_candidate(heavy, sd, 11, 3); }, reps);

    return 0;
}
