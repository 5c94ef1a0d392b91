#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "automlc/core/parallel.hpp"
#include "automlc/harness/experiment.hpp"
#include "automlc/space/component_space.hpp"

namespace {

using namespace automlc;

int cmd_run(const ExperimentConfig& config, bool serial) {
    set_parallel_enabled(!serial);
    const RunReport report = run_experiment(config);
    std::printf("pipeline:   %s\n", report.chosen_pipeline.c_str());
    std::printf("internal:   %.4f (1 - instance F on validation splits)\n", report.internal_score);
    std::printf("test F:     %.4f\n", report.test.instance_f);
    std::printf("test exact: %.4f   hamming: %.4f   rank: %.4f\n", report.test.exact_match_accuracy,
                report.test.hamming_loss, report.test.rank_loss);
    std::printf("evaluated:  %llu candidates in %.2fs\n",
                static_cast<unsigned long long>(report.candidates_evaluated), report.wall_seconds);
    if (!report.report_path.empty()) std::printf("report:     %s\n", report.report_path.c_str());
    return 0;
}

int cmd_space(const std::string& file) {
    const ComponentSpace space = file.empty() ? default_space() : load_space_file(file);
    const std::vector<Plan> plans = enumerate_plans(space);
    std::printf("fingerprint: %s\n", space.fingerprint().c_str());
    std::printf("pipelines:   %llu\n", static_cast<unsigned long long>(count_pipelines(space)));
    for (const Plan& p : plans) std::printf("%s\n", serialize(interpret(p, space)).c_str());
    return 0;
}

int cmd_gen_fixture(const std::string& kind, std::size_t n, std::size_t m, std::size_t d, std::uint64_t seed,
                    std::string out) {
    LabeledDataset ds;
    if (kind == "independent")
        ds = gen_independent(n, m, d, seed);
    else if (kind == "chain")
        ds = gen_chain(n, m, d, seed);
    else if (kind == "dependent")
        ds = gen_dependent(n, seed);
    else
        throw std::invalid_argument("unknown fixture kind '" + kind + "'");
    if (out.empty()) out = kind + ".arff";
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write '" + out + "'");
    f << write_arff(ds);
    std::printf("wrote %s (%zu instances, %zu labels, %zu attributes)\n", out.c_str(), ds.n(), ds.m(), ds.d());
    return 0;
}

int cmd_summarize(const std::string& in_dir, const std::string& out_csv) {
    const std::vector<RunReport> reports = load_reports(in_dir);
    if (reports.empty()) {
        std::fprintf(stderr, "no run reports under '%s'\n", in_dir.c_str());
        return 1;
    }
    std::string aligned;
    const std::string csv = summarize(reports, SummaryOptions{}, &aligned);
    std::printf("%s", aligned.c_str());
    if (!out_csv.empty()) {
        std::ofstream f(out_csv);
        f << csv;
        std::printf("csv: %s\n", out_csv.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AutoML for multi-label classification: hierarchical decomposition search over "
                 "multi-label/single-label learner pipelines"};
    app.require_subcommand(1);

    // run
    automlc::ExperimentConfig config;
    double budget_seconds = 0.0;
    std::uint64_t budget_evals = 0;
    double eval_limit = 0.0;
    bool serial = false;
    auto* run = app.add_subcommand("run", "run one experiment: outer split, optimizer, test metrics");
    run->add_option("--data", config.dataset_path, "multi-label ARFF file")->required();
    run->add_option("--optimizer", config.optimizer, "mlplan | random")->default_val("mlplan");
    auto* bs = run->add_option("--budget-seconds", budget_seconds, "wall-clock budget");
    auto* be = run->add_option("--budget-evals", budget_evals, "candidate-evaluation budget (deterministic)");
    bs->excludes(be);
    run->add_option("--eval-limit", eval_limit, "per-candidate evaluation limit, seconds (0 = unlimited)");
    run->add_option("--seed", config.seed, "run seed")->default_val(0);
    run->add_option("--split-fraction", config.split_fraction, "outer train fraction")->default_val(0.7);
    run->add_option("--out", config.out_dir, "directory for the report and event log");
    run->add_option("--space", config.space_file, "restricted component space file");
    run->add_option("--completions", config.search.completions, "random completions per node")->default_val(3);
    run->add_option("--repetitions", config.search.repetitions, "validation splits per candidate")->default_val(3);
    run->add_option("--k", config.search.selection_k, "phase-2 selection pool parameter")->default_val(10);
    run->add_flag("--serial", serial, "disable the OpenMP kernels");

    // summarize
    std::string in_dir, out_csv;
    auto* summ = app.add_subcommand("summarize", "aggregate run reports into a comparison table");
    summ->add_option("--in", in_dir, "directory of run reports")->required();
    summ->add_option("--out", out_csv, "CSV output path");

    // space
    std::string space_file;
    auto* spc = app.add_subcommand("space", "print the pipeline count and listing of the component space");
    spc->add_option("--file", space_file, "space file (default: built-in portfolio)");

    // gen-fixture
    std::string kind = "independent", fixture_out;
    std::size_t gn = 150, gm = 3, gd = 6;
    std::uint64_t gseed = 0;
    auto* gen = app.add_subcommand("gen-fixture", "write a synthetic multi-label ARFF dataset");
    gen->add_option("--kind", kind, "independent | chain | dependent")->required();
    gen->add_option("--n", gn, "instances")->default_val(150);
    gen->add_option("--m", gm, "labels")->default_val(3);
    gen->add_option("--d", gd, "features")->default_val(6);
    gen->add_option("--seed", gseed, "generator seed")->default_val(0);
    gen->add_option("--out", fixture_out, "output path (default <kind>.arff)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (bs->count() == 0 && be->count() == 0) {
                std::fprintf(stderr, "error: one of --budget-seconds / --budget-evals is required\n");
                return 2;
            }
            config.budget = bs->count() ? automlc::Budget::wall_seconds(budget_seconds, eval_limit)
                                        : automlc::Budget::evaluations(budget_evals, eval_limit);
            return cmd_run(config, serial);
        }
        if (summ->parsed()) return cmd_summarize(in_dir, out_csv);
        if (spc->parsed()) return cmd_space(space_file);
        if (gen->parsed()) return cmd_gen_fixture(kind, gn, gm, gd, gseed, fixture_out);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
