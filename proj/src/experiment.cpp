#include "automlc/harness/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"

#include "automlc/harness/stats.hpp"
#include "automlc/learners/ml.hpp"
#include "automlc/metrics/metrics.hpp"

namespace automlc {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string dataset_stem(const std::string& path) {
    const fs::path p(path);
    return p.stem().string();
}

std::string budget_descriptor(const Budget& b) {
    if (b.kind == Budget::Kind::Evaluations) return "evals:" + std::to_string(b.total_evals);
    std::ostringstream os;
    os << "seconds:" << b.total_seconds;
    return os.str();
}

std::string budget_tag(const Budget& b) {
    if (b.kind == Budget::Kind::Evaluations) return "evals" + std::to_string(b.total_evals);
    std::ostringstream os;
    os << "sec" << b.total_seconds;
    return os.str();
}

json budget_to_json(const Budget& b) {
    json j;
    j["kind"] = b.kind == Budget::Kind::Evaluations ? "evaluations" : "wall-seconds";
    j["total_evals"] = b.total_evals;
    j["total_seconds"] = b.total_seconds;
    j["per_candidate_seconds"] = b.per_candidate_seconds;
    return j;
}

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["dataset"] = c.dataset_path;
    j["space_file"] = c.space_file;
    j["optimizer"] = c.optimizer;
    j["split_fraction"] = c.split_fraction;
    j["seed"] = c.seed;
    j["budget"] = budget_to_json(c.budget);
    j["completions"] = c.search.completions;
    j["repetitions"] = c.search.repetitions;
    j["selection_k"] = c.search.selection_k;
    j["phase2_repetitions"] = c.search.phase2_repetitions;
    j["inner_split_fraction"] = c.search.split_fraction;
    return j;
}

}  // namespace

std::string event_to_json(const SearchEvent& ev) {
    json j;
    j["seq"] = ev.seq;
    j["i"] = ev.eval_index;
    j["t"] = ev.t;
    j["kind"] = event_kind_name(ev.kind);
    j["pipeline"] = ev.pipeline;
    j["score"] = ev.score;
    j["phase"] = ev.phase;
    if (ev.cached) j["cached"] = true;
    if (ev.pruned) j["pruned"] = true;
    if (!ev.touched.empty()) j["touched"] = ev.touched;
    return j.dump();
}

std::string report_to_json(const RunReport& r) {
    json j;
    j["config"] = config_to_json(r.config);
    j["space_fingerprint"] = r.space_fingerprint;
    j["chosen_pipeline"] = r.chosen_pipeline;
    j["internal_score"] = r.internal_score;
    j["test_metrics"] = {{"exact_match_accuracy", r.test.exact_match_accuracy},
                         {"hamming_loss", r.test.hamming_loss},
                         {"instance_f", r.test.instance_f},
                         {"rank_loss", r.test.rank_loss},
                         {"rank_loss_raw", r.test.rank_loss_raw}};
    j["candidates_evaluated"] = r.candidates_evaluated;
    j["wall_seconds"] = r.wall_seconds;
    j["train_indices"] = r.train_indices;
    j["test_indices"] = r.test_indices;
    j["event_log"] = r.event_log_path;
    j["conventions"] = {{"instance_f_empty_sets", 1.0},
                        {"rank_loss_default", "pair-normalized"},
                        {"summary_std", "population"}};
    return j.dump(2);
}

RunReport run_experiment(const ExperimentConfig& config) {
    if (config.optimizer != "mlplan" && config.optimizer != "random")
        throw std::invalid_argument("unknown optimizer '" + config.optimizer + "'");
    if (config.split_fraction <= 0.0 || config.split_fraction >= 1.0)
        throw std::invalid_argument("split fraction must lie in (0,1)");
    if (config.search.completions < 1 || config.search.repetitions < 1 || config.search.selection_k < 1 ||
        config.search.phase2_repetitions < 1)
        throw std::invalid_argument("search knobs must be positive");

    const LabeledDataset ds = parse_arff_file(config.dataset_path);
    const Matrix X = encode_features(ds);

    const SplitPair outer = random_split(ds.n(), config.split_fraction, substream_seed(config.seed, "outer-split"));
    const SearchData search_data = make_search_data(X, ds.labels, outer.train_indices);

    const ComponentSpace space = config.space_file.empty() ? default_space() : load_space_file(config.space_file);

    SearchConfig sc = config.search;
    SearchResult sr = config.optimizer == "mlplan"
                          ? run_mlplan(space, search_data, config.budget, config.seed, sc)
                          : run_random_search(space, search_data, config.budget, config.seed, sc);

    // refit the chosen pipeline on the full search portion, score the
    // untouched outer test portion
    const MLSpec final_spec = to_ml_spec(sr.final_pipeline);
    const MLDataset train{X.select_rows(outer.train_indices), ds.labels.select_rows(outer.train_indices)};
    const MLModel model = fit_multi_label(final_spec, train, substream_seed(config.seed, "final-fit"));
    const Matrix test_x = X.select_rows(outer.test_indices);
    const BinaryMatrix test_y = ds.labels.select_rows(outer.test_indices);
    const MLPrediction pred = model.predict(test_x);

    RunReport report;
    report.config = config;
    report.space_fingerprint = space.fingerprint();
    report.chosen_pipeline = sr.final_serialization;
    report.internal_score = sr.internal_score;
    report.test.exact_match_accuracy = 1.0 - subset_zero_one(test_y, pred.labels).mean;
    report.test.hamming_loss = hamming(test_y, pred.labels).mean;
    report.test.instance_f = instance_f_measure(test_y, pred.labels).mean;
    const RankLossReport rl = rank_loss(test_y, pred.scores);
    report.test.rank_loss = rl.mean;
    report.test.rank_loss_raw = rl.raw_mean;
    report.candidates_evaluated = sr.evaluations_used;
    report.wall_seconds = sr.wall_seconds;
    report.train_indices = outer.train_indices;
    report.test_indices = outer.test_indices;
    report.events = std::move(sr.events);

    if (!config.out_dir.empty()) {
        fs::create_directories(config.out_dir);
        const std::string stem = dataset_stem(config.dataset_path) + "__" + config.optimizer + "__" +
                                 budget_tag(config.budget) + "__seed" + std::to_string(config.seed);
        report.event_log_path = (fs::path(config.out_dir) / (stem + ".events.jsonl")).string();
        report.report_path = (fs::path(config.out_dir) / (stem + ".json")).string();

        std::ofstream ev(report.event_log_path);
        for (const SearchEvent& e : report.events) ev << event_to_json(e) << '\n';
        ev.close();

        std::ofstream out(report.report_path);
        out << report_to_json(report) << '\n';
    }
    return report;
}

std::vector<RunReport> load_reports(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (entry.path().extension() != ".json") continue;
        files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());

    std::vector<RunReport> reports;
    for (const std::string& f : files) {
        std::ifstream in(f);
        json j;
        try {
            in >> j;
        } catch (const json::exception&) {
            continue;  // not a report
        }
        if (!j.contains("config") || !j.contains("test_metrics")) continue;
        RunReport r;
        r.config.dataset_path = j["config"].value("dataset", "");
        r.config.optimizer = j["config"].value("optimizer", "");
        r.config.seed = j["config"].value("seed", 0ULL);
        r.config.split_fraction = j["config"].value("split_fraction", 0.7);
        const json& b = j["config"]["budget"];
        r.config.budget.kind =
            b.value("kind", "evaluations") == "evaluations" ? Budget::Kind::Evaluations : Budget::Kind::WallSeconds;
        r.config.budget.total_evals = b.value("total_evals", 0ULL);
        r.config.budget.total_seconds = b.value("total_seconds", 0.0);
        r.space_fingerprint = j.value("space_fingerprint", "");
        r.chosen_pipeline = j.value("chosen_pipeline", "");
        r.internal_score = j.value("internal_score", 1.0);
        r.test.exact_match_accuracy = j["test_metrics"].value("exact_match_accuracy", 0.0);
        r.test.hamming_loss = j["test_metrics"].value("hamming_loss", 0.0);
        r.test.instance_f = j["test_metrics"].value("instance_f", 0.0);
        r.test.rank_loss = j["test_metrics"].value("rank_loss", 0.0);
        r.test.rank_loss_raw = j["test_metrics"].value("rank_loss_raw", 0.0);
        r.candidates_evaluated = j.value("candidates_evaluated", 0ULL);
        r.report_path = f;
        reports.push_back(std::move(r));
    }
    return reports;
}

std::string summarize(const std::vector<RunReport>& reports, const SummaryOptions& opts, std::string* aligned_out) {
    // cell key: dataset stem, budget descriptor, optimizer
    struct Cell {
        std::vector<double> f;
    };
    std::map<std::pair<std::string, std::string>, std::map<std::string, Cell>> rows;
    for (const RunReport& r : reports)
        rows[{dataset_stem(r.config.dataset_path), budget_descriptor(r.config.budget)}][r.config.optimizer].f.push_back(
            r.test.instance_f);

    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4f", v);
        return std::string(buf);
    };

    std::ostringstream csv;
    csv << "# instance-F summary; std is population (N divisor); marks: improvement/degradation of mlplan vs random "
           "at p<"
        << opts.significance_p << "\n";
    csv << "dataset,budget,optimizer,runs,mean_instance_f,std_instance_f,significance\n";

    std::ostringstream text;
    text << "dataset          budget        optimizer  runs  instance-F (mean+/-std)  vs random\n";

    for (const auto& [key, cells] : rows) {
        const auto mlplan_it = cells.find("mlplan");
        const auto random_it = cells.find("random");
        std::string mark;  // applies to the mlplan cell
        if (mlplan_it != cells.end() && random_it != cells.end() && mlplan_it->second.f.size() >= 2 &&
            random_it->second.f.size() >= 2) {
            const WelchResult w = welch_t_test(mlplan_it->second.f, random_it->second.f);
            if (w.p < opts.significance_p)
                mark = sample_mean(mlplan_it->second.f) > sample_mean(random_it->second.f) ? "improvement"
                                                                                           : "degradation";
        }
        for (const auto& [optimizer, cell] : cells) {
            const double mean = sample_mean(cell.f);
            const double sd = population_stddev(cell.f);
            const std::string m = optimizer == "mlplan" ? mark : "";
            csv << key.first << ',' << key.second << ',' << optimizer << ',' << cell.f.size() << ',' << fmt(mean)
                << ',' << fmt(sd) << ',' << m << '\n';
            char line[256];
            std::snprintf(line, sizeof(line), "%-16s %-13s %-10s %4zu  %s+/-%s %18s\n", key.first.c_str(),
                          key.second.c_str(), optimizer.c_str(), cell.f.size(), fmt(mean).c_str(), fmt(sd).c_str(),
                          optimizer == "mlplan" ? (mark == "improvement" ? "(*)" : mark == "degradation" ? "(o)" : "")
                                                : "");
            text << line;
        }
    }
    if (aligned_out) *aligned_out = text.str();
    return csv.str();
}

// ---------------------------------------------------------------------------
// Fixture generators

namespace {

LabeledDataset make_numeric_dataset(std::string relation, std::size_t n, std::size_t d, std::size_t m) {
    LabeledDataset ds;
    ds.relation_name = std::move(relation);
    for (std::size_t j = 0; j < d; ++j) {
        AttributeSpec a;
        a.name = "x" + std::to_string(j);
        a.kind = AttrKind::Numeric;
        ds.attributes.push_back(std::move(a));
    }
    for (std::size_t j = 0; j < m; ++j) ds.label_names.push_back("y" + std::to_string(j));
    ds.features = Matrix(n, d);
    ds.labels = BinaryMatrix(n, m);
    return ds;
}

}  // namespace

LabeledDataset gen_independent(std::size_t n, std::size_t m, std::size_t d, std::uint64_t seed) {
    LabeledDataset ds = make_numeric_dataset("independent", n, d, m);
    Pcg32 rng = substream(seed, "fixture-independent");
    std::vector<double> thresholds(m);
    for (std::size_t j = 0; j < m; ++j) thresholds[j] = rng.next_double() - 0.5;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) ds.features.at(i, j) = 2.0 * rng.next_double() - 1.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double v = ds.features.at(i, j % d) + 0.5 * ds.features.at(i, (j + 1) % d);
            bool y = v > thresholds[j];
            if (rng.next_double() < 0.08) y = !y;
            ds.labels.at(i, j) = y ? 1 : 0;
        }
    }
    return ds;
}

LabeledDataset gen_chain(std::size_t n, std::size_t m, std::size_t d, std::uint64_t seed) {
    LabeledDataset ds = make_numeric_dataset("chain", n, d, m);
    Pcg32 rng = substream(seed, "fixture-chain");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) ds.features.at(i, j) = 2.0 * rng.next_double() - 1.0;
        bool prev = ds.features.at(i, 0) + 0.5 * ds.features.at(i, 1 % d) > 0.0;
        if (rng.next_double() < 0.05) prev = !prev;
        ds.labels.at(i, 0) = prev ? 1 : 0;
        for (std::size_t j = 1; j < m; ++j) {
            bool y = prev != (ds.features.at(i, j % d) > 0.4);
            if (rng.next_double() < 0.05) y = !y;
            ds.labels.at(i, j) = y ? 1 : 0;
            prev = y;
        }
    }
    return ds;
}

LabeledDataset gen_dependent(std::size_t n, std::uint64_t seed) {
    LabeledDataset ds = make_numeric_dataset("dependent", n, 1, 2);
    Pcg32 rng = substream(seed, "fixture-dependent");
    for (std::size_t i = 0; i < n; ++i) {
        ds.features.at(i, 0) = 0.0;
        const double u = rng.next_double();
        if (u < 0.4) {
            ds.labels.at(i, 0) = 1;
            ds.labels.at(i, 1) = 1;
        } else if (u < 0.8) {
            ds.labels.at(i, 0) = 0;
            ds.labels.at(i, 1) = 0;
        } else {
            ds.labels.at(i, 0) = 1;
            ds.labels.at(i, 1) = 0;
        }
    }
    return ds;
}

}  // namespace automlc
