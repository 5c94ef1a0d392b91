#ifndef AUTOMLC_HARNESS_EXPERIMENT_HPP
#define AUTOMLC_HARNESS_EXPERIMENT_HPP

#include <cstdint>
#include <string>

#include "automlc/dataset/dataset.hpp"
#include "automlc/search/search.hpp"

namespace automlc {

struct ExperimentConfig {
    std::string dataset_path;
    std::string space_file;  // empty: default space
    std::string optimizer = "mlplan";  // mlplan | random
    double split_fraction = 0.7;       // outer split
    std::uint64_t seed = 0;
    Budget budget = Budget::evaluations(200);
    SearchConfig search;
    std::string out_dir;  // empty: nothing written
};

struct TestMetrics {
    double exact_match_accuracy = 0.0;
    double hamming_loss = 0.0;
    double instance_f = 0.0;
    double rank_loss = 0.0;      // pair-normalized
    double rank_loss_raw = 0.0;
};

struct RunReport {
    ExperimentConfig config;
    std::string space_fingerprint;
    std::string chosen_pipeline;
    double internal_score = 1.0;
    TestMetrics test;
    std::uint64_t candidates_evaluated = 0;
    double wall_seconds = 0.0;
    std::vector<int> train_indices;
    std::vector<int> test_indices;
    std::vector<SearchEvent> events;
    std::string report_path;     // set when out_dir is given
    std::string event_log_path;  // set when out_dir is given
};

/// Outer split, optimizer on the train portion, refit of the chosen
/// pipeline on the full train portion, scoring on the untouched test
/// portion. Writes <stem>__<optimizer>__seed<seed>.json and the matching
/// .events.jsonl when out_dir is set.
RunReport run_experiment(const ExperimentConfig& config);

/// JSON text of a report, without the event list (those go to the JSONL
/// event log). Volatile fields are limited to wall_seconds and event `t`.
std::string report_to_json(const RunReport& report);
std::string event_to_json(const SearchEvent& ev);

// ---------------------------------------------------------------------------
// Cross-run summaries

struct SummaryOptions {
    double significance_p = 0.05;
};

/// Aggregates run reports grouped by (dataset, budget, optimizer):
/// mean +/- population std of the test instance F per cell, with pairwise
/// significance marks against the other optimizer in the same row.
/// Returns CSV text; `aligned_out` (optional) receives a printable table.
std::string summarize(const std::vector<RunReport>& reports, const SummaryOptions& opts, std::string* aligned_out);

/// Loads every *.json run report under a directory (sorted by filename).
std::vector<RunReport> load_reports(const std::string& dir);

// ---------------------------------------------------------------------------
// Synthetic fixtures (no network access needed anywhere)

/// Independent labels: each label is a noisy threshold rule on its own
/// feature subset.
LabeledDataset gen_independent(std::size_t n, std::size_t m, std::size_t d, std::uint64_t seed);

/// Chain-dependent labels: label j depends on label j-1 and one feature.
LabeledDataset gen_chain(std::size_t n, std::size_t m, std::size_t d, std::uint64_t seed);

/// Two labels with joint distribution P(1,1)=0.4, P(0,0)=0.4, P(1,0)=0.2
/// over a single constant feature; separates joint from marginal modelling.
LabeledDataset gen_dependent(std::size_t n, std::uint64_t seed);

}  // namespace automlc

#endif
