#ifndef AUTOMLC_SEARCH_SEARCH_HPP
#define AUTOMLC_SEARCH_SEARCH_HPP

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "automlc/core/rng.hpp"
#include "automlc/space/component_space.hpp"

namespace automlc {

// ---------------------------------------------------------------------------
// Forward-decomposition search graph

/// A search state: the ordered remaining task list plus the methods applied
/// so far. Goal nodes have only simple tasks remaining.
struct SearchNode {
    std::vector<TaskId> remaining;
    Plan applied;
    double score = 0.0;
    std::uint64_t creation_index = 0;
};

SearchNode root_node(const ComponentSpace& space);
bool is_goal(const SearchNode& node, const ComponentSpace& space);

/// One child per method of the first complex task, which is replaced in
/// place by the method's subtasks. Goal nodes yield an empty list.
std::vector<SearchNode> successors(const SearchNode& node, const ComponentSpace& space);

/// Applies uniformly random methods to the first complex task until a goal
/// is reached; returns the interpreted pipeline.
ComponentInstance random_completion(const SearchNode& node, const ComponentSpace& space, Pcg32& rng);

/// All complete plans reachable from the node, in method-order DFS order.
std::vector<Plan> enumerate_completions(const SearchNode& node, const ComponentSpace& space);

/// Decision prefix of a node as nested names with '?' for open slots.
std::string serialize_partial(const SearchNode& node, const ComponentSpace& space);

// ---------------------------------------------------------------------------
// Budgets

struct Budget {
    enum class Kind { WallSeconds, Evaluations };
    Kind kind = Kind::Evaluations;
    double total_seconds = 0.0;          // wall-clock budgets
    std::uint64_t total_evals = 0;       // evaluation-count budgets (deterministic)
    double per_candidate_seconds = 0.0;  // 0: unlimited

    static Budget evaluations(std::uint64_t n, double per_candidate = 0.0) {
        return Budget{Kind::Evaluations, 0.0, n, per_candidate};
    }
    static Budget wall_seconds(double s, double per_candidate = 0.0) {
        return Budget{Kind::WallSeconds, s, 0, per_candidate};
    }
};

// ---------------------------------------------------------------------------
// Candidate evaluation

struct EvaluationFailed : std::runtime_error {
    int completed_repetitions = 0;
    EvaluationFailed(const std::string& msg, int completed)
        : std::runtime_error(msg), completed_repetitions(completed) {}
};

struct NoCandidateFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The slice of data available to the optimizer, with the original dataset
/// row ids kept for auditability.
struct SearchData {
    Matrix features;
    BinaryMatrix labels;
    std::vector<int> original_indices;
};

SearchData make_search_data(const Matrix& X, const BinaryMatrix& Y, const std::vector<int>& rows);

/// Monte-Carlo cross-validation of one pipeline: repetitions seeded splits
/// (seed+r), fit on the train side, loss = 1 - mean instance F on the
/// validation side. Stops early once the per-candidate limit is spent;
/// throws EvaluationFailed if a fit raised or no repetition completed.
std::vector<double> evaluate_candidate(const MLSpec& spec, const SearchData& data, std::uint64_t seed,
                                       int repetitions, double per_candidate_seconds = 0.0,
                                       double split_fraction = 0.7);

/// Evaluation backend of the search; swapped out in tests for synthetic
/// scorers with known values.
class CandidateEvaluator {
  public:
    struct Outcome {
        std::vector<double> scores;  // completed repetition losses
        bool fit_raised = false;     // a repetition raised (after the completed ones)
        double seconds = 0.0;
        std::vector<int> touched;  // original dataset indices read
    };

    virtual ~CandidateEvaluator() = default;
    virtual Outcome evaluate(const ComponentInstance& pipeline, int repetitions, std::string_view stream_tag,
                             std::chrono::steady_clock::time_point global_deadline) = 0;
};

/// Production evaluator: repeated validation splits of the search data. The
/// split sequence depends only on (run seed, pipeline), so re-encounters
/// reproduce identical scores.
class DataCandidateEvaluator final : public CandidateEvaluator {
  public:
    DataCandidateEvaluator(const SearchData& data, std::uint64_t run_seed, double per_candidate_seconds,
                           double split_fraction)
        : data_(data), run_seed_(run_seed), per_candidate_seconds_(per_candidate_seconds),
          split_fraction_(split_fraction) {}

    Outcome evaluate(const ComponentInstance& pipeline, int repetitions, std::string_view stream_tag,
                     std::chrono::steady_clock::time_point global_deadline) override;

  private:
    const SearchData& data_;
    std::uint64_t run_seed_;
    double per_candidate_seconds_;
    double split_fraction_;
};

// ---------------------------------------------------------------------------
// Search engine

struct SearchConfig {
    int completions = 3;        // random completions per node evaluation
    int repetitions = 3;        // validation splits per candidate
    int selection_k = 10;       // phase-2 pool: k best + k random near-best
    int phase2_repetitions = 5;
    double split_fraction = 0.7;
    bool exact_node_eval = false;  // evaluate nodes over all completions (tests)
};

enum class EventKind { Expand, Evaluate, Fail, NewBest, Phase2Start, Final };
const char* event_kind_name(EventKind k);

struct SearchEvent {
    std::uint64_t seq = 0;         // deterministic ordinal
    std::uint64_t eval_index = 0;  // evaluations charged so far
    double t = 0.0;                // seconds since search start (volatile)
    EventKind kind = EventKind::Evaluate;
    std::string pipeline;
    double score = 0.0;
    bool cached = false;
    bool pruned = false;
    int phase = 1;
    std::vector<int> touched;
};

struct CandidateRecord {
    ComponentInstance pipeline;
    std::string serialization;
    std::vector<double> scores;
    double mean_score = 1.0;
    double cost_seconds = 0.0;
    std::uint64_t discovery_index = 0;
};

struct SearchResult {
    ComponentInstance final_pipeline;
    std::string final_serialization;
    double internal_score = 1.0;
    std::vector<CandidateRecord> records;
    std::vector<SearchEvent> events;
    std::uint64_t evaluations_used = 0;
    double wall_seconds = 0.0;
    std::optional<std::string> first_goal;
};

/// Best-first search with min-over-completions node evaluation, two-phase
/// selection, and the random-search baseline over the identical space. The
/// loop is sequential and owns all mutable state; evaluation kernels may be
/// OpenMP-parallel underneath without affecting any outcome.
class SearchEngine {
  public:
    SearchEngine(const ComponentSpace& space, CandidateEvaluator& evaluator, Budget budget, std::uint64_t seed,
                 SearchConfig config);

    /// Two-phase optimizer: best-first phase 1, re-evaluated selection pool
    /// phase 2. Throws NoCandidateFound if nothing evaluated successfully.
    SearchResult run_mlplan();

    /// Uniform random completions from the root under the same budget and
    /// the same candidate evaluation protocol.
    SearchResult run_random_search();

    /// Min over completion means; +inf when every completion failed.
    /// Exposed for node-evaluation semantics tests.
    double evaluate_node(const SearchNode& node);

    std::uint64_t evaluations_used() const { return evals_used_; }

  private:
    struct EvalOutcome {
        double mean = 0.0;
        bool failed = false;  // zero repetitions completed -> prune
        bool stopped = false; // budget exhausted before starting
    };

    bool budget_exhausted() const;
    double elapsed_seconds() const;
    std::chrono::steady_clock::time_point global_deadline() const;
    double phase1_reserve() const;
    bool phase1_should_stop() const;
    void charge(double seconds);
    EvalOutcome request_evaluation(const ComponentInstance& pipeline, int repetitions, int phase,
                                   std::string_view stream_tag, bool use_cache);
    void emit(SearchEvent ev);
    SearchResult finish(std::size_t chosen_record, double internal_score, int phase);

    const ComponentSpace& space_;
    CandidateEvaluator& evaluator_;
    Budget budget_;
    std::uint64_t seed_;
    SearchConfig config_;

    std::chrono::steady_clock::time_point start_;
    std::uint64_t evals_used_ = 0;
    std::uint64_t node_counter_ = 0;
    std::uint64_t event_seq_ = 0;
    double best_mean_ = 2.0;

    std::map<std::string, std::pair<double, std::ptrdiff_t>> cache_;  // serialization -> (mean, record index or -1)
    std::vector<CandidateRecord> records_;
    std::vector<SearchEvent> events_;
    std::optional<std::string> first_goal_;
};

/// Convenience wrappers running on dataset-backed evaluation.
SearchResult run_mlplan(const ComponentSpace& space, const SearchData& data, const Budget& budget,
                        std::uint64_t seed, const SearchConfig& config);
SearchResult run_random_search(const ComponentSpace& space, const SearchData& data, const Budget& budget,
                               std::uint64_t seed, const SearchConfig& config);

}  // namespace automlc

#endif
