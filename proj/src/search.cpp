#include "automlc/search/search.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <set>

#include "automlc/dataset/dataset.hpp"
#include "automlc/harness/stats.hpp"
#include "automlc/metrics/metrics.hpp"

namespace automlc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

std::size_t first_complex(const std::vector<TaskId>& remaining, const ComponentSpace& space) {
    for (std::size_t i = 0; i < remaining.size(); ++i)
        if (!space.task(remaining[i]).simple) return i;
    return remaining.size();
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::Expand: return "expand";
        case EventKind::Evaluate: return "evaluate";
        case EventKind::Fail: return "fail";
        case EventKind::NewBest: return "new-best";
        case EventKind::Phase2Start: return "phase2-start";
        case EventKind::Final: return "final";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Search graph primitives

SearchNode root_node(const ComponentSpace& space) {
    SearchNode n;
    n.remaining = {space.initial_task()};
    return n;
}

bool is_goal(const SearchNode& node, const ComponentSpace& space) {
    return first_complex(node.remaining, space) == node.remaining.size();
}

std::vector<SearchNode> successors(const SearchNode& node, const ComponentSpace& space) {
    std::vector<SearchNode> out;
    const std::size_t at = first_complex(node.remaining, space);
    if (at == node.remaining.size()) return out;
    for (MethodId mid : space.decompositions(node.remaining[at])) {
        const Method& m = space.method(mid);
        SearchNode child;
        child.remaining.assign(node.remaining.begin(), node.remaining.begin() + static_cast<std::ptrdiff_t>(at));
        child.remaining.insert(child.remaining.end(), m.subtasks.begin(), m.subtasks.end());
        child.remaining.insert(child.remaining.end(), node.remaining.begin() + static_cast<std::ptrdiff_t>(at) + 1,
                               node.remaining.end());
        child.applied = node.applied;
        child.applied.push_back(mid);
        out.push_back(std::move(child));
    }
    return out;
}

ComponentInstance random_completion(const SearchNode& node, const ComponentSpace& space, Pcg32& rng) {
    std::vector<TaskId> remaining = node.remaining;
    Plan plan = node.applied;
    for (;;) {
        const std::size_t at = first_complex(remaining, space);
        if (at == remaining.size()) break;
        const std::vector<MethodId>& methods = space.decompositions(remaining[at]);
        const MethodId mid = methods[rng.bounded(static_cast<std::uint32_t>(methods.size()))];
        const Method& m = space.method(mid);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(at));
        remaining.insert(remaining.begin() + static_cast<std::ptrdiff_t>(at), m.subtasks.begin(), m.subtasks.end());
        plan.push_back(mid);
    }
    return interpret(plan, space);
}

std::vector<Plan> enumerate_completions(const SearchNode& node, const ComponentSpace& space) {
    std::vector<Plan> out;
    Plan current = node.applied;
    std::function<void(std::vector<TaskId>)> walk = [&](std::vector<TaskId> remaining) {
        const std::size_t at = first_complex(remaining, space);
        if (at == remaining.size()) {
            out.push_back(current);
            return;
        }
        for (MethodId mid : space.decompositions(remaining[at])) {
            const Method& m = space.method(mid);
            std::vector<TaskId> next(remaining.begin(), remaining.begin() + static_cast<std::ptrdiff_t>(at));
            next.insert(next.end(), m.subtasks.begin(), m.subtasks.end());
            next.insert(next.end(), remaining.begin() + static_cast<std::ptrdiff_t>(at) + 1, remaining.end());
            current.push_back(mid);
            walk(std::move(next));
            current.pop_back();
        }
    };
    walk(node.remaining);
    return out;
}

namespace {

std::string partial_string(TaskId t, const Plan& plan, const ComponentSpace& space, std::size_t& pos) {
    if (pos >= plan.size()) return "?";
    const Method& m = space.method(plan[pos]);
    if (m.target != t) return "?";
    ++pos;
    std::string out = m.algorithm;
    std::vector<std::string> kids;
    for (TaskId st : m.subtasks)
        if (!space.task(st).simple) kids.push_back(partial_string(st, plan, space, pos));
    if (!kids.empty()) {
        out.push_back('(');
        for (std::size_t i = 0; i < kids.size(); ++i) {
            if (i) out.push_back(',');
            out += kids[i];
        }
        out.push_back(')');
    }
    return out;
}

}  // namespace

std::string serialize_partial(const SearchNode& node, const ComponentSpace& space) {
    std::size_t pos = 0;
    return partial_string(space.initial_task(), node.applied, space, pos);
}

// ---------------------------------------------------------------------------
// Candidate evaluation

SearchData make_search_data(const Matrix& X, const BinaryMatrix& Y, const std::vector<int>& rows) {
    SearchData d;
    d.features = X.select_rows(rows);
    d.labels = Y.select_rows(rows);
    d.original_indices = rows;
    return d;
}

namespace {

struct CoreOutcome {
    std::vector<double> scores;
    bool fit_raised = false;
    double seconds = 0.0;
};

CoreOutcome evaluate_candidate_core(const MLSpec& spec, const SearchData& data, std::uint64_t seed, int repetitions,
                                    double per_candidate_seconds, double split_fraction,
                                    Clock::time_point global_deadline) {
    CoreOutcome out;
    const Clock::time_point start = Clock::now();
    for (int r = 1; r <= repetitions; ++r) {
        if (r > 1) {
            const Clock::time_point now = Clock::now();
            if (per_candidate_seconds > 0.0 && seconds_between(start, now) >= per_candidate_seconds) break;
            if (now >= global_deadline) break;
        }
        const SplitPair split = random_split(data.features.rows, split_fraction, seed + static_cast<std::uint64_t>(r));
        try {
            MLDataset train{data.features.select_rows(split.train_indices), data.labels.select_rows(split.train_indices)};
            const MLModel model = fit_multi_label(spec, train, substream_seed(seed + static_cast<std::uint64_t>(r), "fit"));
            const Matrix vx = data.features.select_rows(split.test_indices);
            const BinaryMatrix vy = data.labels.select_rows(split.test_indices);
            const MLPrediction pred = model.predict(vx);
            out.scores.push_back(1.0 - instance_f_measure(vy, pred.labels).mean);
        } catch (const std::exception&) {
            out.fit_raised = true;
            break;
        }
    }
    out.seconds = seconds_between(start, Clock::now());
    return out;
}

}  // namespace

std::vector<double> evaluate_candidate(const MLSpec& spec, const SearchData& data, std::uint64_t seed,
                                       int repetitions, double per_candidate_seconds, double split_fraction) {
    const CoreOutcome out = evaluate_candidate_core(spec, data, seed, repetitions, per_candidate_seconds,
                                                    split_fraction, Clock::time_point::max());
    if (out.fit_raised)
        throw EvaluationFailed("pipeline fit raised after " + std::to_string(out.scores.size()) +
                                   " completed repetitions",
                               static_cast<int>(out.scores.size()));
    if (out.scores.empty()) throw EvaluationFailed("per-candidate limit exhausted before the first repetition", 0);
    return out.scores;
}

CandidateEvaluator::Outcome DataCandidateEvaluator::evaluate(const ComponentInstance& pipeline, int repetitions,
                                                             std::string_view stream_tag,
                                                             Clock::time_point global_deadline) {
    Outcome out;
    MLSpec spec;
    try {
        spec = to_ml_spec(pipeline);
    } catch (const std::exception&) {
        out.fit_raised = true;
        return out;
    }
    const std::uint64_t eval_seed = substream_seed(run_seed_, stream_tag, hash_bytes(serialize(pipeline)));
    const CoreOutcome core = evaluate_candidate_core(spec, data_, eval_seed, repetitions, per_candidate_seconds_,
                                                     split_fraction_, global_deadline);
    out.scores = core.scores;
    out.fit_raised = core.fit_raised;
    out.seconds = core.seconds;
    out.touched = data_.original_indices;
    std::sort(out.touched.begin(), out.touched.end());
    return out;
}

// ---------------------------------------------------------------------------
// Search engine

SearchEngine::SearchEngine(const ComponentSpace& space, CandidateEvaluator& evaluator, Budget budget,
                           std::uint64_t seed, SearchConfig config)
    : space_(space), evaluator_(evaluator), budget_(budget), seed_(seed), config_(config), start_(Clock::now()) {
    if (budget_.kind == Budget::Kind::Evaluations && budget_.total_evals == 0)
        throw std::invalid_argument("evaluation budget must be positive");
    if (budget_.kind == Budget::Kind::WallSeconds && budget_.total_seconds <= 0.0)
        throw std::invalid_argument("wall-clock budget must be positive");
}

bool SearchEngine::budget_exhausted() const {
    if (budget_.kind == Budget::Kind::Evaluations) return evals_used_ >= budget_.total_evals;
    return elapsed_seconds() >= budget_.total_seconds;
}

double SearchEngine::elapsed_seconds() const { return seconds_between(start_, Clock::now()); }

Clock::time_point SearchEngine::global_deadline() const {
    if (budget_.kind == Budget::Kind::WallSeconds)
        return start_ + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(budget_.total_seconds));
    return Clock::time_point::max();
}

double SearchEngine::phase1_reserve() const {
    const std::size_t pool_bound = 2 * static_cast<std::size_t>(config_.selection_k);
    if (budget_.kind == Budget::Kind::Evaluations) {
        const auto thirty = static_cast<double>(budget_.total_evals) * 0.3;
        return std::min(std::floor(thirty), static_cast<double>(pool_bound));
    }
    // wall clock: the accumulated cost of the candidates the pool would take
    std::vector<std::size_t> idx(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (records_[a].mean_score != records_[b].mean_score) return records_[a].mean_score < records_[b].mean_score;
        return a < b;
    });
    double cost = 0.0;
    for (std::size_t i = 0; i < idx.size() && i < pool_bound; ++i) cost += records_[idx[i]].cost_seconds;
    return std::min(cost, 0.3 * budget_.total_seconds);
}

bool SearchEngine::phase1_should_stop() const {
    if (budget_exhausted()) return true;
    if (budget_.kind == Budget::Kind::Evaluations)
        return static_cast<double>(evals_used_) + phase1_reserve() >= static_cast<double>(budget_.total_evals);
    return elapsed_seconds() + phase1_reserve() >= budget_.total_seconds;
}

void SearchEngine::charge(double) { ++evals_used_; }

void SearchEngine::emit(SearchEvent ev) {
    ev.seq = event_seq_++;
    ev.eval_index = evals_used_;
    ev.t = elapsed_seconds();
    events_.push_back(std::move(ev));
}

SearchEngine::EvalOutcome SearchEngine::request_evaluation(const ComponentInstance& pipeline, int repetitions,
                                                           int phase, std::string_view stream_tag, bool use_cache) {
    EvalOutcome out;
    if (budget_exhausted()) {
        out.stopped = true;
        return out;
    }
    const std::string ser = serialize(pipeline);

    if (use_cache) {
        const auto it = cache_.find(ser);
        if (it != cache_.end()) {
            // scores are seed-deterministic, so the reused value equals what
            // re-evaluation would produce; only the cost disappears
            SearchEvent ev;
            ev.kind = std::isfinite(it->second.first) ? EventKind::Evaluate : EventKind::Fail;
            ev.pipeline = ser;
            ev.score = std::isfinite(it->second.first) ? it->second.first : 1.0;
            ev.cached = true;
            ev.pruned = !std::isfinite(it->second.first);
            ev.phase = phase;
            emit(std::move(ev));
            out.mean = it->second.first;
            out.failed = !std::isfinite(it->second.first);
            return out;
        }
    }

    const CandidateEvaluator::Outcome res = evaluator_.evaluate(pipeline, repetitions, stream_tag, global_deadline());
    charge(res.seconds);

    if (res.scores.empty()) {
        // zero completed repetitions: prune marker, nothing to record
        if (use_cache) cache_[ser] = {kInf, -1};
        SearchEvent ev;
        ev.kind = EventKind::Fail;
        ev.pipeline = ser;
        ev.score = 1.0;
        ev.pruned = true;
        ev.phase = phase;
        ev.touched = res.touched;
        emit(std::move(ev));
        out.failed = true;
        return out;
    }

    const bool capped = res.fit_raised;  // partial completion then a raise: worst loss, still comparable
    const double mean = capped ? 1.0 : mean_of(res.scores);
    std::ptrdiff_t record_index = -1;
    if (phase == 1) {
        CandidateRecord rec;
        rec.pipeline = pipeline;
        rec.serialization = ser;
        rec.scores = capped ? std::vector<double>{1.0} : res.scores;
        rec.mean_score = mean;
        rec.cost_seconds = res.seconds;
        rec.discovery_index = records_.size();
        record_index = static_cast<std::ptrdiff_t>(records_.size());
        records_.push_back(std::move(rec));
    }
    if (use_cache) cache_[ser] = {mean, record_index};

    SearchEvent ev;
    ev.kind = capped ? EventKind::Fail : EventKind::Evaluate;
    ev.pipeline = ser;
    ev.score = mean;
    ev.phase = phase;
    ev.touched = res.touched;
    emit(std::move(ev));

    if (phase == 1 && mean < best_mean_) {
        best_mean_ = mean;
        SearchEvent nb;
        nb.kind = EventKind::NewBest;
        nb.pipeline = ser;
        nb.score = mean;
        nb.phase = phase;
        emit(std::move(nb));
    }
    out.mean = mean;
    return out;
}

double SearchEngine::evaluate_node(const SearchNode& node) {
    if (is_goal(node, space_)) {
        const ComponentInstance pipeline = interpret(node.applied, space_);
        const EvalOutcome out = request_evaluation(pipeline, config_.repetitions, 1, "candidate-eval", true);
        return (out.stopped || out.failed) ? kInf : out.mean;
    }
    double best = kInf;
    if (config_.exact_node_eval) {
        for (const Plan& plan : enumerate_completions(node, space_)) {
            if (phase1_should_stop()) break;
            const EvalOutcome out = request_evaluation(interpret(plan, space_), config_.repetitions, 1, "candidate-eval", true);
            if (out.stopped) break;
            if (!out.failed) best = std::min(best, out.mean);
        }
        return best;
    }
    Pcg32 rng = substream(seed_, "node-eval", node.creation_index);
    for (int c = 0; c < config_.completions; ++c) {
        if (phase1_should_stop()) break;
        const ComponentInstance pipeline = random_completion(node, space_, rng);
        const EvalOutcome out = request_evaluation(pipeline, config_.repetitions, 1, "candidate-eval", true);
        if (out.stopped) break;
        if (!out.failed) best = std::min(best, out.mean);
    }
    return best;
}

SearchResult SearchEngine::finish(std::size_t chosen_record, double internal_score, int phase) {
    SearchResult result;
    result.final_pipeline = records_[chosen_record].pipeline;
    result.final_serialization = records_[chosen_record].serialization;
    result.internal_score = internal_score;

    SearchEvent ev;
    ev.kind = EventKind::Final;
    ev.pipeline = result.final_serialization;
    ev.score = internal_score;
    ev.phase = phase;
    emit(std::move(ev));

    result.records = std::move(records_);
    result.events = std::move(events_);
    result.evaluations_used = evals_used_;
    result.wall_seconds = elapsed_seconds();
    result.first_goal = first_goal_;
    return result;
}

SearchResult SearchEngine::run_mlplan() {
    // --- phase 1: best-first over the decomposition graph
    struct Entry {
        double score;
        std::uint64_t creation;
        std::size_t store;
        bool operator>(const Entry& o) const {
            if (score != o.score) return score > o.score;
            return creation > o.creation;
        }
    };
    std::deque<SearchNode> store;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;

    store.push_back(root_node(space_));
    open.push(Entry{0.0, 0, 0});

    bool stopped = false;
    while (!open.empty() && !stopped) {
        if (phase1_should_stop()) break;
        const Entry top = open.top();
        open.pop();
        const SearchNode node = store[top.store];

        if (is_goal(node, space_)) {
            if (!first_goal_) first_goal_ = serialize(interpret(node.applied, space_));
            continue;
        }

        SearchEvent ev;
        ev.kind = EventKind::Expand;
        ev.pipeline = serialize_partial(node, space_);
        ev.score = node.score;
        emit(std::move(ev));

        for (SearchNode& child : successors(node, space_)) {
            child.creation_index = ++node_counter_;
            if (phase1_should_stop()) {
                stopped = true;
                break;
            }
            child.score = evaluate_node(child);
            if (std::isfinite(child.score)) {
                store.push_back(std::move(child));
                open.push(Entry{store.back().score, store.back().creation_index, store.size() - 1});
            }
        }
    }
    if (records_.empty()) throw NoCandidateFound("phase-1 budget expired before any successful evaluation");

    // --- phase 2: re-evaluate a pool of k best + k random near-best
    std::vector<std::size_t> order(records_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (records_[a].mean_score != records_[b].mean_score) return records_[a].mean_score < records_[b].mean_score;
        return a < b;
    });

    const auto k = static_cast<std::size_t>(config_.selection_k);
    std::vector<std::size_t> pool(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(k, order.size())));
    std::set<std::size_t> in_pool(pool.begin(), pool.end());
    const CandidateRecord& best = records_[order[0]];

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (in_pool.count(i)) continue;
        const CandidateRecord& r = records_[i];
        bool ok = r.mean_score <= best.mean_score;
        if (!ok && r.scores.size() >= 2 && best.scores.size() >= 2)
            ok = welch_t_test(r.scores, best.scores).p >= 0.05;
        if (ok) eligible.push_back(i);
    }
    Pcg32 pool_rng = substream(seed_, "phase2-pool");
    for (std::size_t draws = 0; draws < k && !eligible.empty(); ++draws) {
        const std::uint32_t j = pool_rng.bounded(static_cast<std::uint32_t>(eligible.size()));
        pool.push_back(eligible[j]);
        eligible.erase(eligible.begin() + static_cast<std::ptrdiff_t>(j));
    }

    SearchEvent p2;
    p2.kind = EventKind::Phase2Start;
    p2.score = best.mean_score;
    p2.pipeline = best.serialization;
    p2.phase = 2;
    emit(std::move(p2));

    // phase-2 allowance: the pool's accumulated phase-1 cost, capped at 30%
    // of the total budget and at whatever actually remains
    std::uint64_t allow_evals = 0;
    double allow_seconds = 0.0;
    if (budget_.kind == Budget::Kind::Evaluations) {
        const auto thirty = static_cast<std::uint64_t>(0.3 * static_cast<double>(budget_.total_evals));
        allow_evals = std::min<std::uint64_t>(pool.size(), thirty);
    } else {
        double pool_cost = 0.0;
        for (std::size_t i : pool) pool_cost += records_[i].cost_seconds;
        allow_seconds = std::min(pool_cost, 0.3 * budget_.total_seconds);
    }

    const double phase2_start_elapsed = elapsed_seconds();
    std::uint64_t phase2_used = 0;
    std::size_t chosen = order[0];
    double chosen_score = best.mean_score;
    bool any_reeval = false;

    for (std::size_t i : pool) {
        if (budget_exhausted()) break;
        if (budget_.kind == Budget::Kind::Evaluations && phase2_used >= allow_evals) break;
        if (budget_.kind == Budget::Kind::WallSeconds && elapsed_seconds() - phase2_start_elapsed >= allow_seconds) break;
        const EvalOutcome out =
            request_evaluation(records_[i].pipeline, config_.phase2_repetitions, 2, "phase2-eval", false);
        if (out.stopped) break;
        ++phase2_used;
        const double fresh = out.failed ? 1.0 : out.mean;
        if (!any_reeval || fresh < chosen_score) {
            any_reeval = true;
            chosen = i;
            chosen_score = fresh;
        }
    }
    if (!any_reeval) {
        chosen = order[0];
        chosen_score = best.mean_score;
    }
    return finish(chosen, chosen_score, 2);
}

SearchResult SearchEngine::run_random_search() {
    Pcg32 rng = substream(seed_, "random-search");
    const SearchNode root = root_node(space_);
    const std::uint64_t space_size = count_pipelines(space_);
    while (!budget_exhausted() && cache_.size() < space_size) {
        const ComponentInstance pipeline = random_completion(root, space_, rng);
        const EvalOutcome out = request_evaluation(pipeline, config_.repetitions, 1, "candidate-eval", true);
        if (out.stopped) break;
    }
    if (records_.empty()) throw NoCandidateFound("budget expired before any successful evaluation");
    std::size_t chosen = 0;
    for (std::size_t i = 1; i < records_.size(); ++i)
        if (records_[i].mean_score < records_[chosen].mean_score) chosen = i;
    return finish(chosen, records_[chosen].mean_score, 1);
}

SearchResult run_mlplan(const ComponentSpace& space, const SearchData& data, const Budget& budget, std::uint64_t seed,
                        const SearchConfig& config) {
    DataCandidateEvaluator evaluator(data, seed, budget.per_candidate_seconds, config.split_fraction);
    SearchEngine engine(space, evaluator, budget, seed, config);
    return engine.run_mlplan();
}

SearchResult run_random_search(const ComponentSpace& space, const SearchData& data, const Budget& budget,
                               std::uint64_t seed, const SearchConfig& config) {
    DataCandidateEvaluator evaluator(data, seed, budget.per_candidate_seconds, config.split_fraction);
    SearchEngine engine(space, evaluator, budget, seed, config);
    return engine.run_random_search();
}

}  // namespace automlc
