#ifndef AUTOMLC_SPACE_COMPONENT_SPACE_HPP
#define AUTOMLC_SPACE_COMPONENT_SPACE_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "automlc/learners/ml.hpp"

namespace automlc {

struct SimpleTaskHasNoMethods : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IncompletePlan : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnboundedSpace : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SpaceFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using TaskId = int;
using MethodId = int;

struct Task {
    std::string name;
    bool simple = true;
    std::vector<MethodId> methods;  // empty for simple tasks
};

/// One decomposition: replaces `target` by `subtasks` and fixes `algorithm`
/// as the decision taken.
struct Method {
    std::string algorithm;
    TaskId target = -1;
    std::vector<TaskId> subtasks;
};

/// The task/method registry of a hierarchical decomposition problem.
/// Built once, immutable afterwards; queries are read-only.
class ComponentSpace {
  public:
    TaskId add_task(std::string name, bool simple);
    MethodId add_method(std::string algorithm, TaskId target, std::vector<TaskId> subtasks);
    void set_initial_task(TaskId t) { initial_ = t; }

    TaskId initial_task() const { return initial_; }
    const Task& task(TaskId t) const { return tasks_[static_cast<std::size_t>(t)]; }
    const Method& method(MethodId m) const { return methods_[static_cast<std::size_t>(m)]; }
    std::size_t task_count() const { return tasks_.size(); }
    std::size_t method_count() const { return methods_.size(); }
    TaskId find_task(std::string_view name) const;  // -1 if absent

    /// Methods of a complex task in registration order.
    const std::vector<MethodId>& decompositions(TaskId t) const;

    std::string listing() const;      // canonical text form
    std::string fingerprint() const;  // hash of the listing, hex

  private:
    std::vector<Task> tasks_;
    std::vector<Method> methods_;
    TaskId initial_ = -1;
};

/// A fully resolved pipeline: an algorithm and its children in role order.
struct ComponentInstance {
    std::string name;
    std::vector<ComponentInstance> children;

    bool operator==(const ComponentInstance& o) const = default;
};

/// Canonical nested-name serialization, e.g. BaggingML(CC(AdaBoostM1(NaiveBayes))).
std::string serialize(const ComponentInstance& instance);

/// Methods applied from the initial task, in forward-decomposition order.
using Plan = std::vector<MethodId>;

/// Replays a complete plan into the pipeline it denotes.
ComponentInstance interpret(const Plan& plan, const ComponentSpace& space);

/// Exact number of distinct goal pipelines, by dynamic programming over
/// tasks. Throws UnboundedSpace if task reachability is cyclic.
std::uint64_t count_pipelines(const ComponentSpace& space);

/// Every complete plan of the space, in deterministic (method-order DFS)
/// order. Intended for bounded spaces; `limit` guards runaway growth.
std::vector<Plan> enumerate_plans(const ComponentSpace& space, std::size_t limit = 1'000'000);

/// The default portfolio wiring: multi-label strategies over single-label
/// learners, base methods before meta methods, alphabetical within a layer.
ComponentSpace default_space();

/// Restricted space from line-oriented `layer:name[:child-layer]` records;
/// `#` and `%` start comments. Layers: ml-meta, ml-base, sl-meta, sl-base.
ComponentSpace load_space(std::istream& in);
ComponentSpace load_space_file(const std::string& path);

/// Converts a pipeline of portfolio algorithms into a runnable MLSpec.
MLSpec to_ml_spec(const ComponentInstance& instance);

}  // namespace automlc

#endif
