#include "automlc/space/component_space.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "automlc/core/rng.hpp"

namespace automlc {

namespace {

constexpr const char* kTaskCreateML = "createMLClassifier";
constexpr const char* kTaskCreateMLBase = "createMLBaseClassifier";
constexpr const char* kTaskCreateWeka = "createWekaClassifier";
constexpr const char* kTaskSetupBase = "setupBaseClassifier";

struct Portfolio {
    std::vector<std::string> ml_meta;
    std::vector<std::string> ml_base;  // learner-bearing
    bool majority = false;
    std::vector<std::string> sl_meta;
    std::vector<std::string> sl_base;
};

ComponentSpace build_space(const Portfolio& p) {
    for (const auto* group : {&p.ml_meta, &p.ml_base, &p.sl_meta, &p.sl_base}) {
        auto sorted = *group;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != *group) throw SpaceFormatError("portfolio groups must be alphabetical");
    }

    ComponentSpace s;
    const TaskId t_ml = s.add_task(kTaskCreateML, false);
    const TaskId t_mlbase = p.ml_meta.empty() ? -1 : s.add_task(kTaskCreateMLBase, false);
    const bool need_weka = !p.ml_base.empty();
    const TaskId t_weka = need_weka ? s.add_task(kTaskCreateWeka, false) : -1;
    const TaskId t_setup = p.sl_meta.empty() ? -1 : s.add_task(kTaskSetupBase, false);
    s.set_initial_task(t_ml);

    auto choice_task = [&](const std::string& name) {
        const TaskId existing = s.find_task(name);
        return existing >= 0 ? existing : s.add_task(name, true);
    };

    // ML-base methods first (alphabetical interleaving MajorityLabelSet), then ML-meta.
    auto add_ml_layer = [&](TaskId target) {
        std::vector<std::string> base = p.ml_base;
        if (p.majority) base.push_back("MajorityLabelSet");
        std::sort(base.begin(), base.end());
        for (const std::string& name : base) {
            if (name == "MajorityLabelSet")
                s.add_method(name, target, {choice_task(name)});
            else
                s.add_method(name, target, {choice_task(name), t_weka});
        }
    };
    add_ml_layer(t_ml);
    for (const std::string& name : p.ml_meta) s.add_method(name, t_ml, {choice_task(name), t_mlbase});
    if (t_mlbase >= 0) add_ml_layer(t_mlbase);

    if (t_weka >= 0) {
        for (const std::string& name : p.sl_base) s.add_method(name, t_weka, {choice_task(name)});
        for (const std::string& name : p.sl_meta) s.add_method(name, t_weka, {choice_task(name), t_setup});
        if (t_setup >= 0)
            for (const std::string& name : p.sl_base) s.add_method(name, t_setup, {choice_task(name)});
    }
    return s;
}

Portfolio default_portfolio() {
    Portfolio p;
    p.ml_meta = {"BaggingML", "EnsembleML", "RandomSubspaceML"};
    p.ml_base = {"BR", "CC", "LC", "PS", "RAkEL"};
    p.majority = true;
    p.sl_meta = {"AdaBoostM1", "Bagging", "RandomSubspace"};
    p.sl_base = {"DecisionStump", "DecisionTree", "KNN", "Logistic", "NaiveBayes", "ZeroR"};
    return p;
}

}  // namespace

TaskId ComponentSpace::add_task(std::string name, bool simple) {
    tasks_.push_back(Task{std::move(name), simple, {}});
    return static_cast<TaskId>(tasks_.size() - 1);
}

MethodId ComponentSpace::add_method(std::string algorithm, TaskId target, std::vector<TaskId> subtasks) {
    const auto id = static_cast<MethodId>(methods_.size());
    methods_.push_back(Method{std::move(algorithm), target, std::move(subtasks)});
    tasks_[static_cast<std::size_t>(target)].methods.push_back(id);
    tasks_[static_cast<std::size_t>(target)].simple = false;
    return id;
}

TaskId ComponentSpace::find_task(std::string_view name) const {
    for (std::size_t i = 0; i < tasks_.size(); ++i)
        if (tasks_[i].name == name) return static_cast<TaskId>(i);
    return -1;
}

const std::vector<MethodId>& ComponentSpace::decompositions(TaskId t) const {
    const Task& tk = task(t);
    if (tk.simple) throw SimpleTaskHasNoMethods("task '" + tk.name + "' is simple");
    return tk.methods;
}

std::string ComponentSpace::listing() const {
    std::ostringstream os;
    os << "initial " << (initial_ >= 0 ? task(initial_).name : "?") << '\n';
    for (const Task& t : tasks_) os << "task " << t.name << (t.simple ? " simple" : " complex") << '\n';
    for (const Method& m : methods_) {
        os << "method " << m.algorithm << " @ " << task(m.target).name << " ->";
        for (TaskId st : m.subtasks) os << ' ' << task(st).name;
        os << '\n';
    }
    return os.str();
}

std::string ComponentSpace::fingerprint() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash_bytes(listing())));
    return buf;
}

std::string serialize(const ComponentInstance& instance) {
    std::string out = instance.name;
    if (!instance.children.empty()) {
        out.push_back('(');
        for (std::size_t i = 0; i < instance.children.size(); ++i) {
            if (i) out.push_back(',');
            out += serialize(instance.children[i]);
        }
        out.push_back(')');
    }
    return out;
}

namespace {

ComponentInstance build_instance(TaskId t, const Plan& plan, const ComponentSpace& space, std::size_t& pos) {
    if (pos >= plan.size()) throw IncompletePlan("plan ends before task '" + space.task(t).name + "' is resolved");
    const Method& m = space.method(plan[pos]);
    if (m.target != t)
        throw IncompletePlan("method '" + m.algorithm + "' does not decompose task '" + space.task(t).name + "'");
    ++pos;
    ComponentInstance node;
    node.name = m.algorithm;
    for (TaskId st : m.subtasks)
        if (!space.task(st).simple) node.children.push_back(build_instance(st, plan, space, pos));
    return node;
}

}  // namespace

ComponentInstance interpret(const Plan& plan, const ComponentSpace& space) {
    std::size_t pos = 0;
    ComponentInstance root = build_instance(space.initial_task(), plan, space, pos);
    if (pos != plan.size()) throw IncompletePlan("plan has unused methods");
    return root;
}

std::uint64_t count_pipelines(const ComponentSpace& space) {
    enum class State { Unvisited, InProgress, Done };
    std::vector<State> state(space.task_count(), State::Unvisited);
    std::vector<std::uint64_t> memo(space.task_count(), 0);

    std::function<std::uint64_t(TaskId)> count = [&](TaskId t) -> std::uint64_t {
        auto& st = state[static_cast<std::size_t>(t)];
        if (st == State::Done) return memo[static_cast<std::size_t>(t)];
        if (st == State::InProgress) throw UnboundedSpace("cyclic decomposition through task '" + space.task(t).name + "'");
        st = State::InProgress;
        std::uint64_t total = 1;
        if (!space.task(t).simple) {
            total = 0;
            for (MethodId mid : space.task(t).methods) {
                std::uint64_t prod = 1;
                for (TaskId sub : space.method(mid).subtasks) prod *= count(sub);
                total += prod;
            }
        }
        st = State::Done;
        memo[static_cast<std::size_t>(t)] = total;
        return total;
    };
    return count(space.initial_task());
}

std::vector<Plan> enumerate_plans(const ComponentSpace& space, std::size_t limit) {
    count_pipelines(space);  // boundedness check
    std::vector<Plan> out;
    Plan current;
    std::function<void(std::vector<TaskId>)> walk = [&](std::vector<TaskId> remaining) {
        std::size_t first = remaining.size();
        for (std::size_t i = 0; i < remaining.size(); ++i)
            if (!space.task(remaining[i]).simple) {
                first = i;
                break;
            }
        if (first == remaining.size()) {
            if (out.size() >= limit) throw UnboundedSpace("plan enumeration limit exceeded");
            out.push_back(current);
            return;
        }
        for (MethodId mid : space.task(remaining[first]).methods) {
            std::vector<TaskId> next(remaining.begin(), remaining.begin() + static_cast<std::ptrdiff_t>(first));
            const Method& m = space.method(mid);
            next.insert(next.end(), m.subtasks.begin(), m.subtasks.end());
            next.insert(next.end(), remaining.begin() + static_cast<std::ptrdiff_t>(first) + 1, remaining.end());
            current.push_back(mid);
            walk(std::move(next));
            current.pop_back();
        }
    };
    walk({space.initial_task()});
    return out;
}

ComponentSpace default_space() { return build_space(default_portfolio()); }

ComponentSpace load_space(std::istream& in) {
    Portfolio p;
    const Portfolio def = default_portfolio();
    auto known = [](const std::vector<std::string>& group, const std::string& name) {
        return std::find(group.begin(), group.end(), name) != group.end();
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find_first_of("#%");
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::string t;
        {
            std::istringstream iss(line);
            iss >> t;
        }
        if (t.empty()) continue;

        std::vector<std::string> parts;
        std::size_t start = 0;
        while (true) {
            const std::size_t colon = t.find(':', start);
            parts.push_back(t.substr(start, colon - start));
            if (colon == std::string::npos) break;
            start = colon + 1;
        }
        if (parts.size() < 2 || parts.size() > 3)
            throw SpaceFormatError("line " + std::to_string(line_no) + ": expected layer:name[:child-layer]");
        const std::string& layer = parts[0];
        const std::string& name = parts[1];
        const std::string child = parts.size() == 3 ? parts[2] : "";

        if (layer == "ml-meta") {
            if (!known(def.ml_meta, name))
                throw SpaceFormatError("line " + std::to_string(line_no) + ": unknown ml-meta '" + name + "'");
            if (!child.empty() && child != "mlbase")
                throw SpaceFormatError("line " + std::to_string(line_no) + ": ml-meta child must be mlbase");
            p.ml_meta.push_back(name);
        } else if (layer == "ml-base") {
            if (name == "MajorityLabelSet") {
                if (!child.empty())
                    throw SpaceFormatError("line " + std::to_string(line_no) + ": MajorityLabelSet takes no child");
                p.majority = true;
            } else {
                if (!known(def.ml_base, name))
                    throw SpaceFormatError("line " + std::to_string(line_no) + ": unknown ml-base '" + name + "'");
                if (!child.empty() && child != "weka")
                    throw SpaceFormatError("line " + std::to_string(line_no) + ": ml-base child must be weka");
                p.ml_base.push_back(name);
            }
        } else if (layer == "sl-meta") {
            if (!known(def.sl_meta, name))
                throw SpaceFormatError("line " + std::to_string(line_no) + ": unknown sl-meta '" + name + "'");
            if (!child.empty() && child != "slbase")
                throw SpaceFormatError("line " + std::to_string(line_no) + ": sl-meta child must be slbase");
            p.sl_meta.push_back(name);
        } else if (layer == "sl-base") {
            if (!known(def.sl_base, name))
                throw SpaceFormatError("line " + std::to_string(line_no) + ": unknown sl-base '" + name + "'");
            if (!child.empty())
                throw SpaceFormatError("line " + std::to_string(line_no) + ": sl-base takes no child");
            p.sl_base.push_back(name);
        } else {
            throw SpaceFormatError("line " + std::to_string(line_no) + ": unknown layer '" + layer + "'");
        }
    }

    for (auto* group : {&p.ml_meta, &p.ml_base, &p.sl_meta, &p.sl_base}) {
        std::sort(group->begin(), group->end());
        if (std::adjacent_find(group->begin(), group->end()) != group->end())
            throw SpaceFormatError("duplicate component in space file");
    }
    if (p.ml_base.empty() && !p.majority) throw SpaceFormatError("space declares no ml-base components");
    if (!p.ml_base.empty() && p.sl_base.empty())
        throw SpaceFormatError("learner-bearing ml-base components need at least one sl-base");
    if (!p.sl_meta.empty() && p.sl_base.empty()) throw SpaceFormatError("sl-meta components need at least one sl-base");
    return build_space(p);
}

ComponentSpace load_space_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SpaceFormatError("cannot open '" + path + "'");
    return load_space(f);
}

namespace {

SLSpec to_sl_spec(const ComponentInstance& inst) {
    const auto algo = sl_algo_from_name(inst.name);
    if (!algo) throw UnsupportedSpec("unknown single-label algorithm '" + inst.name + "'");
    if (sl_algo_is_meta(*algo)) {
        if (inst.children.size() != 1) throw UnsupportedSpec("'" + inst.name + "' needs exactly one child");
        return SLSpec::meta(*algo, to_sl_spec(inst.children[0]));
    }
    if (!inst.children.empty()) throw UnsupportedSpec("'" + inst.name + "' takes no child");
    return SLSpec::make(*algo);
}

}  // namespace

MLSpec to_ml_spec(const ComponentInstance& inst) {
    const auto algo = ml_algo_from_name(inst.name);
    if (!algo) throw UnsupportedSpec("unknown multi-label algorithm '" + inst.name + "'");
    if (ml_algo_is_meta(*algo)) {
        if (inst.children.size() != 1) throw UnsupportedSpec("'" + inst.name + "' needs exactly one child");
        return MLSpec::meta(*algo, to_ml_spec(inst.children[0]));
    }
    if (*algo == MLAlgo::MajorityLabelSet) {
        if (!inst.children.empty()) throw UnsupportedSpec("MajorityLabelSet takes no child");
        return MLSpec::majority();
    }
    if (inst.children.size() != 1) throw UnsupportedSpec("'" + inst.name + "' needs exactly one child");
    return MLSpec::base(*algo, to_sl_spec(inst.children[0]));
}

}  // namespace automlc
