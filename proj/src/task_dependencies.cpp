#include "evcorr/task_dependencies.hpp"

#include <algorithm>
#include <functional>

namespace evcorr {

bool TaskDependencies::is_start(const std::string& activity) const {
    auto it = deps.find(activity);
    return it != deps.end() && it->second.empty();
}

const Alternatives& TaskDependencies::of(const std::string& activity) const {
    auto it = deps.find(activity);
    if (it == deps.end()) throw std::out_of_range("unknown activity '" + activity + "'");
    return it->second;
}

Alternatives non_cartesian_product(const std::vector<std::set<std::string>>& families) {
    Alternatives acc{{}};
    for (const auto& family : families) {
        if (family.empty()) throw ModelError("EMPTY_FAMILY", "synchronizing place has no producer");
        Alternatives next;
        for (const auto& partial : acc)
            for (const auto& choice : family) {
                auto s = partial;
                s.insert(choice);
                next.insert(std::move(s));
            }
        acc = std::move(next);
    }
    return acc;
}

RawDependencies raw_dependencies(const WorkflowNet& net) {
    RawDependencies raw;
    for (const auto& t : net.transitions()) {
        auto inputs = net.preset(t.id);
        if (inputs.empty())
            throw ModelError("EMPTY_PRESET", "transition '" + t.id + "' has no input place");
        auto& alts = raw.deps[t.id];
        if (inputs.size() == 1) {
            for (auto& producer : net.preset(inputs.front())) alts.insert({producer});
        } else {
            std::vector<std::set<std::string>> families;
            for (const auto& p : inputs) {
                auto producers = net.preset(p);
                if (producers.empty())
                    throw ModelError("EMPTY_FAMILY", "input place '" + p + "' of synchronizing transition '" + t.id +
                                                         "' has no producer");
                families.emplace_back(producers.begin(), producers.end());
            }
            alts = non_cartesian_product(families);
        }
    }
    return raw;
}

TaskDependencies eliminate_silent(const RawDependencies& raw, const WorkflowNet& net) {
    auto silent = [&](const std::string& id) { return net.transition(id).is_silent; };
    auto alternatives_of = [&](const std::string& id) -> const Alternatives& {
        auto it = raw.deps.find(id);
        if (it == raw.deps.end()) throw ModelError("UNKNOWN_NODE", "no dependencies recorded for '" + id + "'");
        return it->second;
    };

    // Expands one set; `path` holds the silent transitions being substituted.
    std::function<void(const DependencySet&, std::vector<std::string>&, Alternatives&)> expand =
        [&](const DependencySet& set, std::vector<std::string>& path, Alternatives& out) {
            auto x = std::find_if(set.begin(), set.end(), silent);
            if (x == set.end()) {
                out.insert(set);
                return;
            }
            if (std::find(path.begin(), path.end(), *x) != path.end())
                throw ModelError("SILENT_CYCLE", "silent transitions form a cycle through '" + *x + "'");
            const auto& replacement = alternatives_of(*x);
            DependencySet rest = set;
            rest.erase(*x);
            if (replacement.empty()) {
                // x fires at case start; only meaningful if nothing else is awaited.
                if (!rest.empty())
                    throw ModelError("VACUOUS_DEPENDENCY", "silent start transition '" + *x +
                                                              "' is synchronized with other dependencies");
                out.insert(DependencySet{});
                return;
            }
            path.push_back(*x);
            for (const auto& alt : replacement) {
                auto merged = rest;
                merged.insert(alt.begin(), alt.end());
                expand(merged, path, out);
            }
            path.pop_back();
        };

    TaskDependencies td;
    for (const auto& t : net.transitions()) {
        if (t.is_silent) continue;
        Alternatives expanded;
        for (const auto& set : alternatives_of(t.id)) {
            std::vector<std::string> path;
            expand(set, path, expanded);
        }
        Alternatives labelled;
        bool can_start = false;
        for (const auto& set : expanded) {
            if (set.empty()) {
                can_start = true;
                continue;
            }
            DependencySet named;
            for (const auto& id : set) named.insert(net.transition(id).label);
            labelled.insert(std::move(named));
        }
        if (can_start) {
            if (!labelled.empty())
                td.warnings.push_back({std::string(diag::kStartOnCycle), t.id,
                                       "start activity '" + t.label +
                                           "' can also be re-entered; repeated occurrences open new cases"});
            labelled.clear();
        }
        td.deps[t.label] = std::move(labelled);
    }
    return td;
}

DependencyGraph build_dependency_graph(const TaskDependencies& td) {
    DependencyGraph g;
    for (const auto& [activity, alts] : td.deps) {
        g.nodes.insert(activity);
        for (const auto& set : alts)
            for (const auto& x : set) {
                g.nodes.insert(x);
                g.edges.emplace(x, activity);
            }
    }
    return g;
}

namespace {

// Tarjan's algorithm; returns component index per node.
std::map<std::string, int> strongly_connected_components(const DependencyGraph& g) {
    std::map<std::string, std::vector<std::string>> succ;
    for (const auto& [from, to] : g.edges) succ[from].push_back(to);

    std::map<std::string, int> index, low, component;
    std::vector<std::string> stack;
    std::set<std::string> on_stack;
    int counter = 0, components = 0;

    std::function<void(const std::string&)> visit = [&](const std::string& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack.insert(v);
        for (const auto& w : succ[v]) {
            if (!index.count(w)) {
                visit(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack.count(w)) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::string w;
            do {
                w = stack.back();
                stack.pop_back();
                on_stack.erase(w);
                component[w] = components;
            } while (w != v);
            ++components;
        }
    };
    for (const auto& n : g.nodes)
        if (!index.count(n)) visit(n);
    return component;
}

}  // namespace

std::set<std::string> find_loop_entries(const TaskDependencies& td) {
    auto graph = build_dependency_graph(td);
    auto component = strongly_connected_components(graph);
    std::set<std::string> entries;
    for (const auto& [activity, alts] : td.deps) {
        if (alts.size() < 2) continue;
        for (const auto& set : alts)
            for (const auto& x : set) {
                bool on_cycle = x == activity || component.at(x) == component.at(activity);
                if (on_cycle) entries.insert(x);
            }
    }
    return entries;
}

TaskDependencies build_task_dependencies(const WorkflowNet& net) {
    auto td = eliminate_silent(raw_dependencies(net), net);
    td.loop_entries = find_loop_entries(td);
    return td;
}

nlohmann::json to_json(const TaskDependencies& td) {
    nlohmann::json deps = nlohmann::json::object();
    for (const auto& [activity, alts] : td.deps) {
        auto arr = nlohmann::json::array();
        for (const auto& set : alts) arr.push_back(std::vector<std::string>(set.begin(), set.end()));
        deps[activity] = std::move(arr);
    }
    return {{"deps", std::move(deps)},
            {"loop_entries", std::vector<std::string>(td.loop_entries.begin(), td.loop_entries.end())}};
}

TaskDependencies task_dependencies_from_json(const nlohmann::json& j) {
    TaskDependencies td;
    for (const auto& [activity, alts] : j.at("deps").items()) {
        auto& target = td.deps[activity];
        for (const auto& set : alts) target.insert(set.get<DependencySet>());
    }
    td.loop_entries = j.at("loop_entries").get<std::set<std::string>>();
    for (const auto& [activity, alts] : td.deps)
        for (const auto& set : alts)
            for (const auto& x : set)
                if (!td.deps.count(x))
                    throw std::invalid_argument("dependency '" + x + "' of '" + activity + "' is not an activity");
    return td;
}

}  // namespace evcorr
