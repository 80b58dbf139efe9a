#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "evcorr/workflow_net.hpp"

namespace evcorr {

/// Activities that must all have been observed in a case before a dependent
/// activity may be correlated to that case.
using DependencySet = std::set<std::string>;
using Alternatives = std::set<DependencySet>;

/// Per observable activity, the alternative dependency sets (exclusive
/// choices), plus the activities flagged as loop entries.
struct TaskDependencies {
    std::map<std::string, Alternatives> deps;
    std::set<std::string> loop_entries;
    /// Analysis notes that do not make the model unusable (e.g. START_ON_CYCLE).
    std::vector<NetIssue> warnings;

    bool contains(const std::string& activity) const { return deps.count(activity) != 0; }
    bool is_start(const std::string& activity) const;
    bool is_loop_entry(const std::string& activity) const { return loop_entries.count(activity) != 0; }
    /// Throws std::out_of_range for an unknown activity.
    const Alternatives& of(const std::string& activity) const;

    friend bool operator==(const TaskDependencies& a, const TaskDependencies& b) {
        return a.deps == b.deps && a.loop_entries == b.loop_entries;
    }
};

/// Dependencies keyed and expressed by transition id, silent transitions
/// included. Intermediate result of the structural pass.
struct RawDependencies {
    std::map<std::string, Alternatives> deps;
};

struct DependencyGraph {
    std::set<std::string> nodes;
    /// (x, t): x is a member of some dependency set of t.
    std::set<std::pair<std::string, std::string>> edges;
};

/// All sets formed by picking one element from each family. Throws
/// ModelError("EMPTY_FAMILY") if a family is empty.
Alternatives non_cartesian_product(const std::vector<std::set<std::string>>& families);

/// Producers of the single input place become separate alternatives;
/// producers of several input places are combined by non_cartesian_product.
RawDependencies raw_dependencies(const WorkflowNet& net);

/// Replaces every silent member x of a dependency set S with each
/// alternative of x, to fixpoint, and maps transition ids to labels.
/// A silent transition that can start a case turns the set containing only
/// it into the start alternative.
TaskDependencies eliminate_silent(const RawDependencies& raw, const WorkflowNet& net);

DependencyGraph build_dependency_graph(const TaskDependencies& td);

/// x is a loop entry iff some activity t with two or more alternatives has x
/// in one of them and the edge x -> t lies on a cycle of the dependency graph.
std::set<std::string> find_loop_entries(const TaskDependencies& td);

/// Full preprocessing: raw dependencies, silent elimination, loop entries.
TaskDependencies build_task_dependencies(const WorkflowNet& net);

/// {"deps": {activity: [[labels]]}, "loop_entries": [labels]}
nlohmann::json to_json(const TaskDependencies& td);
TaskDependencies task_dependencies_from_json(const nlohmann::json& j);

}  // namespace evcorr
