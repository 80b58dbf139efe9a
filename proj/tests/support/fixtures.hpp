#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "evcorr/event_io.hpp"
#include "evcorr/heuristics.hpp"
#include "evcorr/task_dependencies.hpp"
#include "evcorr/workflow_net.hpp"

namespace evcorr::testing {

inline std::string fixture(const std::string& name) { return std::string(EVCORR_FIXTURES) + "/" + name; }

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline WorkflowNet running_net() { return load_net(fixture("running_net.pnml")); }
inline TaskDependencies running_td() { return build_task_dependencies(running_net()); }
inline HeuristicTable running_heuristics() { return load_heuristics(slurp(fixture("running_heuristics.csv"))); }

inline std::vector<UncorrelatedEvent> running_stream() {
    std::ifstream in(fixture("running_stream.csv"));
    return read_events(in, EventFormat::csv);
}

inline UncorrelatedEvent at(const std::string& hms, const std::string& activity) {
    return UncorrelatedEvent{parse_timestamp("2019-06-16 " + hms), activity, std::nullopt, std::nullopt};
}

}  // namespace evcorr::testing
