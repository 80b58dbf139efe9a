#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "evcorr/events.hpp"
#include "evcorr/heuristics.hpp"
#include "evcorr/workflow_net.hpp"

namespace evcorr {

struct SimulationConfig {
    std::size_t cases = 100;
    double mean_interarrival_s = 86.4;
    /// Relative firing weight by transition label (or id for silent ones); default 1.
    std::map<std::string, double> weights;
    /// Cases that have not finished after this many events are cut off.
    std::size_t max_events_per_case = 500;
    std::uint64_t seed = 1;
    Timestamp start = parse_timestamp("2019-06-16 00:00:00");
};

/// Plays the token game of a workflow net once per case. Cases start at
/// exponential inter-arrival times; enabled transitions are picked by
/// weight; an observable transition completes a uniform whole number of
/// heuristic units in [min, max] after its input tokens are ready, except
/// transitions consuming from the source place, which complete at the case
/// start. Silent transitions take no time and emit nothing. The log is
/// ordered by timestamp; case ids are "1", "2", ... in start order.
/// Throws HeuristicsError if an observable label lacks heuristics.
std::vector<LabeledEvent> simulate_log(const WorkflowNet& net, const HeuristicTable& heuristics,
                                       const SimulationConfig& config = {});

}  // namespace evcorr
