#pragma once

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "evcorr/correlator.hpp"

namespace evcorr::testing {

/// Allocation enumeration by exhaustive search: every case, every
/// alternative, every combination of one completed instance per member.
/// Shares no code with the correlator's indexed search.
std::vector<Allocation> brute_force_allocations(const UncorrelatedEvent& event,
                                                const std::vector<CorrelatedInstance>& store,
                                                const TaskDependencies& td, const HeuristicTable& h);

/// Allocation probabilities straight from the definition, per case, in percent (uncapped).
std::map<CaseId, double> oracle_trust(const std::vector<Allocation>& allocations, const std::string& activity,
                                      const HeuristicTable& h);

}  // namespace evcorr::testing
