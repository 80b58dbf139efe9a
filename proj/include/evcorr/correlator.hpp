#pragma once

#include <compare>
#include <deque>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "evcorr/case_store.hpp"
#include "evcorr/events.hpp"
#include "evcorr/heuristics.hpp"
#include "evcorr/task_dependencies.hpp"

namespace evcorr {

class CorrelationError : public std::runtime_error {
public:
    CorrelationError(std::string code, const std::string& message);
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// completed_only: every event marks an activity completion (lifecycle absent
/// or "completed"). started_completed: activities emit a started and a
/// completed event; completions pair with the open start in each case.
enum class StreamMode { completed_only, started_completed };

enum class AllocationKind { avg, range };

/// One way an event can join a case: the dependency alternative it satisfies
/// there, the latest timestamp among the instances used, and the elapsed time.
struct Allocation {
    CaseId case_id;
    DependencySet dependency_set;
    Timestamp anchor;
    Duration duration{0};
    AllocationKind kind = AllocationKind::range;

    friend auto operator<=>(const Allocation&, const Allocation&) = default;
};

/// Probability of one of `m` allocations of an event.
///   m = 1            -> 1
///   m > 1, avg kind  -> (m + 1) / m^2
///   m > 1, range     -> (m - 1 / range_size) / m^2
/// Throws CorrelationError("DEGENERATE_RANGE") for a range allocation with
/// m > 1 and range_size = 0.
double instance_probability(std::size_t m, AllocationKind kind, std::size_t range_size);
double instance_probability(std::size_t m, AllocationKind kind, std::string_view activity, const HeuristicTable& h);

struct IngestResult {
    std::vector<CorrelatedInstance> instances;  // one per case, or a single noise instance
    std::size_t allocation_count = 0;

    bool noise() const { return instances.size() == 1 && instances.front().is_noise(); }
};

/// Assigns case ids to unlabeled events as they arrive. Ingest calls must be
/// serialized and come in non-decreasing timestamp order.
class Correlator {
public:
    /// Throws CorrelationError("MISSING_HEURISTICS") if an activity of `td`
    /// has no heuristic entry.
    Correlator(TaskDependencies td, HeuristicTable heuristics, StreamMode mode = StreamMode::completed_only);

    /// Start events open a case with trust 100. Other events are cloned into
    /// every case that admits an allocation; per-case trust is 100 times the
    /// sum of that case's allocation probabilities, capped at 100. Events no
    /// case admits, and out-of-model activities, become noise instances.
    /// Throws CorrelationError OUT_OF_ORDER or MIXED_LIFECYCLE.
    IngestResult ingest(const UncorrelatedEvent& event);

    /// Opens a new case for a start event. Throws CorrelationError NOT_A_START.
    CorrelatedInstance open_case(const UncorrelatedEvent& event);

    /// Allocations the event would receive against the current store, sorted.
    /// Empty for start events and unknown activities.
    std::vector<Allocation> candidate_allocations(const UncorrelatedEvent& event) const;

    /// Instances with trust >= threshold ordered by (timestamp, case id);
    /// noise instances only when threshold is 0.
    std::vector<CorrelatedInstance> export_log(double threshold = 0.0) const;
    std::vector<CorrelatedInstance> case_view(CaseId id) const { return store_.case_view(id); }

    const CaseStore& store() const noexcept { return store_; }
    const TaskDependencies& dependencies() const noexcept { return td_; }
    const HeuristicTable& heuristics() const noexcept { return heuristics_; }
    StreamMode mode() const noexcept { return mode_; }
    std::size_t noise_count() const noexcept { return store_.noise_instances().size(); }
    std::size_t events_seen() const noexcept { return next_seq_; }

private:
    std::vector<Allocation> dependency_allocations(const UncorrelatedEvent& event, Duration lower, Duration upper,
                                                   bool fixed_kind_avg) const;
    std::vector<Allocation> completion_allocations(const UncorrelatedEvent& event) const;
    CorrelatedInstance base_instance(const UncorrelatedEvent& event) const;
    IngestResult store_noise(const UncorrelatedEvent& event, NoiseReason reason);

    TaskDependencies td_;
    HeuristicTable heuristics_;
    StreamMode mode_;
    CaseStore store_;
    std::uint64_t next_seq_ = 0;
    std::optional<Timestamp> last_timestamp_;
    // Started instances not yet paired with a completion, per activity and case.
    std::map<std::string, std::map<CaseId, std::deque<Timestamp>>, std::less<>> open_starts_;
};

}  // namespace evcorr
