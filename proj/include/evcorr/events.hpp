#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "evcorr/task_dependencies.hpp"
#include "evcorr/time.hpp"

namespace evcorr {

enum class Lifecycle { started, completed };

/// Accepts started/start and completed/complete, case-insensitively.
std::optional<Lifecycle> parse_lifecycle(std::string_view text);
std::string_view to_string(Lifecycle lc);

/// A raw stream record: no case id.
struct UncorrelatedEvent {
    Timestamp timestamp;
    std::string activity;
    std::optional<Lifecycle> lifecycle;  // absent means completed
    std::optional<std::string> resource;

    Lifecycle effective_lifecycle() const { return lifecycle.value_or(Lifecycle::completed); }

    friend bool operator==(const UncorrelatedEvent&, const UncorrelatedEvent&) = default;
};

/// An event together with its original case label, as found in complete logs.
struct LabeledEvent {
    UncorrelatedEvent event;
    std::string case_id;

    friend bool operator==(const LabeledEvent&, const LabeledEvent&) = default;
};

/// Case identifiers assigned by the correlator: dense, starting at 1.
struct CaseId {
    std::uint32_t value = 0;

    friend auto operator<=>(const CaseId&, const CaseId&) = default;
};

enum class NoiseReason { none, unknown_activity, no_allocation };
std::string_view to_string(NoiseReason reason);

/// A clone of an incoming event attributed to one case, or a noise record
/// (no case, no trust) when no case could take the event.
struct CorrelatedInstance {
    std::uint64_t event_seq = 0;  // position of the source event in the stream
    Timestamp timestamp;
    std::string activity;
    std::optional<CaseId> case_id;
    std::optional<double> trust;  // percent, capped at 100
    double raw_trust = 0.0;       // uncapped sum, percent
    std::optional<Lifecycle> lifecycle;
    std::optional<std::string> resource;
    std::uint32_t allocation_count = 0;  // allocations this case received for the event
    std::vector<DependencySet> dependency_sets;  // alternatives those allocations used
    NoiseReason noise = NoiseReason::none;

    bool is_noise() const { return !case_id.has_value(); }
};

}  // namespace evcorr
