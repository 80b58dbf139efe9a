#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evcorr/events.hpp"
#include "evcorr/task_dependencies.hpp"
#include "evcorr/time.hpp"

namespace evcorr {

class HeuristicsError : public std::runtime_error {
public:
    HeuristicsError(std::string code, const std::string& message, std::size_t line = 0);
    const std::string& code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string code_;
    std::size_t line_;
};

/// Integral (min, max) execution-duration bounds, in table units.
struct HeuristicBounds {
    std::int64_t min = 0;
    std::int64_t max = 0;

    friend bool operator==(const HeuristicBounds&, const HeuristicBounds&) = default;
};

/// Per-activity execution heuristics. Values are whole multiples of `unit`;
/// the mean and the range are evaluated in that unit.
class HeuristicTable {
public:
    explicit HeuristicTable(Duration unit = Duration{1});

    /// Throws HeuristicsError: NON_POSITIVE unless 0 < min, MIN_GT_MAX unless min <= max.
    void set(const std::string& activity, std::int64_t min, std::int64_t max);

    bool contains(std::string_view activity) const;
    const HeuristicBounds& bounds(std::string_view activity) const;
    Duration unit() const noexcept { return unit_; }
    const std::map<std::string, HeuristicBounds, std::less<>>& entries() const noexcept { return entries_; }

    Duration min_of(std::string_view activity) const;
    Duration max_of(std::string_view activity) const;
    /// ceil((min + max) / 2)
    Duration avg_of(std::string_view activity) const;
    /// [min, max] without the mean, ascending.
    std::vector<Duration> range_of(std::string_view activity) const;
    /// |range_of(activity)| = max - min
    std::size_t range_size(std::string_view activity) const;
    /// Inclusive on both bounds.
    bool within(std::string_view activity, Duration d) const;

    friend bool operator==(const HeuristicTable&, const HeuristicTable&) = default;

private:
    Duration unit_;
    std::map<std::string, HeuristicBounds, std::less<>> entries_;
};

/// CSV `activity,min,max`; the header line is optional. Empty input gives an
/// empty table.
HeuristicTable load_heuristics(std::string_view text, Duration unit = Duration{1});
std::string save_heuristics(const HeuristicTable& table);

struct HeuristicExtraction {
    HeuristicTable table;
    std::vector<std::string> warnings;
};

/// Min/max observed durations per activity. Logs carrying started events are
/// measured start-to-completion per case; otherwise each event is measured
/// from the latest satisfied dependency alternative in its case. Activities
/// with no observation are absent from the result.
HeuristicExtraction extract_heuristics(const std::vector<LabeledEvent>& log, const TaskDependencies& td,
                                       Duration unit = Duration{1});

}  // namespace evcorr
