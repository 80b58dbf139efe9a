#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "evcorr/events.hpp"

namespace evcorr {

enum class EventFormat { csv, jsonl };

/// Picks jsonl for .jsonl/.ndjson/.json paths, csv otherwise.
EventFormat format_for_path(const std::string& path);
std::optional<EventFormat> parse_event_format(std::string_view name);

class EventIoError : public std::runtime_error {
public:
    EventIoError(std::string code, const std::string& message, std::size_t line = 0);
    const std::string& code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string code_;
    std::size_t line_;
};

struct EventRead {
    std::vector<LabeledEvent> events;  // case_id empty when the source has none
    bool has_case_ids = false;
    std::vector<std::string> warnings;
};

/// CSV with a header naming the columns (timestamp and activity required;
/// lifecycle, resource, case_id optional, any order), or JSON lines with the
/// same keys. The result is stably sorted by timestamp; a warning is recorded
/// when the input was not already in order.
/// Throws EventIoError: MISSING_COLUMN, MALFORMED_ROW, BAD_TIMESTAMP, BAD_LIFECYCLE.
EventRead read_labeled_events(std::istream& in, EventFormat format);
EventRead read_labeled_events_file(const std::string& path, std::optional<EventFormat> format = std::nullopt);

/// Convenience wrapper discarding case ids.
std::vector<UncorrelatedEvent> read_events(std::istream& in, EventFormat format,
                                           std::vector<std::string>* warnings = nullptr);

/// Identifies an event of a stream independently of its case: the n-th
/// (0-based) event with this timestamp and activity, in arrival order.
struct EventKey {
    Timestamp timestamp;
    std::string activity;
    std::uint32_t ordinal = 0;

    friend auto operator<=>(const EventKey&, const EventKey&) = default;
};

/// Assigns ordinals to a sequence of events in order.
std::vector<EventKey> keys_for(const std::vector<UncorrelatedEvent>& events);

class GroundTruth {
public:
    void add(EventKey key, std::string case_id);
    /// Throws std::out_of_range for an unknown key.
    const std::string& case_of(const EventKey& key) const;
    bool contains(const EventKey& key) const { return truth_.count(key) != 0; }
    std::size_t size() const noexcept { return truth_.size(); }
    const std::map<EventKey, std::string>& entries() const noexcept { return truth_; }

    /// Reattaches the original case ids to events produced by strip_case_ids.
    std::vector<LabeledEvent> relabel(const std::vector<UncorrelatedEvent>& events) const;

private:
    std::map<EventKey, std::string> truth_;
};

struct StrippedLog {
    std::vector<UncorrelatedEvent> events;
    GroundTruth truth;
};

StrippedLog strip_case_ids(const std::vector<LabeledEvent>& labeled);

/// `case_id,timestamp,activity,trust,lifecycle,resource`; noise rows have
/// empty case_id and trust.
void write_correlated_csv(std::ostream& out, const std::vector<CorrelatedInstance>& instances);
void write_labeled_csv(std::ostream& out, const std::vector<LabeledEvent>& events);

}  // namespace evcorr
