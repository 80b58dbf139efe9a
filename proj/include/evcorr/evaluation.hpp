#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "evcorr/event_io.hpp"
#include "evcorr/events.hpp"
#include "evcorr/replay.hpp"

namespace evcorr {

class EvaluationError : public std::runtime_error {
public:
    EvaluationError(std::string code, const std::string& message);
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Which correlated instance represents an event: the highest-trust one
/// (ties to the smaller case id), optionally only among instances whose
/// trust reaches a threshold.
struct ScoreMode {
    double threshold = 0.0;

    static ScoreMode max_trust() { return {}; }
    static ScoreMode at_least(double t) { return {t}; }
};

/// Per stream position, the case chosen for that event, if any.
std::vector<std::optional<CaseId>> select_cases(const std::vector<CorrelatedInstance>& predicted,
                                                std::size_t stream_size, ScoreMode mode = {});

/// One-to-one partial mapping between predicted and true case ids, built
/// greedily by descending overlap (ties: smaller predicted id, then smaller
/// true id). Both vectors are indexed by stream position.
std::map<CaseId, std::string> align_cases(const std::vector<std::optional<CaseId>>& predicted,
                                          const std::vector<std::string>& truth);

/// Per-event scoring of correlator output over `stream`, whose true cases
/// are in `truth`. Instance event_seq values index into `stream`.
/// Throws EvaluationError("POPULATION_MISMATCH") when the stream, the
/// ground truth and the predictions do not cover the same events.
ConfusionCounts score(const std::vector<CorrelatedInstance>& predicted, const std::vector<UncorrelatedEvent>& stream,
                      const GroundTruth& truth, ScoreMode mode = {});

double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
double f_score(const ConfusionCounts& c);

struct LatencySummary {
    double mean_ms = 0.0;
    double p99_ms = 0.0;  // nearest rank
    double max_ms = 0.0;
    std::size_t count = 0;
};

/// Throws std::invalid_argument for a report without events.
LatencySummary latency_report(const ReplayReport& report);
LatencySummary latency_report(const std::vector<std::chrono::nanoseconds>& latencies);

nlohmann::json report_json(const ConfusionCounts& c, const std::optional<LatencySummary>& latency = std::nullopt);

}  // namespace evcorr
