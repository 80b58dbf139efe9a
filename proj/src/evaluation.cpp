#include "evcorr/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

namespace evcorr {

EvaluationError::EvaluationError(std::string code, const std::string& message)
    : std::runtime_error(message), code_(std::move(code)) {}

std::vector<std::optional<CaseId>> select_cases(const std::vector<CorrelatedInstance>& predicted,
                                                std::size_t stream_size, ScoreMode mode) {
    std::vector<std::optional<CaseId>> chosen(stream_size);
    std::vector<double> best(stream_size, -1.0);
    for (const auto& inst : predicted) {
        if (inst.event_seq >= stream_size)
            throw EvaluationError("POPULATION_MISMATCH",
                                  "prediction for event " + std::to_string(inst.event_seq) + " beyond the stream");
        if (inst.is_noise() || *inst.trust < mode.threshold) continue;
        auto& slot = chosen[inst.event_seq];
        auto& b = best[inst.event_seq];
        if (*inst.trust > b || (*inst.trust == b && *inst.case_id < *slot)) {
            slot = inst.case_id;
            b = *inst.trust;
        }
    }
    return chosen;
}

std::map<CaseId, std::string> align_cases(const std::vector<std::optional<CaseId>>& predicted,
                                          const std::vector<std::string>& truth) {
    std::map<std::pair<CaseId, std::string>, std::size_t> overlap;
    for (std::size_t i = 0; i < predicted.size() && i < truth.size(); ++i)
        if (predicted[i]) ++overlap[{*predicted[i], truth[i]}];

    std::vector<std::tuple<std::size_t, CaseId, std::string>> pairs;
    for (const auto& [key, n] : overlap) pairs.emplace_back(n, key.first, key.second);
    std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return std::get<2>(a) < std::get<2>(b);
    });

    std::map<CaseId, std::string> mapping;
    std::set<std::string> taken;
    for (const auto& [n, p, t] : pairs) {
        if (mapping.count(p) || taken.count(t)) continue;
        mapping.emplace(p, t);
        taken.insert(t);
    }
    return mapping;
}

ConfusionCounts score(const std::vector<CorrelatedInstance>& predicted, const std::vector<UncorrelatedEvent>& stream,
                      const GroundTruth& truth, ScoreMode mode) {
    if (truth.size() != stream.size())
        throw EvaluationError("POPULATION_MISMATCH", "ground truth has " + std::to_string(truth.size()) +
                                                         " events, stream has " + std::to_string(stream.size()));
    std::vector<std::string> labels;
    labels.reserve(stream.size());
    for (const auto& key : keys_for(stream)) {
        if (!truth.contains(key))
            throw EvaluationError("POPULATION_MISMATCH", "no ground truth for " + format_timestamp(key.timestamp) +
                                                             " " + key.activity);
        labels.push_back(truth.case_of(key));
    }

    auto chosen = select_cases(predicted, stream.size(), mode);
    auto mapping = align_cases(chosen, labels);

    ConfusionCounts c;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        if (!chosen[i]) {
            ++c.fn;
            continue;
        }
        auto it = mapping.find(*chosen[i]);
        if (it != mapping.end() && it->second == labels[i])
            ++c.tp;
        else
            ++c.fp;
    }
    return c;
}

double precision(const ConfusionCounts& c) {
    auto d = c.tp + c.fp;
    return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double recall(const ConfusionCounts& c) {
    auto d = c.tp + c.fn;
    return d == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(d);
}

double f_score(const ConfusionCounts& c) {
    auto p = precision(c), r = recall(c);
    return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

LatencySummary latency_report(const std::vector<std::chrono::nanoseconds>& latencies) {
    if (latencies.empty()) throw std::invalid_argument("latency report needs at least one event");
    std::vector<double> ms;
    ms.reserve(latencies.size());
    for (auto l : latencies) ms.push_back(std::chrono::duration<double, std::milli>(l).count());
    std::sort(ms.begin(), ms.end());

    LatencySummary s;
    s.count = ms.size();
    double sum = 0.0;
    for (double v : ms) sum += v;
    s.mean_ms = sum / static_cast<double>(ms.size());
    auto rank = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(ms.size())));
    s.p99_ms = ms[std::max<std::size_t>(rank, 1) - 1];
    s.max_ms = ms.back();
    return s;
}

LatencySummary latency_report(const ReplayReport& report) { return latency_report(report.latencies); }

nlohmann::json report_json(const ConfusionCounts& c, const std::optional<LatencySummary>& latency) {
    nlohmann::json j{{"tp", c.tp},
                     {"fp", c.fp},
                     {"fn", c.fn},
                     {"precision", precision(c)},
                     {"recall", recall(c)},
                     {"f_score", f_score(c)}};
    if (latency)
        j["latency_ms"] = {{"mean", latency->mean_ms}, {"p99", latency->p99_ms}, {"max", latency->max_ms}};
    return j;
}

}  // namespace evcorr
