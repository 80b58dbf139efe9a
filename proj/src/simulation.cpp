#include "evcorr/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>

namespace evcorr {

namespace {

struct SimTransition {
    const Transition* t;
    std::vector<std::string> pre, post;
    double weight;
    bool from_source;
};

}  // namespace

std::vector<LabeledEvent> simulate_log(const WorkflowNet& net, const HeuristicTable& heuristics,
                                       const SimulationConfig& config) {
    std::vector<std::string> sources;
    for (const auto& p : net.places())
        if (net.preset(p).empty()) sources.push_back(p);
    if (sources.size() != 1) throw std::invalid_argument("simulation needs exactly one source place");
    const auto& source = sources.front();

    std::vector<SimTransition> ts;
    for (const auto& t : net.transitions()) {
        if (!t.is_silent) heuristics.bounds(t.label);
        auto key = t.is_silent ? t.id : t.label;
        auto w = config.weights.count(key) ? config.weights.at(key) : 1.0;
        auto pre = net.preset(t.id);
        bool from_source = std::find(pre.begin(), pre.end(), source) != pre.end();
        ts.push_back({&t, std::move(pre), net.postset(t.id), w, from_source});
    }

    std::mt19937_64 rng(config.seed);
    std::exponential_distribution<double> arrival(1.0 / config.mean_interarrival_s);
    std::vector<std::pair<LabeledEvent, std::size_t>> log;  // event, generation order

    auto case_start = config.start;
    for (std::size_t c = 1; c <= config.cases; ++c) {
        auto gap = std::max<long long>(1, std::llround(arrival(rng)));
        case_start += Duration{gap};

        std::map<std::string, std::deque<Timestamp>> marking;
        marking[source].push_back(case_start);
        std::size_t emitted = 0;
        while (emitted < config.max_events_per_case) {
            std::vector<const SimTransition*> enabled;
            std::vector<double> weights;
            for (const auto& st : ts) {
                bool ok = std::all_of(st.pre.begin(), st.pre.end(),
                                      [&](const std::string& p) { return !marking[p].empty(); });
                if (ok && st.weight > 0.0) {
                    enabled.push_back(&st);
                    weights.push_back(st.weight);
                }
            }
            if (enabled.empty()) break;
            std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
            const auto& st = *enabled[pick(rng)];

            Timestamp ready = case_start;
            for (const auto& p : st.pre) {
                ready = std::max(ready, marking[p].front());
                marking[p].pop_front();
            }
            Timestamp done = ready;
            if (!st.t->is_silent) {
                if (!st.from_source) {
                    const auto& b = heuristics.bounds(st.t->label);
                    std::uniform_int_distribution<std::int64_t> units(b.min, b.max);
                    done += units(rng) * heuristics.unit();
                }
                UncorrelatedEvent e{done, st.t->label, std::nullopt, std::nullopt};
                log.emplace_back(LabeledEvent{std::move(e), std::to_string(c)}, log.size());
                ++emitted;
            }
            for (const auto& p : st.post) marking[p].push_back(done);
        }
    }

    std::stable_sort(log.begin(), log.end(),
                     [](const auto& a, const auto& b) { return a.first.event.timestamp < b.first.event.timestamp; });
    std::vector<LabeledEvent> out;
    out.reserve(log.size());
    for (auto& [e, order] : log) out.push_back(std::move(e));
    return out;
}

}  // namespace evcorr
