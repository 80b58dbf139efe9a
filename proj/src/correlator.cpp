#include "evcorr/correlator.hpp"

#include <algorithm>
#include <set>

namespace evcorr {

namespace {
// Sums of probabilities that should reach exactly 1 can land a hair short.
constexpr double kCertainEpsilon = 1e-9;
}  // namespace

CorrelationError::CorrelationError(std::string code, const std::string& message)
    : std::runtime_error(message), code_(std::move(code)) {}

double instance_probability(std::size_t m, AllocationKind kind, std::size_t range_size) {
    if (m == 0) throw std::invalid_argument("instance_probability: no allocations");
    if (m == 1) return 1.0;
    const double md = static_cast<double>(m);
    if (kind == AllocationKind::avg) return (md + 1.0) / (md * md);
    if (range_size == 0)
        throw CorrelationError("DEGENERATE_RANGE", "range allocation for an activity with min == max");
    return (md - 1.0 / static_cast<double>(range_size)) / (md * md);
}

double instance_probability(std::size_t m, AllocationKind kind, std::string_view activity, const HeuristicTable& h) {
    return instance_probability(m, kind, h.range_size(activity));
}

Correlator::Correlator(TaskDependencies td, HeuristicTable heuristics, StreamMode mode)
    : td_(std::move(td)), heuristics_(std::move(heuristics)), mode_(mode) {
    std::vector<std::string> missing;
    for (const auto& [activity, alts] : td_.deps)
        if (!heuristics_.contains(activity)) missing.push_back(activity);
    if (!missing.empty()) {
        std::string list;
        for (const auto& a : missing) list += (list.empty() ? "" : ", ") + a;
        throw CorrelationError("MISSING_HEURISTICS", "no heuristics for: " + list);
    }
}

CorrelatedInstance Correlator::base_instance(const UncorrelatedEvent& event) const {
    CorrelatedInstance inst;
    inst.event_seq = next_seq_;
    inst.timestamp = event.timestamp;
    inst.activity = event.activity;
    inst.lifecycle = event.lifecycle;
    inst.resource = event.resource;
    return inst;
}

std::vector<Allocation> Correlator::dependency_allocations(const UncorrelatedEvent& event, Duration lower,
                                                           Duration upper, bool fixed_kind_avg) const {
    const auto& a = event.activity;
    const auto avg = heuristics_.avg_of(a);
    const auto& instances = store_.instances();
    std::set<Allocation> found;

    for (const auto& set : td_.of(a)) {
        const bool has_non_entry =
            std::any_of(set.begin(), set.end(), [&](const std::string& x) { return !td_.is_loop_entry(x); });
        for (const auto& x : set) {
            const auto& idx = store_.activity_instances(x);
            // Arrival order is timestamp order, so the window is a contiguous slice.
            auto first = std::lower_bound(idx.begin(), idx.end(), event.timestamp - upper,
                                          [&](std::size_t i, Timestamp t) { return instances[i].timestamp < t; });
            for (auto it = first; it != idx.end(); ++it) {
                const auto& dep = instances[*it];
                if (dep.timestamp > event.timestamp - lower) break;
                if (dep.lifecycle.value_or(Lifecycle::completed) != Lifecycle::completed) continue;
                const auto c = *dep.case_id;
                const auto anchor = dep.timestamp;

                bool satisfied = true;
                for (const auto& y : set) {
                    if (y == x) continue;
                    auto t = store_.first_completed(c, y);
                    if (!t || *t > anchor) {
                        satisfied = false;
                        break;
                    }
                }
                if (!satisfied) continue;

                // The case already holds a certain occurrence of this activity
                // after the anchor: the dependency was consumed, unless every
                // member may legitimately re-enable the activity (loop entry).
                if (has_non_entry) {
                    auto certain = store_.latest_certain(c, a);
                    if (certain && *certain > anchor) continue;
                }

                const auto d = event.timestamp - anchor;
                const auto kind = fixed_kind_avg || d == avg ? AllocationKind::avg : AllocationKind::range;
                found.insert(Allocation{c, set, anchor, d, kind});
            }
        }
    }
    return {found.begin(), found.end()};
}

std::vector<Allocation> Correlator::completion_allocations(const UncorrelatedEvent& event) const {
    std::vector<Allocation> out;
    auto it = open_starts_.find(event.activity);
    if (it == open_starts_.end()) return out;
    const auto avg = heuristics_.avg_of(event.activity);
    for (const auto& [c, starts] : it->second) {
        if (starts.empty()) continue;
        const auto d = event.timestamp - starts.front();
        if (!heuristics_.within(event.activity, d)) continue;
        out.push_back(Allocation{c, {}, starts.front(), d, d == avg ? AllocationKind::avg : AllocationKind::range});
    }
    return out;
}

std::vector<Allocation> Correlator::candidate_allocations(const UncorrelatedEvent& event) const {
    if (!td_.contains(event.activity)) return {};
    const auto lc = event.effective_lifecycle();
    if (mode_ == StreamMode::started_completed) {
        if (lc == Lifecycle::completed) return completion_allocations(event);
        if (td_.is_start(event.activity)) return {};
        return dependency_allocations(event, Duration::zero(), heuristics_.max_of(event.activity), true);
    }
    if (td_.is_start(event.activity)) return {};
    return dependency_allocations(event, heuristics_.min_of(event.activity), heuristics_.max_of(event.activity),
                                  false);
}

CorrelatedInstance Correlator::open_case(const UncorrelatedEvent& event) {
    if (!td_.contains(event.activity) || !td_.is_start(event.activity))
        throw CorrelationError("NOT_A_START", "'" + event.activity + "' cannot start a case");
    if (last_timestamp_ && event.timestamp < *last_timestamp_)
        throw CorrelationError("OUT_OF_ORDER", "event at " + format_timestamp(event.timestamp) +
                                                   " arrived after " + format_timestamp(*last_timestamp_));

    auto inst = base_instance(event);
    inst.case_id = store_.open_case();
    inst.trust = 100.0;
    inst.raw_trust = 100.0;
    inst.allocation_count = 1;
    inst.dependency_sets.push_back({});
    if (mode_ == StreamMode::started_completed && event.effective_lifecycle() == Lifecycle::started)
        open_starts_[event.activity][*inst.case_id].push_back(event.timestamp);
    store_.append(inst);
    ++next_seq_;
    last_timestamp_ = event.timestamp;
    return inst;
}

IngestResult Correlator::store_noise(const UncorrelatedEvent& event, NoiseReason reason) {
    auto inst = base_instance(event);
    inst.noise = reason;
    store_.append(inst);
    ++next_seq_;
    last_timestamp_ = event.timestamp;
    return IngestResult{{std::move(inst)}, 0};
}

IngestResult Correlator::ingest(const UncorrelatedEvent& event) {
    if (last_timestamp_ && event.timestamp < *last_timestamp_)
        throw CorrelationError("OUT_OF_ORDER", "event at " + format_timestamp(event.timestamp) +
                                                   " arrived after " + format_timestamp(*last_timestamp_));
    const auto lc = event.effective_lifecycle();
    if (mode_ == StreamMode::completed_only && lc == Lifecycle::started)
        throw CorrelationError("MIXED_LIFECYCLE", "started event for '" + event.activity +
                                                      "' in a completed-only stream");

    if (!td_.contains(event.activity)) return store_noise(event, NoiseReason::unknown_activity);

    const bool opens = td_.is_start(event.activity) &&
                       (mode_ == StreamMode::completed_only || lc == Lifecycle::started);
    if (opens) return IngestResult{{open_case(event)}, 1};

    auto allocations = candidate_allocations(event);
    if (allocations.empty()) return store_noise(event, NoiseReason::no_allocation);

    const auto m = allocations.size();
    const auto range_size = heuristics_.range_size(event.activity);
    std::map<CaseId, CorrelatedInstance> per_case;
    for (const auto& alloc : allocations) {
        auto [it, fresh] = per_case.try_emplace(alloc.case_id);
        auto& inst = it->second;
        if (fresh) {
            inst = base_instance(event);
            inst.case_id = alloc.case_id;
        }
        inst.raw_trust += 100.0 * instance_probability(m, alloc.kind, range_size);
        ++inst.allocation_count;
        if (std::find(inst.dependency_sets.begin(), inst.dependency_sets.end(), alloc.dependency_set) ==
            inst.dependency_sets.end())
            inst.dependency_sets.push_back(alloc.dependency_set);
    }

    IngestResult result;
    result.allocation_count = m;
    for (auto& [c, inst] : per_case) {
        inst.trust = inst.raw_trust >= 100.0 - kCertainEpsilon ? 100.0 : inst.raw_trust;
        if (mode_ == StreamMode::started_completed) {
            auto& starts = open_starts_[event.activity][c];
            if (lc == Lifecycle::started)
                starts.push_back(event.timestamp);
            else if (!starts.empty())
                starts.pop_front();
        }
        store_.append(inst);
        result.instances.push_back(std::move(inst));
    }
    ++next_seq_;
    last_timestamp_ = event.timestamp;
    return result;
}

std::vector<CorrelatedInstance> Correlator::export_log(double threshold) const {
    std::vector<CorrelatedInstance> out;
    for (const auto& inst : store_.instances()) {
        if (inst.is_noise()) {
            if (threshold <= 0.0) out.push_back(inst);
        } else if (*inst.trust >= threshold) {
            out.push_back(inst);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const CorrelatedInstance& a, const CorrelatedInstance& b) {
        if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
        if (a.event_seq != b.event_seq) return a.event_seq < b.event_seq;
        return a.case_id.value_or(CaseId{0xffffffffu}) < b.case_id.value_or(CaseId{0xffffffffu});
    });
    return out;
}

}  // namespace evcorr
