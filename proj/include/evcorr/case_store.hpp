#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "evcorr/events.hpp"

namespace evcorr {

/// Correlated instances in arrival order, indexed by case and by activity.
/// Single writer; const access is safe to share between ingests.
class CaseStore {
public:
    const std::vector<CorrelatedInstance>& instances() const noexcept { return instances_; }
    const CorrelatedInstance& instance(std::size_t index) const { return instances_.at(index); }

    std::size_t case_count() const noexcept { return by_case_.size(); }
    bool has_case(CaseId id) const noexcept { return id.value >= 1 && id.value <= by_case_.size(); }
    /// Instance indices of a case in arrival order. Throws std::out_of_range.
    const std::vector<std::size_t>& case_instances(CaseId id) const;
    /// Non-noise instance indices of an activity across all cases, arrival order.
    const std::vector<std::size_t>& activity_instances(std::string_view activity) const;
    const std::vector<std::size_t>& noise_instances() const noexcept { return noise_; }
    std::vector<std::string> activities() const;

    /// Earliest completed instance of `activity` in the case.
    std::optional<Timestamp> first_completed(CaseId id, std::string_view activity) const;
    /// Latest instance of `activity` in the case whose trust reached 100.
    std::optional<Timestamp> latest_certain(CaseId id, std::string_view activity) const;

    /// Case instances ordered by timestamp, ties in arrival order.
    std::vector<CorrelatedInstance> case_view(CaseId id) const;

    CaseId open_case();
    /// Appends and indexes an instance whose case (if any) is already open.
    std::size_t append(CorrelatedInstance instance);

private:
    struct CaseActivity {
        std::optional<Timestamp> first_completed;
        std::optional<Timestamp> latest_certain;
    };

    std::uint32_t activity_id(std::string_view activity) const;
    std::uint32_t intern(const std::string& activity);
    static std::uint64_t key(CaseId id, std::uint32_t activity) {
        return (static_cast<std::uint64_t>(id.value) << 32) | activity;
    }

    std::vector<CorrelatedInstance> instances_;
    std::vector<std::vector<std::size_t>> by_case_;
    std::unordered_map<std::string, std::uint32_t> activity_ids_;
    std::vector<std::vector<std::size_t>> by_activity_;
    std::vector<std::size_t> noise_;
    std::unordered_map<std::uint64_t, CaseActivity> case_activity_;
};

}  // namespace evcorr
