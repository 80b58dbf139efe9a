#include "evcorr/case_store.hpp"

#include <algorithm>
#include <stdexcept>

namespace evcorr {

namespace {
constexpr std::uint32_t kNoActivity = 0xffffffffu;
const std::vector<std::size_t> kEmpty;
}  // namespace

const std::vector<std::size_t>& CaseStore::case_instances(CaseId id) const {
    if (!has_case(id)) throw std::out_of_range("unknown case " + std::to_string(id.value));
    return by_case_[id.value - 1];
}

std::uint32_t CaseStore::activity_id(std::string_view activity) const {
    auto it = activity_ids_.find(std::string(activity));
    return it == activity_ids_.end() ? kNoActivity : it->second;
}

std::uint32_t CaseStore::intern(const std::string& activity) {
    auto [it, fresh] = activity_ids_.try_emplace(activity, static_cast<std::uint32_t>(by_activity_.size()));
    if (fresh) by_activity_.emplace_back();
    return it->second;
}

const std::vector<std::size_t>& CaseStore::activity_instances(std::string_view activity) const {
    auto id = activity_id(activity);
    return id == kNoActivity ? kEmpty : by_activity_[id];
}

std::vector<std::string> CaseStore::activities() const {
    std::vector<std::string> out;
    for (const auto& [name, id] : activity_ids_)
        if (!by_activity_[id].empty()) out.push_back(name);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Timestamp> CaseStore::first_completed(CaseId id, std::string_view activity) const {
    auto a = activity_id(activity);
    if (a == kNoActivity) return std::nullopt;
    auto it = case_activity_.find(key(id, a));
    return it == case_activity_.end() ? std::nullopt : it->second.first_completed;
}

std::optional<Timestamp> CaseStore::latest_certain(CaseId id, std::string_view activity) const {
    auto a = activity_id(activity);
    if (a == kNoActivity) return std::nullopt;
    auto it = case_activity_.find(key(id, a));
    return it == case_activity_.end() ? std::nullopt : it->second.latest_certain;
}

std::vector<CorrelatedInstance> CaseStore::case_view(CaseId id) const {
    std::vector<CorrelatedInstance> out;
    for (auto i : case_instances(id)) out.push_back(instances_[i]);
    std::stable_sort(out.begin(), out.end(),
                     [](const CorrelatedInstance& a, const CorrelatedInstance& b) { return a.timestamp < b.timestamp; });
    return out;
}

CaseId CaseStore::open_case() {
    by_case_.emplace_back();
    return CaseId{static_cast<std::uint32_t>(by_case_.size())};
}

std::size_t CaseStore::append(CorrelatedInstance instance) {
    const auto index = instances_.size();
    if (instance.is_noise()) {
        noise_.push_back(index);
        instances_.push_back(std::move(instance));
        return index;
    }
    const auto id = *instance.case_id;
    if (!has_case(id)) throw std::out_of_range("instance for unopened case " + std::to_string(id.value));

    auto a = intern(instance.activity);
    by_activity_[a].push_back(index);
    by_case_[id.value - 1].push_back(index);

    auto& state = case_activity_[key(id, a)];
    if (instance.lifecycle.value_or(Lifecycle::completed) == Lifecycle::completed && !state.first_completed)
        state.first_completed = instance.timestamp;
    if (instance.trust && *instance.trust >= 100.0)
        state.latest_certain = std::max(state.latest_certain.value_or(instance.timestamp), instance.timestamp);

    instances_.push_back(std::move(instance));
    return index;
}

}  // namespace evcorr
