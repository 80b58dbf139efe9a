#include "evcorr/heuristics.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace evcorr {

HeuristicsError::HeuristicsError(std::string code, const std::string& message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      code_(std::move(code)),
      line_(line) {}

HeuristicTable::HeuristicTable(Duration unit) : unit_(unit) {
    if (unit_ <= Duration::zero()) throw HeuristicsError("BAD_UNIT", "heuristic unit must be positive");
}

void HeuristicTable::set(const std::string& activity, std::int64_t min, std::int64_t max) {
    if (min <= 0) throw HeuristicsError("NON_POSITIVE", "minimum duration of '" + activity + "' must be positive");
    if (min > max)
        throw HeuristicsError("MIN_GT_MAX", "min " + std::to_string(min) + " > max " + std::to_string(max) +
                                                " for '" + activity + "'");
    entries_[activity] = {min, max};
}

bool HeuristicTable::contains(std::string_view activity) const { return entries_.find(activity) != entries_.end(); }

const HeuristicBounds& HeuristicTable::bounds(std::string_view activity) const {
    auto it = entries_.find(activity);
    if (it == entries_.end())
        throw HeuristicsError("UNKNOWN_ACTIVITY", "no heuristics for '" + std::string(activity) + "'");
    return it->second;
}

Duration HeuristicTable::min_of(std::string_view activity) const { return bounds(activity).min * unit_; }

Duration HeuristicTable::max_of(std::string_view activity) const { return bounds(activity).max * unit_; }

Duration HeuristicTable::avg_of(std::string_view activity) const {
    const auto& b = bounds(activity);
    return ((b.min + b.max + 1) / 2) * unit_;
}

std::vector<Duration> HeuristicTable::range_of(std::string_view activity) const {
    const auto& b = bounds(activity);
    auto avg = (b.min + b.max + 1) / 2;
    std::vector<Duration> out;
    for (auto v = b.min; v <= b.max; ++v)
        if (v != avg) out.push_back(v * unit_);
    return out;
}

std::size_t HeuristicTable::range_size(std::string_view activity) const {
    const auto& b = bounds(activity);
    return static_cast<std::size_t>(b.max - b.min);
}

bool HeuristicTable::within(std::string_view activity, Duration d) const {
    return min_of(activity) <= d && d <= max_of(activity);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::int64_t parse_int(std::string_view s, std::size_t line) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw HeuristicsError("MALFORMED_ROW", "expected an integer, got '" + std::string(s) + "'", line);
    return v;
}

}  // namespace

HeuristicTable load_heuristics(std::string_view text, Duration unit) {
    HeuristicTable table(unit);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        auto line = trim(text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        auto cells = split(line, ',');
        if (cells.size() != 3) throw HeuristicsError("MALFORMED_ROW", "expected activity,min,max", line_no);
        if (line_no == 1 && cells[0] == "activity" && cells[1] == "min" && cells[2] == "max") continue;
        if (cells[0].empty()) throw HeuristicsError("MALFORMED_ROW", "empty activity name", line_no);
        std::string activity(cells[0]);
        if (table.contains(activity)) throw HeuristicsError("DUPLICATE", "duplicate activity '" + activity + "'", line_no);
        try {
            table.set(activity, parse_int(cells[1], line_no), parse_int(cells[2], line_no));
        } catch (const HeuristicsError& e) {
            if (e.line()) throw;
            throw HeuristicsError(e.code(), e.what(), line_no);
        }
    }
    return table;
}

std::string save_heuristics(const HeuristicTable& table) {
    std::ostringstream out;
    out << "activity,min,max\n";
    for (const auto& [activity, b] : table.entries()) out << activity << ',' << b.min << ',' << b.max << '\n';
    return out.str();
}

HeuristicExtraction extract_heuristics(const std::vector<LabeledEvent>& log, const TaskDependencies& td,
                                       Duration unit) {
    HeuristicExtraction result{HeuristicTable(unit), {}};
    std::map<std::string, std::pair<Duration, Duration>> observed;
    auto record = [&](const std::string& activity, Duration d, const std::string& case_id) {
        if (d <= Duration::zero()) {
            result.warnings.push_back("rejected non-positive duration " + std::to_string(d.count()) + "s for '" +
                                      activity + "' in case " + case_id);
            return;
        }
        auto [it, fresh] = observed.try_emplace(activity, d, d);
        if (!fresh) {
            it->second.first = std::min(it->second.first, d);
            it->second.second = std::max(it->second.second, d);
        }
    };

    bool paired = std::any_of(log.begin(), log.end(),
                              [](const LabeledEvent& e) { return e.event.effective_lifecycle() == Lifecycle::started; });

    // Case order is first appearance; events keep their log order within a case.
    std::vector<std::string> case_order;
    std::unordered_map<std::string, std::vector<const UncorrelatedEvent*>> by_case;
    for (const auto& e : log) {
        auto [it, fresh] = by_case.try_emplace(e.case_id);
        if (fresh) case_order.push_back(e.case_id);
        it->second.push_back(&e.event);
    }

    for (const auto& case_id : case_order) {
        const auto& events = by_case[case_id];
        if (paired) {
            std::map<std::string, std::deque<Timestamp>> open;
            for (const auto* e : events) {
                if (e->effective_lifecycle() == Lifecycle::started) {
                    open[e->activity].push_back(e->timestamp);
                    continue;
                }
                auto& starts = open[e->activity];
                if (starts.empty()) {
                    result.warnings.push_back("completed '" + e->activity + "' without a start in case " + case_id);
                    continue;
                }
                record(e->activity, e->timestamp - starts.front(), case_id);
                starts.pop_front();
            }
            continue;
        }

        std::map<std::string, Timestamp> latest;
        for (const auto* e : events) {
            if (!td.contains(e->activity)) {
                result.warnings.push_back("activity '" + e->activity + "' is not in the model");
                continue;
            }
            const auto& alts = td.of(e->activity);
            if (!alts.empty()) {
                std::optional<Timestamp> anchor;
                for (const auto& set : alts) {
                    std::optional<Timestamp> set_anchor;
                    bool satisfied = true;
                    for (const auto& x : set) {
                        auto it = latest.find(x);
                        if (it == latest.end()) {
                            satisfied = false;
                            break;
                        }
                        set_anchor = set_anchor ? std::max(*set_anchor, it->second) : it->second;
                    }
                    if (satisfied && set_anchor) anchor = anchor ? std::max(*anchor, *set_anchor) : *set_anchor;
                }
                if (anchor)
                    record(e->activity, e->timestamp - *anchor, case_id);
                else
                    result.warnings.push_back("no satisfied dependency for '" + e->activity + "' in case " + case_id);
            }
            latest[e->activity] = e->timestamp;
        }
    }

    for (const auto& [activity, range] : observed) {
        // Round outward so every observation stays inside the table bounds.
        auto lo = range.first / unit;
        auto hi = (range.second + unit - Duration{1}) / unit;
        result.table.set(activity, std::max<std::int64_t>(lo, 1), hi);
    }
    return result;
}

}  // namespace evcorr
