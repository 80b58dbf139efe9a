#include "evcorr/events.hpp"

#include <algorithm>
#include <cctype>

namespace evcorr {

std::optional<Lifecycle> parse_lifecycle(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "started" || lower == "start") return Lifecycle::started;
    if (lower == "completed" || lower == "complete") return Lifecycle::completed;
    return std::nullopt;
}

std::string_view to_string(Lifecycle lc) { return lc == Lifecycle::started ? "started" : "completed"; }

std::string_view to_string(NoiseReason reason) {
    switch (reason) {
        case NoiseReason::none: return "none";
        case NoiseReason::unknown_activity: return "UNKNOWN_ACTIVITY";
        case NoiseReason::no_allocation: return "NO_ALLOCATION";
    }
    return "?";
}

}  // namespace evcorr
