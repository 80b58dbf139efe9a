#include "evcorr/replay.hpp"

#include <cmath>
#include <thread>

namespace evcorr {

void SystemClock::sleep_until(time_point t) { std::this_thread::sleep_until(t); }

ReplayError::ReplayError(std::size_t position, const std::string& message)
    : std::runtime_error("replay aborted at event " + std::to_string(position) + ": " + message),
      position_(position) {}

ReplayReport replay(const std::vector<UncorrelatedEvent>& events, double speedup, const EventSink& sink, Clock& clock) {
    if (!(speedup > 0.0)) throw std::invalid_argument("replay speedup must be positive");
    const bool paced = !std::isinf(speedup);

    ReplayReport report;
    report.latencies.reserve(events.size());
    const auto start = clock.now();
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (paced) {
            std::chrono::duration<double> offset = events[i].timestamp - events.front().timestamp;
            clock.sleep_until(start + std::chrono::duration_cast<std::chrono::nanoseconds>(offset / speedup));
        }
        const auto t0 = std::chrono::steady_clock::now();
        try {
            sink(events[i]);
        } catch (const std::exception& e) {
            throw ReplayError(i, e.what());
        } catch (...) {
            throw ReplayError(i, "unknown error");
        }
        report.latencies.push_back(std::chrono::steady_clock::now() - t0);
        ++report.delivered;
    }
    report.paced = clock.now() - start;
    return report;
}

ReplayReport replay(const std::vector<UncorrelatedEvent>& events, double speedup, const EventSink& sink) {
    SystemClock clock;
    return replay(events, speedup, sink, clock);
}

}  // namespace evcorr
