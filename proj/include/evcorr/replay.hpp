#pragma once

#include <chrono>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "evcorr/events.hpp"

namespace evcorr {

/// Source of pacing time for replay. Tests use VirtualClock so that no
/// replay ever sleeps for real.
class Clock {
public:
    using time_point = std::chrono::steady_clock::time_point;
    virtual ~Clock() = default;
    virtual time_point now() = 0;
    virtual void sleep_until(time_point t) = 0;
};

class SystemClock final : public Clock {
public:
    time_point now() override { return std::chrono::steady_clock::now(); }
    void sleep_until(time_point t) override;
};

/// Time only moves when someone sleeps.
class VirtualClock final : public Clock {
public:
    time_point now() override { return now_; }
    void sleep_until(time_point t) override {
        if (t > now_) now_ = t;
    }
    std::chrono::nanoseconds elapsed() const { return now_ - time_point{}; }

private:
    time_point now_{};
};

constexpr double kInfiniteSpeedup = std::numeric_limits<double>::infinity();

struct ReplayReport {
    std::size_t delivered = 0;
    /// Time the sink spent on each event, measured on the steady clock.
    std::vector<std::chrono::nanoseconds> latencies;
    /// Pacing time from the first delivery to the last, on the replay clock.
    std::chrono::nanoseconds paced{0};
};

/// Raised when the sink throws; carries the 0-based index of the failing event.
class ReplayError : public std::runtime_error {
public:
    ReplayError(std::size_t position, const std::string& message);
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

using EventSink = std::function<void(const UncorrelatedEvent&)>;

/// Delivers events to the sink in order. Event i is released at
/// (t_i - t_0) / speedup after the first; an infinite speedup releases
/// everything immediately. Throws std::invalid_argument unless speedup > 0.
ReplayReport replay(const std::vector<UncorrelatedEvent>& events, double speedup, const EventSink& sink, Clock& clock);
ReplayReport replay(const std::vector<UncorrelatedEvent>& events, double speedup, const EventSink& sink);

}  // namespace evcorr
