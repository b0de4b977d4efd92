#pragma once

#include <chrono>
#include <mutex>
#include <vector>

namespace insights {

/// Time source used by retry backoff and rate limiting. Tests substitute a
/// simulated clock so no real sleeping happens.
class Clock {
public:
    using duration = std::chrono::milliseconds;
    using time_point = std::chrono::time_point<std::chrono::steady_clock, duration>;

    virtual ~Clock() = default;
    virtual time_point now() = 0;
    virtual void sleep_for(duration d) = 0;
};

class SystemClock final : public Clock {
public:
    time_point now() override;
    void sleep_for(duration d) override;
};

/// Simulated clock: sleeping advances time instantly. Records every sleep.
class ManualClock final : public Clock {
public:
    time_point now() override;
    void sleep_for(duration d) override;
    void advance(duration d);

    [[nodiscard]] std::vector<duration> sleeps() const;

private:
    mutable std::mutex mu_;
    time_point now_{};
    std::vector<duration> sleeps_;
};

} // namespace insights
