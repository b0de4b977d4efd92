#include "insights/clock.hpp"

#include <thread>

namespace insights {

Clock::time_point SystemClock::now()
{
    return std::chrono::time_point_cast<duration>(std::chrono::steady_clock::now());
}

void SystemClock::sleep_for(duration d)
{
    if (d.count() > 0) std::this_thread::sleep_for(d);
}

Clock::time_point ManualClock::now()
{
    std::lock_guard lock(mu_);
    return now_;
}

void ManualClock::sleep_for(duration d)
{
    std::lock_guard lock(mu_);
    sleeps_.push_back(d);
    if (d.count() > 0) now_ += d;
}

void ManualClock::advance(duration d)
{
    std::lock_guard lock(mu_);
    now_ += d;
}

std::vector<Clock::duration> ManualClock::sleeps() const
{
    std::lock_guard lock(mu_);
    return sleeps_;
}

} // namespace insights
