#pragma once

#include <numbers>

namespace specwarp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Kahan compensated summation. Keeps long cumulative sums accurate to a
/// few ulps of the running total independent of length.
class KahanAccumulator {
public:
    void add(double value) noexcept {
        const double y = value - compensation_;
        const double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }

    double sum() const noexcept { return sum_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace specwarp
