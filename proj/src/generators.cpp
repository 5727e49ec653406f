#include "specwarp/generators.hpp"

#include <cmath>
#include <string>

#include "specwarp/errors.hpp"
#include "math_util.hpp"

namespace specwarp {

namespace {

std::size_t sample_count(double duration_s, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) throw InvalidInputError("sample rate must be positive");
    const auto m = static_cast<long long>(std::llround(duration_s * sample_rate_hz));
    if (m < 2) {
        throw InvalidInputError("duration " + std::to_string(duration_s) +
                                " s yields fewer than 2 samples");
    }
    return static_cast<std::size_t>(m);
}

void check_band(double f_hz, double sample_rate_hz) {
    if (!(f_hz > 0.0) || !(f_hz < sample_rate_hz / 2.0)) {
        throw InvalidInputError("frequency " + std::to_string(f_hz) +
                                " Hz must lie strictly between 0 and Nyquist (" +
                                std::to_string(sample_rate_hz / 2.0) + " Hz)");
    }
}

}  // namespace

Signal generate_tone(double f0_hz, double duration_s, double sample_rate_hz,
                     double amplitude) {
    const std::size_t m = sample_count(duration_s, sample_rate_hz);
    check_band(f0_hz, sample_rate_hz);
    if (!std::isfinite(amplitude)) throw InvalidInputError("amplitude must be finite");

    Signal x;
    x.sample_rate_hz = sample_rate_hz;
    x.samples.resize(m);
    for (std::size_t n = 0; n < m; ++n) {
        x.samples[n] =
            amplitude * std::sin(kTwoPi * f0_hz * static_cast<double>(n) / sample_rate_hz);
    }
    return x;
}

Signal generate_log_sweep(double f_start_hz, double f_end_hz, double duration_s,
                          double sample_rate_hz) {
    const std::size_t m = sample_count(duration_s, sample_rate_hz);
    check_band(f_start_hz, sample_rate_hz);
    check_band(f_end_hz, sample_rate_hz);

    const double log_ratio = std::log(f_end_hz / f_start_hz);

    Signal x;
    x.sample_rate_hz = sample_rate_hz;
    x.samples.resize(m);
    if (std::abs(log_ratio) < 1e-12) {
        // Degenerate sweep: constant frequency.
        for (std::size_t n = 0; n < m; ++n) {
            x.samples[n] =
                std::sin(kTwoPi * f_start_hz * static_cast<double>(n) / sample_rate_hz);
        }
        return x;
    }

    // phase(t) = 2*pi*f_start*T*(r^(t/T) - 1)/ln r, the exact integral of
    // f(t) = f_start * r^(t/T) with r = f_end/f_start.
    const double k = kTwoPi * f_start_hz * duration_s / log_ratio;
    for (std::size_t n = 0; n < m; ++n) {
        const double t = static_cast<double>(n) / sample_rate_hz;
        const double phase = k * (std::exp(log_ratio * t / duration_s) - 1.0);
        x.samples[n] = std::sin(phase);
    }
    return x;
}

Signal generate_multitone(std::span<const ToneComponent> components, double duration_s,
                          double sample_rate_hz) {
    const std::size_t m = sample_count(duration_s, sample_rate_hz);
    for (const auto& c : components) {
        check_band(c.frequency_hz, sample_rate_hz);
        if (!std::isfinite(c.amplitude)) throw InvalidInputError("amplitude must be finite");
    }

    Signal x;
    x.sample_rate_hz = sample_rate_hz;
    x.samples.assign(m, 0.0);
    for (const auto& c : components) {
        for (std::size_t n = 0; n < m; ++n) {
            x.samples[n] += c.amplitude * std::sin(kTwoPi * c.frequency_hz *
                                                   static_cast<double>(n) / sample_rate_hz);
        }
    }
    return x;
}

}  // namespace specwarp
