#pragma once

#include <span>

#include "specwarp/signal.hpp"

namespace specwarp {

/// amplitude * sin(2*pi*f0*n/Fs), length round(duration * Fs).
Signal generate_tone(double f0_hz, double duration_s, double sample_rate_hz,
                     double amplitude = 1.0);

/// Phase-continuous sweep whose instantaneous frequency follows
/// f_start * (f_end/f_start)^(t/duration); the phase is the exact integral
/// of that curve, so the frequency trajectory carries no accumulation error.
Signal generate_log_sweep(double f_start_hz, double f_end_hz, double duration_s,
                          double sample_rate_hz);

struct ToneComponent {
    double frequency_hz = 0.0;
    double amplitude = 0.0;
};

/// Sum of sinusoids. An empty component list yields an all-zero signal.
Signal generate_multitone(std::span<const ToneComponent> components, double duration_s,
                          double sample_rate_hz);

}  // namespace specwarp
