#include "specwarp/phase.hpp"

#include <cmath>
#include <string>

#include "specwarp/errors.hpp"
#include "math_util.hpp"

namespace specwarp {

UnwrappedPhase unwrap_phase(const WrappedPhase& p) {
    UnwrappedPhase out;
    out.values.resize(p.values.size());
    if (p.values.empty()) return out;

    out.values[0] = p.values[0];
    // Correction count is kept as an integer so each output is the wrapped
    // value plus a single rounded multiple of 2*pi, not an accumulated sum.
    long long k = 0;
    for (std::size_t n = 1; n < p.values.size(); ++n) {
        const double d = p.values[n] - p.values[n - 1];
        if (d > kPi) {
            --k;
        } else if (d < -kPi) {
            ++k;
        }
        out.values[n] = p.values[n] + kTwoPi * static_cast<double>(k);
    }
    return out;
}

FrequencyTrack phase_to_frequency(const UnwrappedPhase& theta, double sample_rate_hz) {
    if (theta.values.size() < 2) {
        throw InvalidInputError("phase_to_frequency requires at least 2 phase samples");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw InvalidInputError("sample rate must be positive");
    }

    const std::size_t m = theta.values.size();
    FrequencyTrack track;
    track.sample_rate_hz = sample_rate_hz;
    track.initial_phase_rad = theta.values[0];
    track.values_hz.resize(m);
    const double scale = sample_rate_hz / kTwoPi;
    for (std::size_t n = 0; n + 1 < m; ++n) {
        track.values_hz[n] = scale * (theta.values[n + 1] - theta.values[n]);
    }
    track.values_hz[m - 1] = track.values_hz[m - 2];  // repeat the final difference
    return track;
}

WarpOutcome apply_warp(const FrequencyTrack& track, const WarpFunction& w,
                       NyquistPolicy policy) {
    if (!(track.sample_rate_hz > 0.0)) {
        throw InvalidInputError("frequency track has no sample rate");
    }

    WarpOutcome out;
    out.track.sample_rate_hz = track.sample_rate_hz;
    out.track.initial_phase_rad = track.initial_phase_rad;
    out.track.values_hz.resize(track.values_hz.size());

    const double nyquist = track.sample_rate_hz / 2.0;
    for (std::size_t n = 0; n < track.values_hz.size(); ++n) {
        double v;
        try {
            v = evaluate(w, track.values_hz[n]);
        } catch (const EvalError& e) {
            throw EvalError(std::string(e.what()) + " at sample " + std::to_string(n),
                            e.f_hz());
        }
        if (std::abs(v) > nyquist) {
            if (policy == NyquistPolicy::Strict) {
                throw NyquistError("warped frequency " + std::to_string(v) +
                                   " Hz at sample " + std::to_string(n) +
                                   " exceeds Nyquist (" + std::to_string(nyquist) + " Hz)");
            }
            v = std::clamp(v, -nyquist, nyquist);
            ++out.nyquist_clamped;
        }
        out.track.values_hz[n] = v;
    }
    return out;
}

UnwrappedPhase frequency_to_phase(const FrequencyTrack& track) {
    if (!(track.sample_rate_hz > 0.0)) {
        throw InvalidInputError("frequency track has no sample rate");
    }

    UnwrappedPhase theta;
    theta.values.resize(track.values_hz.size());
    const double scale = kTwoPi / track.sample_rate_hz;
    KahanAccumulator acc;
    for (std::size_t n = 0; n < track.values_hz.size(); ++n) {
        theta.values[n] = track.initial_phase_rad + scale * acc.sum();
        acc.add(track.values_hz[n]);
    }
    return theta;
}

WrappedPhase wrap_phase(const UnwrappedPhase& theta) {
    WrappedPhase out;
    out.values.resize(theta.values.size());
    for (std::size_t n = 0; n < theta.values.size(); ++n) {
        const double v = theta.values[n];
        out.values[n] = v - kTwoPi * std::floor((v + kPi) / kTwoPi);
    }
    return out;
}

}  // namespace specwarp
