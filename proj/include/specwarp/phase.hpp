#pragma once

#include <cstddef>
#include <vector>

#include "specwarp/signal.hpp"
#include "specwarp/warp_expr.hpp"

namespace specwarp {

/// Phase with 2*pi multiples restored so no successive jump exceeds pi.
struct UnwrappedPhase {
    std::vector<double> values;
};

/// Instantaneous frequency in Hz, one value per sample. The differentiation
/// yields M-1 forward differences; the final one is repeated so the track
/// keeps length M. initial_phase_rad carries the integration constant that
/// the differentiation drops, so warping preserves absolute phase.
struct FrequencyTrack {
    std::vector<double> values_hz;
    double sample_rate_hz = 0.0;
    double initial_phase_rad = 0.0;
};

/// What to do when a warped frequency exceeds Fs/2 in magnitude.
enum class NyquistPolicy {
    ClampWarn,  // clamp to +-Fs/2 and count the clamped samples
    Strict,     // throw NyquistError
};

struct WarpOutcome {
    FrequencyTrack track;
    std::size_t nyquist_clamped = 0;
};

UnwrappedPhase unwrap_phase(const WrappedPhase& p);

FrequencyTrack phase_to_frequency(const UnwrappedPhase& theta, double sample_rate_hz);

/// Applies w elementwise. EvalErrors are rethrown with the sample index.
WarpOutcome apply_warp(const FrequencyTrack& track, const WarpFunction& w,
                       NyquistPolicy policy = NyquistPolicy::ClampWarn);

/// Integrates the track back to unwrapped phase. The cumulative sum is
/// exclusive of the current sample (theta[n] covers values[0..n-1]) so that
/// frequency_to_phase(phase_to_frequency(theta)) == theta up to rounding.
UnwrappedPhase frequency_to_phase(const FrequencyTrack& track);

/// theta[n] - 2*pi*floor((theta[n] + pi) / (2*pi)), in [-pi, pi).
WrappedPhase wrap_phase(const UnwrappedPhase& theta);

}  // namespace specwarp
