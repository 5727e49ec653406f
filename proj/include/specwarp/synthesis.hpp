#pragma once

#include <cstddef>

#include "specwarp/phase.hpp"
#include "specwarp/signal.hpp"
#include "specwarp/warp_expr.hpp"

namespace specwarp {

/// samples[n] = mean + env[n] * cos(phase[n]).
Signal reconstruct(double mean, const Envelope& env, const WrappedPhase& phase,
                   double sample_rate_hz);

struct RemapOptions {
    NyquistPolicy nyquist = NyquistPolicy::ClampWarn;
};

/// Intermediate products of one remap run, exposed for diagnostics.
struct RemapTrace {
    double mean = 0.0;
    Envelope env;
    WrappedPhase phase;
    UnwrappedPhase unwrapped;
    FrequencyTrack frequency;
    FrequencyTrack warped_frequency;
    WrappedPhase warped_phase;
    std::size_t nyquist_clamped = 0;
};

/// The full analysis/synthesis pipeline: analytic signal -> envelope +
/// phase -> unwrap -> differentiate -> warp -> integrate -> wrap ->
/// reconstruct. Pure composition of the stage operations; no windowing or
/// smoothing. Output length and sample rate match the input; the mean is
/// added back unchanged.
Signal remap(const Signal& x, const WarpFunction& w, const RemapOptions& opts = {},
             RemapTrace* trace = nullptr);

/// Splits x into consecutive non-overlapping chunks of chunk_len samples,
/// remaps each independently, and concatenates in time order. A trailing
/// chunk of exactly one sample is folded into its predecessor (a one-sample
/// signal cannot be analyzed). No crossfading is applied.
Signal remap_chunked(const Signal& x, const WarpFunction& w, std::size_t chunk_len,
                     const RemapOptions& opts = {}, std::size_t* nyquist_clamped = nullptr);

}  // namespace specwarp
