#include "specwarp/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specwarp/errors.hpp"

namespace specwarp {

Signal reconstruct(double mean, const Envelope& env, const WrappedPhase& phase,
                   double sample_rate_hz) {
    if (env.values.size() != phase.values.size()) {
        throw InvalidInputError("envelope and phase lengths differ (" +
                                std::to_string(env.values.size()) + " vs " +
                                std::to_string(phase.values.size()) + ")");
    }
    Signal out;
    out.sample_rate_hz = sample_rate_hz;
    out.samples.resize(env.values.size());
    for (std::size_t n = 0; n < env.values.size(); ++n) {
        out.samples[n] = mean + env.values[n] * std::cos(phase.values[n]);
    }
    return out;
}

Signal remap(const Signal& x, const WarpFunction& w, const RemapOptions& opts,
             RemapTrace* trace) {
    validate(x);

    AnalyticSignal analytic = make_analytic(x);
    Envelope env = envelope(analytic);
    WrappedPhase phase = instantaneous_phase(analytic);
    UnwrappedPhase theta = unwrap_phase(phase);
    FrequencyTrack freq = phase_to_frequency(theta, x.sample_rate_hz);

    WarpOutcome warped;
    try {
        warped = apply_warp(freq, w, opts.nyquist);
    } catch (const EvalError& e) {
        throw EvalError(std::string("remap stage apply_warp: ") + e.what(), e.f_hz());
    } catch (const NyquistError& e) {
        throw NyquistError(std::string("remap stage apply_warp: ") + e.what());
    }

    UnwrappedPhase warped_theta = frequency_to_phase(warped.track);
    WrappedPhase warped_phase = wrap_phase(warped_theta);
    Signal out = reconstruct(analytic.mean, env, warped_phase, x.sample_rate_hz);

    if (trace) {
        trace->mean = analytic.mean;
        trace->nyquist_clamped = warped.nyquist_clamped;
        trace->env = std::move(env);
        trace->phase = std::move(phase);
        trace->unwrapped = std::move(theta);
        trace->frequency = std::move(freq);
        trace->warped_frequency = std::move(warped.track);
        trace->warped_phase = std::move(warped_phase);
    }
    return out;
}

Signal remap_chunked(const Signal& x, const WarpFunction& w, std::size_t chunk_len,
                     const RemapOptions& opts, std::size_t* nyquist_clamped) {
    validate(x);
    if (chunk_len < 16) {
        throw InvalidInputError("chunk_len must be at least 16 samples");
    }

    Signal out;
    out.sample_rate_hz = x.sample_rate_hz;
    out.samples.reserve(x.samples.size());

    std::size_t total_clamped = 0;
    std::size_t begin = 0;
    const std::size_t m = x.samples.size();
    while (begin < m) {
        std::size_t end = std::min(begin + chunk_len, m);
        if (m - end == 1) end = m;  // a one-sample tail cannot be analyzed; fold it in
        Signal chunk;
        chunk.sample_rate_hz = x.sample_rate_hz;
        chunk.samples.assign(x.samples.begin() + static_cast<std::ptrdiff_t>(begin),
                             x.samples.begin() + static_cast<std::ptrdiff_t>(end));
        RemapTrace trace;
        Signal piece = remap(chunk, w, opts, &trace);
        total_clamped += trace.nyquist_clamped;
        out.samples.insert(out.samples.end(), piece.samples.begin(), piece.samples.end());
        begin = end;
    }

    if (nyquist_clamped) *nyquist_clamped = total_clamped;
    return out;
}

}  // namespace specwarp
