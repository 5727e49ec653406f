#pragma once

#include <cstddef>
#include <vector>

namespace specwarp {

/// Real-valued sample sequence with its sample rate. Valid signals have at
/// least two finite samples and a positive rate; operations check this on
/// entry via validate().
struct Signal {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;

    std::size_t size() const noexcept { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

/// Analytic signal stored as separate real/imaginary tracks plus the mean
/// that was removed from the input. real_part is exactly the mean-removed
/// input; imag_part is its discrete Hilbert transform.
struct AnalyticSignal {
    std::vector<double> real_part;
    std::vector<double> imag_part;
    double mean = 0.0;
    double sample_rate_hz = 0.0;

    std::size_t size() const noexcept { return real_part.size(); }
};

/// Instantaneous magnitude of an analytic signal; values are non-negative.
struct Envelope {
    std::vector<double> values;
};

/// Phase samples in radians, wrapped to [-pi, pi].
struct WrappedPhase {
    std::vector<double> values;
};

/// Throws InvalidInputError unless x has >= 2 samples, every sample is
/// finite, and the sample rate is positive.
void validate(const Signal& x);

double compute_mean(const Signal& x);

/// Removes the mean and attaches the FFT-based discrete Hilbert transform:
/// forward DFT, multiply bin k by -j*sgn(k) (sgn is zero at DC and, for even
/// length, the Nyquist bin), inverse DFT, real part. The spectrum of
/// real_part + j*imag_part is one-sided.
AnalyticSignal make_analytic(const Signal& x);

Envelope envelope(const AnalyticSignal& a);

/// Quadrant-aware angle of each analytic sample. The (0,0) sample maps to
/// phase 0; the envelope is zero there so reconstruction is unaffected.
WrappedPhase instantaneous_phase(const AnalyticSignal& a);

}  // namespace specwarp
