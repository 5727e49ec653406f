#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "specwarp/signal.hpp"

namespace specwarp {

/// One-sided power spectral density on an ascending frequency grid.
struct PowerSpectrum {
    std::vector<double> frequencies_hz;
    std::vector<double> power;
};

/// Short-time power grid: power[t][k] at times_s[t] x frequencies_hz[k].
struct Spectrogram {
    std::vector<double> times_s;
    std::vector<double> frequencies_hz;
    std::vector<std::vector<double>> power;
};

inline constexpr std::size_t kDefaultSegmentLen = 4096;
inline constexpr double kDefaultOverlap = 0.5;

/// Welch averaged periodogram: Hann-windowed segments of segment_len
/// samples (a power of two, <= signal length) advancing by
/// segment_len * (1 - overlap_fraction). A final segment aligned to the end
/// of the signal is added when the hop grid would leave a tail uncovered.
PowerSpectrum power_spectrum(const Signal& x, std::size_t segment_len = kDefaultSegmentLen,
                             double overlap_fraction = kDefaultOverlap);

/// Frequency of the global power maximum; ties break toward the lowest
/// frequency.
double peak_frequency(const PowerSpectrum& ps);

struct SupportBand {
    double low_hz = 0.0;
    double high_hz = 0.0;
};

/// Lowest and highest frequencies whose power exceeds
/// threshold_fraction * max(power). Throws if no bin qualifies.
SupportBand sweep_endpoints(const PowerSpectrum& ps, double threshold_fraction);

/// Zero-lag Pearson correlation coefficient. Throws
/// UndefinedCorrelationError when either sequence has zero variance.
double pearson_r(std::span<const double> a, std::span<const double> b);

/// Hann-windowed short-time squared-magnitude DFT grid, one-sided. Times
/// are window centers; windows that would run past the end are dropped.
Spectrogram spectrogram(const Signal& x, std::size_t window_len, std::size_t hop_len);

}  // namespace specwarp
