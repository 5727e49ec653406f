#include "specwarp/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specwarp/errors.hpp"
#include "specwarp/fft.hpp"
#include "math_util.hpp"

namespace specwarp {

namespace {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<double> hann_window(std::size_t length) {
    std::vector<double> w(length);
    for (std::size_t n = 0; n < length; ++n) {
        w[n] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(n) /
                                     static_cast<double>(length)));
    }
    return w;
}

// Segment start offsets for Welch-style averaging. A final segment aligned
// to the end of the signal is appended when the hop grid leaves a tail
// uncovered, so sweep endpoints are not silently dropped.
std::vector<std::size_t> segment_starts(std::size_t total, std::size_t len, std::size_t hop) {
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + len <= total; s += hop) starts.push_back(s);
    if (starts.empty() || starts.back() + len < total) starts.push_back(total - len);
    return starts;
}

}  // namespace

PowerSpectrum power_spectrum(const Signal& x, std::size_t segment_len,
                             double overlap_fraction) {
    validate(x);
    if (segment_len > x.samples.size()) {
        throw InvalidInputError("segment_len " + std::to_string(segment_len) +
                                " exceeds signal length " + std::to_string(x.samples.size()));
    }
    if (segment_len < 2 || !is_power_of_two(segment_len)) {
        throw InvalidInputError("segment_len must be a power of two, at least 2");
    }
    if (!(overlap_fraction >= 0.0 && overlap_fraction < 1.0)) {
        throw InvalidInputError("overlap_fraction must be in [0, 1)");
    }

    const std::size_t len = segment_len;
    const std::size_t hop =
        len - static_cast<std::size_t>(std::floor(overlap_fraction * static_cast<double>(len)));
    const auto starts = segment_starts(x.samples.size(), len, hop);
    const auto window = hann_window(len);

    double window_power = 0.0;
    for (double w : window) window_power += w * w;
    const double scale = 1.0 / (x.sample_rate_hz * window_power);

    const std::size_t nbins = len / 2 + 1;
    std::vector<double> power(nbins, 0.0);
    std::vector<double> segment(len);
    for (std::size_t s : starts) {
        for (std::size_t n = 0; n < len; ++n) segment[n] = x.samples[s + n] * window[n];
        const auto bins = fft::forward_real(segment);
        for (std::size_t k = 0; k < nbins; ++k) power[k] += std::norm(bins[k]);
    }

    const double per_segment = scale / static_cast<double>(starts.size());
    for (std::size_t k = 0; k < nbins; ++k) {
        power[k] *= per_segment;
        if (k != 0 && k != nbins - 1) power[k] *= 2.0;  // one-sided
    }

    PowerSpectrum ps;
    ps.power = std::move(power);
    ps.frequencies_hz.resize(nbins);
    for (std::size_t k = 0; k < nbins; ++k) {
        ps.frequencies_hz[k] =
            static_cast<double>(k) * x.sample_rate_hz / static_cast<double>(len);
    }
    return ps;
}

double peak_frequency(const PowerSpectrum& ps) {
    if (ps.power.empty()) throw InvalidInputError("empty power spectrum");
    std::size_t best = 0;
    for (std::size_t k = 1; k < ps.power.size(); ++k) {
        if (ps.power[k] > ps.power[best]) best = k;  // strict: ties keep the lower bin
    }
    return ps.frequencies_hz[best];
}

SupportBand sweep_endpoints(const PowerSpectrum& ps, double threshold_fraction) {
    if (ps.power.empty()) throw InvalidInputError("empty power spectrum");
    if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
        throw InvalidInputError("threshold_fraction must be in (0, 1)");
    }
    const double peak = *std::max_element(ps.power.begin(), ps.power.end());
    const double threshold = threshold_fraction * peak;

    std::size_t lo = ps.power.size();
    std::size_t hi = 0;
    bool found = false;
    for (std::size_t k = 0; k < ps.power.size(); ++k) {
        if (ps.power[k] > threshold) {
            if (!found) lo = k;
            hi = k;
            found = true;
        }
    }
    if (!found) throw InvalidInputError("no spectral bin exceeds the support threshold");
    return {ps.frequencies_hz[lo], ps.frequencies_hz[hi]};
}

double pearson_r(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw InvalidInputError("pearson_r requires equal-length sequences");
    }
    if (a.size() < 2) {
        throw InvalidInputError("pearson_r requires at least 2 samples");
    }

    KahanAccumulator mean_a, mean_b;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a.add(a[i]);
        mean_b.add(b[i]);
    }
    const double ma = mean_a.sum() / static_cast<double>(a.size());
    const double mb = mean_b.sum() / static_cast<double>(b.size());

    KahanAccumulator cov, var_a, var_b;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        cov.add(da * db);
        var_a.add(da * da);
        var_b.add(db * db);
    }
    if (var_a.sum() == 0.0 || var_b.sum() == 0.0) {
        throw UndefinedCorrelationError("correlation is undefined for a constant sequence");
    }
    return cov.sum() / std::sqrt(var_a.sum() * var_b.sum());
}

Spectrogram spectrogram(const Signal& x, std::size_t window_len, std::size_t hop_len) {
    validate(x);
    if (window_len < 2 || window_len > x.samples.size()) {
        throw InvalidInputError("window_len must be in [2, signal length]");
    }
    if (hop_len < 1) throw InvalidInputError("hop_len must be at least 1");

    const auto window = hann_window(window_len);
    double window_power = 0.0;
    for (double w : window) window_power += w * w;
    const double scale = 1.0 / (x.sample_rate_hz * window_power);

    const std::size_t nbins = window_len / 2 + 1;
    Spectrogram sg;
    sg.frequencies_hz.resize(nbins);
    for (std::size_t k = 0; k < nbins; ++k) {
        sg.frequencies_hz[k] =
            static_cast<double>(k) * x.sample_rate_hz / static_cast<double>(window_len);
    }

    const bool has_nyquist_bin = window_len % 2 == 0;
    std::vector<double> segment(window_len);
    for (std::size_t s = 0; s + window_len <= x.samples.size(); s += hop_len) {
        for (std::size_t n = 0; n < window_len; ++n) segment[n] = x.samples[s + n] * window[n];
        const auto bins = fft::forward_real(segment);
        std::vector<double> row(nbins);
        for (std::size_t k = 0; k < nbins; ++k) {
            row[k] = std::norm(bins[k]) * scale;
            if (k != 0 && (k != nbins - 1 || !has_nyquist_bin)) row[k] *= 2.0;
        }
        sg.power.push_back(std::move(row));
        sg.times_s.push_back((static_cast<double>(s) +
                              (static_cast<double>(window_len) - 1.0) / 2.0) /
                             x.sample_rate_hz);
    }
    return sg;
}

}  // namespace specwarp
