#include "specwarp/signal.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "specwarp/errors.hpp"
#include "specwarp/fft.hpp"
#include "math_util.hpp"

namespace specwarp {

void validate(const Signal& x) {
    if (x.samples.size() < 2) {
        throw InvalidInputError("signal must contain at least 2 samples (got " +
                                std::to_string(x.samples.size()) + ")");
    }
    if (!(x.sample_rate_hz > 0.0) || !std::isfinite(x.sample_rate_hz)) {
        throw InvalidInputError("sample rate must be positive and finite");
    }
    for (std::size_t i = 0; i < x.samples.size(); ++i) {
        if (!std::isfinite(x.samples[i])) {
            throw InvalidInputError("signal contains a non-finite sample at index " +
                                    std::to_string(i));
        }
    }
}

double compute_mean(const Signal& x) {
    validate(x);
    KahanAccumulator acc;
    for (double v : x.samples) acc.add(v);
    return acc.sum() / static_cast<double>(x.samples.size());
}

AnalyticSignal make_analytic(const Signal& x) {
    const double mu = compute_mean(x);  // validates
    const std::size_t m = x.samples.size();

    AnalyticSignal a;
    a.mean = mu;
    a.sample_rate_hz = x.sample_rate_hz;
    a.real_part.resize(m);
    for (std::size_t i = 0; i < m; ++i) a.real_part[i] = x.samples[i] - mu;

    std::vector<std::complex<double>> buf(m);
    for (std::size_t i = 0; i < m; ++i) buf[i] = a.real_part[i];
    auto spectrum = fft::forward(buf);

    // Multiply bin k by -j*sgn(k): -j on positive-frequency bins, +j on
    // negative-frequency bins, zero at DC and (even m) the Nyquist bin.
    const std::size_t half = m / 2;
    std::vector<std::complex<double>> ht_spectrum(m, {0.0, 0.0});
    const std::complex<double> minus_j{0.0, -1.0};
    const std::complex<double> plus_j{0.0, 1.0};
    const std::size_t pos_end = (m % 2 == 0) ? half : half + 1;
    for (std::size_t k = 1; k < pos_end; ++k) ht_spectrum[k] = minus_j * spectrum[k];
    for (std::size_t k = half + 1; k < m; ++k) ht_spectrum[k] = plus_j * spectrum[k];

    auto ht = fft::inverse(ht_spectrum);
    a.imag_part.resize(m);
    for (std::size_t i = 0; i < m; ++i) a.imag_part[i] = ht[i].real();
    return a;
}

Envelope envelope(const AnalyticSignal& a) {
    Envelope e;
    e.values.resize(a.real_part.size());
    for (std::size_t i = 0; i < a.real_part.size(); ++i) {
        e.values[i] = std::hypot(a.real_part[i], a.imag_part[i]);
    }
    return e;
}

WrappedPhase instantaneous_phase(const AnalyticSignal& a) {
    WrappedPhase p;
    p.values.resize(a.real_part.size());
    for (std::size_t i = 0; i < a.real_part.size(); ++i) {
        const double re = a.real_part[i];
        const double im = a.imag_part[i];
        p.values[i] = (re == 0.0 && im == 0.0) ? 0.0 : std::atan2(im, re);
    }
    return p;
}

}  // namespace specwarp
