#pragma once

#include <complex>
#include <span>
#include <vector>

namespace specwarp::fft {

std::vector<std::complex<double>> forward(std::span<const std::complex<double>> in);

/// Inverse transform, scaled by 1/N.
std::vector<std::complex<double>> inverse(std::span<const std::complex<double>> in);

/// Real-to-complex transform; returns the n/2 + 1 non-negative-frequency bins.
std::vector<std::complex<double>> forward_real(std::span<const double> in);

}  // namespace specwarp::fft
