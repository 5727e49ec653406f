#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "specwarp/signal.hpp"

namespace specwarp {

enum class WavEncoding {
    Pcm16,    // 16-bit signed PCM, little-endian
    Float32,  // 32-bit IEEE float
};

struct WavInfo {
    WavEncoding encoding = WavEncoding::Pcm16;
    std::size_t channels = 0;
};

/// Reads a RIFF/WAVE file (PCM16 or float32, mono or stereo) into one
/// Signal per channel, samples normalized to [-1, 1]. The sample rate comes
/// from the header.
std::vector<Signal> read_wav(const std::filesystem::path& path, WavInfo* info = nullptr);

struct WavWriteStats {
    std::size_t clipped = 0;  // samples outside [-1, 1] clipped before encoding
};

WavWriteStats write_wav(const Signal& x, const std::filesystem::path& path,
                        WavEncoding encoding = WavEncoding::Pcm16);

/// Multi-channel variant; channels are interleaved and must have equal
/// lengths and sample rates.
WavWriteStats write_wav(std::span<const Signal> channels, const std::filesystem::path& path,
                        WavEncoding encoding = WavEncoding::Pcm16);

}  // namespace specwarp
