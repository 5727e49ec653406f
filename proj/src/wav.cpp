#include "specwarp/wav.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "specwarp/errors.hpp"

namespace specwarp {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatIeeeFloat = 3;
constexpr double kPcm16Scale = 32768.0;

std::uint16_t read_u16(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

std::uint32_t read_u32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void append_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
}

void append_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
    out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

void append_tag(std::vector<std::uint8_t>& out, const char* tag) {
    out.insert(out.end(), tag, tag + 4);
}

struct FmtChunk {
    std::uint16_t format = 0;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits_per_sample = 0;
};

}  // namespace

std::vector<Signal> read_wav(const std::filesystem::path& path, WavInfo* info) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(file)),
                                    std::istreambuf_iterator<char>());
    if (file.bad()) throw IoError("read failure on " + path.string());

    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw FormatError(path.string() + " is not a RIFF/WAVE file");
    }

    FmtChunk fmt;
    bool have_fmt = false;
    const std::uint8_t* data = nullptr;
    std::size_t data_size = 0;

    std::size_t offset = 12;
    while (offset + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(bytes.data() + offset);
        const std::uint32_t size = read_u32(bytes.data() + offset + 4);
        offset += 8;
        if (offset + size > bytes.size()) {
            throw IoError(path.string() + " is truncated inside a chunk");
        }
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (size < 16) throw FormatError("fmt chunk too small");
            fmt.format = read_u16(bytes.data() + offset);
            fmt.channels = read_u16(bytes.data() + offset + 2);
            fmt.sample_rate = read_u32(bytes.data() + offset + 4);
            fmt.bits_per_sample = read_u16(bytes.data() + offset + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = bytes.data() + offset;
            data_size = size;
        }
        offset += size + (size % 2);  // chunks are word-aligned
    }

    if (!have_fmt) throw FormatError(path.string() + " has no fmt chunk");
    if (data == nullptr) throw FormatError(path.string() + " has no data chunk");
    if (fmt.sample_rate == 0) throw FormatError("sample rate is zero");
    if (fmt.channels < 1 || fmt.channels > 2) {
        throw FormatError("unsupported channel count " + std::to_string(fmt.channels) +
                          " (mono and stereo only)");
    }

    WavEncoding encoding;
    if (fmt.format == kFormatPcm && fmt.bits_per_sample == 16) {
        encoding = WavEncoding::Pcm16;
    } else if (fmt.format == kFormatIeeeFloat && fmt.bits_per_sample == 32) {
        encoding = WavEncoding::Float32;
    } else {
        throw FormatError("unsupported WAV encoding (format tag " +
                          std::to_string(fmt.format) + ", " +
                          std::to_string(fmt.bits_per_sample) + " bits per sample)");
    }

    if (data_size == 0) throw InvalidInputError(path.string() + " has a zero-length data chunk");
    const std::size_t bytes_per_sample = fmt.bits_per_sample / 8;
    const std::size_t frame_size = bytes_per_sample * fmt.channels;
    if (data_size % frame_size != 0) {
        throw FormatError(path.string() + " data chunk is not a whole number of frames");
    }
    const std::size_t frames = data_size / frame_size;
    if (frames < 2) throw InvalidInputError(path.string() + " holds fewer than 2 frames");

    std::vector<Signal> channels(fmt.channels);
    for (auto& ch : channels) {
        ch.sample_rate_hz = static_cast<double>(fmt.sample_rate);
        ch.samples.resize(frames);
    }
    for (std::size_t n = 0; n < frames; ++n) {
        for (std::size_t c = 0; c < fmt.channels; ++c) {
            const std::uint8_t* p = data + n * frame_size + c * bytes_per_sample;
            if (encoding == WavEncoding::Pcm16) {
                const auto raw = static_cast<std::int16_t>(read_u16(p));
                channels[c].samples[n] = static_cast<double>(raw) / kPcm16Scale;
            } else {
                const std::uint32_t raw = read_u32(p);
                channels[c].samples[n] = static_cast<double>(std::bit_cast<float>(raw));
            }
        }
    }

    if (info) {
        info->encoding = encoding;
        info->channels = fmt.channels;
    }
    return channels;
}

WavWriteStats write_wav(const Signal& x, const std::filesystem::path& path,
                        WavEncoding encoding) {
    return write_wav(std::span<const Signal>(&x, 1), path, encoding);
}

WavWriteStats write_wav(std::span<const Signal> channels, const std::filesystem::path& path,
                        WavEncoding encoding) {
    if (channels.empty()) throw InvalidInputError("no channels to write");
    const std::size_t frames = channels[0].samples.size();
    if (frames == 0) throw InvalidInputError("cannot write an empty signal");
    for (const Signal& ch : channels) {
        if (ch.samples.size() != frames) {
            throw InvalidInputError("channel lengths differ");
        }
        if (ch.sample_rate_hz != channels[0].sample_rate_hz) {
            throw InvalidInputError("channel sample rates differ");
        }
    }
    const auto rate = static_cast<std::int64_t>(std::llround(channels[0].sample_rate_hz));
    if (rate < 1) throw InvalidInputError("sample rate must be at least 1 Hz");

    const std::uint16_t nch = static_cast<std::uint16_t>(channels.size());
    const std::uint16_t bits = encoding == WavEncoding::Pcm16 ? 16 : 32;
    const std::uint16_t block_align = static_cast<std::uint16_t>(nch * bits / 8);
    const std::uint32_t data_size = static_cast<std::uint32_t>(frames * block_align);

    WavWriteStats stats;
    auto clipped = [&stats](double v) {
        if (v > 1.0) {
            ++stats.clipped;
            return 1.0;
        }
        if (v < -1.0) {
            ++stats.clipped;
            return -1.0;
        }
        return v;
    };

    std::vector<std::uint8_t> out;
    out.reserve(64 + data_size);
    append_tag(out, "RIFF");
    append_u32(out, 0);  // patched below
    append_tag(out, "WAVE");

    const bool is_float = encoding == WavEncoding::Float32;
    append_tag(out, "fmt ");
    append_u32(out, is_float ? 18 : 16);
    append_u16(out, is_float ? kFormatIeeeFloat : kFormatPcm);
    append_u16(out, nch);
    append_u32(out, static_cast<std::uint32_t>(rate));
    append_u32(out, static_cast<std::uint32_t>(rate * block_align));
    append_u16(out, block_align);
    append_u16(out, bits);
    if (is_float) {
        append_u16(out, 0);  // cbSize
        append_tag(out, "fact");
        append_u32(out, 4);
        append_u32(out, static_cast<std::uint32_t>(frames));
    }

    append_tag(out, "data");
    append_u32(out, data_size);
    for (std::size_t n = 0; n < frames; ++n) {
        for (std::size_t c = 0; c < channels.size(); ++c) {
            const double v = clipped(channels[c].samples[n]);
            if (encoding == WavEncoding::Pcm16) {
                const auto q = static_cast<std::int32_t>(std::llround(v * kPcm16Scale));
                const auto s = static_cast<std::int16_t>(std::clamp(q, -32768, 32767));
                append_u16(out, static_cast<std::uint16_t>(s));
            } else {
                append_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
            }
        }
    }

    const std::uint32_t riff_size = static_cast<std::uint32_t>(out.size() - 8);
    out[4] = static_cast<std::uint8_t>(riff_size & 0xff);
    out[5] = static_cast<std::uint8_t>((riff_size >> 8) & 0xff);
    out[6] = static_cast<std::uint8_t>((riff_size >> 16) & 0xff);
    out[7] = static_cast<std::uint8_t>((riff_size >> 24) & 0xff);

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    file.write(reinterpret_cast<const char*>(out.data()),
               static_cast<std::streamsize>(out.size()));
    if (!file) throw IoError("write failure on " + path.string());
    return stats;
}

}  // namespace specwarp
