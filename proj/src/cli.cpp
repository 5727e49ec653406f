#include "specwarp/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "specwarp/errors.hpp"
#include "specwarp/generators.hpp"
#include "specwarp/phase.hpp"
#include "specwarp/signal.hpp"
#include "specwarp/spectrum.hpp"
#include "specwarp/synthesis.hpp"
#include "specwarp/warp_expr.hpp"
#include "specwarp/wav.hpp"

namespace specwarp::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string full_precision(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::size_t largest_pow2_at_most(std::size_t n) {
    std::size_t p = 1;
    while (p * 2 <= n) p *= 2;
    return p;
}

std::size_t choose_segment_len(std::size_t requested, std::size_t signal_len) {
    if (requested != 0) return requested;
    return std::min<std::size_t>(kDefaultSegmentLen, largest_pow2_at_most(signal_len));
}

void write_psd_csv(const PowerSpectrum& ps, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "frequency_hz,power\n";
    for (std::size_t k = 0; k < ps.power.size(); ++k) {
        out << full_precision(ps.frequencies_hz[k]) << ',' << full_precision(ps.power[k])
            << '\n';
    }
    if (!out) throw IoError("write failure on " + path.string());
}

void write_spectrogram_csv(const Spectrogram& sg, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "time_s,frequency_hz,power\n";
    for (std::size_t t = 0; t < sg.times_s.size(); ++t) {
        for (std::size_t k = 0; k < sg.frequencies_hz.size(); ++k) {
            out << full_precision(sg.times_s[t]) << ',' << full_precision(sg.frequencies_hz[k])
                << ',' << full_precision(sg.power[t][k]) << '\n';
        }
    }
    if (!out) throw IoError("write failure on " + path.string());
}

bool wants_json(const fs::path& path) { return path.extension() == ".json"; }

void write_json_file(const json& doc, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failure on " + path.string());
}

void write_psd_json(const PowerSpectrum& ps, const fs::path& path) {
    write_json_file(json{{"frequencies_hz", ps.frequencies_hz}, {"power", ps.power}}, path);
}

void write_spectrogram_json(const Spectrogram& sg, const fs::path& path) {
    write_json_file(json{{"times_s", sg.times_s},
                         {"frequencies_hz", sg.frequencies_hz},
                         {"power", sg.power}},
                    path);
}

ToneComponent parse_component(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw InvalidInputError("component '" + text + "' must look like FREQ:AMPLITUDE");
    }
    try {
        return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
    } catch (const std::exception&) {
        throw InvalidInputError("component '" + text + "' has malformed numbers");
    }
}

struct TrackSummary {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

TrackSummary summarize(const std::vector<double>& values) {
    TrackSummary s;
    if (values.empty()) return s;
    s.min = *std::min_element(values.begin(), values.end());
    s.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    return s;
}

void print_stage_summary(const char* label, const RemapTrace& trace) {
    const auto env = summarize(trace.env.values);
    const auto freq = summarize(trace.frequency.values_hz);
    const auto warped = summarize(trace.warped_frequency.values_hz);
    std::printf("%s\n", label);
    std::printf("  mean                % .6g\n", trace.mean);
    std::printf("  envelope            min %.6g  max %.6g  mean %.6g\n", env.min, env.max,
                env.mean);
    std::printf("  inst. frequency Hz  min %.6g  max %.6g  mean %.6g\n", freq.min, freq.max,
                freq.mean);
    std::printf("  warped freq Hz      min %.6g  max %.6g  mean %.6g\n", warped.min,
                warped.max, warped.mean);
    std::printf("  nyquist clamped     %zu\n", trace.nyquist_clamped);
}

// Spectral support of a sweep-like signal. The low edge needs fine frequency
// resolution; the high edge needs short windows so the Hann taper does not
// swallow the final samples of the record (where an ascending sweep spends
// its highest frequencies). One Welch grid cannot deliver both, so the two
// edges are measured on different grids.
struct SupportParams {
    std::size_t low_segment = 8192;
    double low_threshold = 0.0035;
    std::size_t high_segment = 512;
    double high_threshold = 0.02;
};

SupportBand measure_support(const Signal& x, const SupportParams& p = {}) {
    SupportBand band;
    band.low_hz =
        sweep_endpoints(power_spectrum(x, std::min(p.low_segment, largest_pow2_at_most(x.size())),
                                       kDefaultOverlap),
                        p.low_threshold)
            .low_hz;
    band.high_hz = sweep_endpoints(
                       power_spectrum(x, std::min(p.high_segment, largest_pow2_at_most(x.size())),
                                      kDefaultOverlap),
                       p.high_threshold)
                       .high_hz;
    return band;
}

// ----------------------------------------------------------------------------
// subcommand actions
// ----------------------------------------------------------------------------

struct GenOptions {
    std::string output;
    double duration = 1.0;
    double rate = 16000.0;
    int bits = 16;
    // tone
    double freq = 0.0;
    double amplitude = 1.0;
    // sweep
    double start = 0.0;
    double end = 0.0;
    // multitone
    std::vector<std::string> components;
};

WavEncoding encoding_from_bits(int bits) {
    if (bits == 16) return WavEncoding::Pcm16;
    if (bits == 32) return WavEncoding::Float32;
    throw InvalidInputError("--bits must be 16 or 32");
}

int run_gen(const GenOptions& opt, const std::string& kind) {
    Signal x;
    if (kind == "tone") {
        x = generate_tone(opt.freq, opt.duration, opt.rate, opt.amplitude);
    } else if (kind == "sweep") {
        x = generate_log_sweep(opt.start, opt.end, opt.duration, opt.rate);
    } else {
        std::vector<ToneComponent> components;
        components.reserve(opt.components.size());
        for (const auto& c : opt.components) components.push_back(parse_component(c));
        x = generate_multitone(components, opt.duration, opt.rate);
    }
    const auto stats = write_wav(x, opt.output, encoding_from_bits(opt.bits));
    if (stats.clipped > 0) {
        std::fprintf(stderr, "warning: %zu samples clipped to [-1, 1]\n", stats.clipped);
    }
    std::printf("wrote %s (%zu samples @ %g Hz)\n", opt.output.c_str(), x.size(),
                x.sample_rate_hz);
    return 0;
}

struct WarpOptionsCli {
    std::string warp_text;
    std::string input;
    std::string output;
    std::size_t chunk = 0;
    std::string nyquist = "clamp";
    int bits = 0;  // 0 = keep the input encoding
};

int run_warp(const WarpOptionsCli& opt) {
    const WarpFunction w = parse(opt.warp_text);
    RemapOptions remap_opts;
    remap_opts.nyquist =
        opt.nyquist == "strict" ? NyquistPolicy::Strict : NyquistPolicy::ClampWarn;

    WavInfo info;
    const auto channels = read_wav(opt.input, &info);

    std::vector<Signal> warped;
    warped.reserve(channels.size());
    std::size_t total_clamped = 0;
    for (const Signal& ch : channels) {
        if (opt.chunk > 0) {
            std::size_t clamped = 0;
            warped.push_back(remap_chunked(ch, w, opt.chunk, remap_opts, &clamped));
            total_clamped += clamped;
        } else {
            RemapTrace trace;
            warped.push_back(remap(ch, w, remap_opts, &trace));
            total_clamped += trace.nyquist_clamped;
        }
    }

    const WavEncoding enc = opt.bits == 0 ? info.encoding : encoding_from_bits(opt.bits);
    const auto stats = write_wav(warped, opt.output, enc);
    if (total_clamped > 0) {
        std::fprintf(stderr, "warning: %zu warped frequencies clamped to Nyquist\n",
                     total_clamped);
    }
    if (stats.clipped > 0) {
        std::fprintf(stderr, "warning: %zu samples clipped to [-1, 1]\n", stats.clipped);
    }
    std::printf("wrote %s (%zu channels, %zu samples @ %g Hz)\n", opt.output.c_str(),
                warped.size(), warped[0].size(), warped[0].sample_rate_hz);
    return 0;
}

struct PsdOptions {
    std::string input;
    std::string output;
    std::size_t segment = 0;
    double overlap = kDefaultOverlap;
    std::size_t channel = 0;
};

Signal load_channel(const std::string& path, std::size_t channel) {
    const auto channels = read_wav(path);
    if (channel >= channels.size()) {
        throw InvalidInputError("channel " + std::to_string(channel) + " requested but " +
                                path + " has " + std::to_string(channels.size()));
    }
    return channels[channel];
}

int run_psd(const PsdOptions& opt) {
    const Signal x = load_channel(opt.input, opt.channel);
    const auto ps = power_spectrum(x, choose_segment_len(opt.segment, x.size()), opt.overlap);
    if (wants_json(opt.output)) {
        write_psd_json(ps, opt.output);
    } else {
        write_psd_csv(ps, opt.output);
    }
    std::printf("wrote %s (%zu bins, peak %.6g Hz)\n", opt.output.c_str(), ps.power.size(),
                peak_frequency(ps));
    return 0;
}

struct SpectrogramOptions {
    std::string input;
    std::string output;
    std::size_t window = 1024;
    std::size_t hop = 256;
    std::size_t channel = 0;
};

int run_spectrogram(const SpectrogramOptions& opt) {
    const Signal x = load_channel(opt.input, opt.channel);
    const auto sg = spectrogram(x, opt.window, opt.hop);
    if (wants_json(opt.output)) {
        write_spectrogram_json(sg, opt.output);
    } else {
        write_spectrogram_csv(sg, opt.output);
    }
    std::printf("wrote %s (%zu frames x %zu bins)\n", opt.output.c_str(), sg.times_s.size(),
                sg.frequencies_hz.size());
    return 0;
}

struct ValidateOptions {
    std::string input;
    std::string report;
    std::string warp_text;
    std::string dewarp_text;
    std::size_t segment = 0;
    double overlap = kDefaultOverlap;
    std::size_t channel = 0;
    std::string save_warped;
    std::string save_dewarped;
    std::string nyquist = "clamp";
};

json support_json(const Signal& x) {
    try {
        const auto band = measure_support(x);
        return json::array({band.low_hz, band.high_hz});
    } catch (const Error&) {
        return nullptr;  // degenerate spectrum (e.g. all-zero signal)
    }
}

int run_validate(const ValidateOptions& opt) {
    const WarpFunction w = parse(opt.warp_text);
    const WarpFunction dw = parse(opt.dewarp_text);
    RemapOptions remap_opts;
    remap_opts.nyquist =
        opt.nyquist == "strict" ? NyquistPolicy::Strict : NyquistPolicy::ClampWarn;

    const Signal x = load_channel(opt.input, opt.channel);

    RemapTrace warp_trace;
    const Signal warped = remap(x, w, remap_opts, &warp_trace);
    RemapTrace dewarp_trace;
    const Signal dewarped = remap(warped, dw, remap_opts, &dewarp_trace);

    const double signal_r = pearson_r(x.samples, dewarped.samples);

    const std::size_t segment = choose_segment_len(opt.segment, x.size());
    const auto psd_in = power_spectrum(x, segment, opt.overlap);
    const auto psd_warped = power_spectrum(warped, segment, opt.overlap);
    const auto psd_dewarped = power_spectrum(dewarped, segment, opt.overlap);
    const double psd_r = pearson_r(psd_in.power, psd_dewarped.power);

    std::size_t clipped = 0;
    if (!opt.save_warped.empty()) clipped += write_wav(warped, opt.save_warped).clipped;
    if (!opt.save_dewarped.empty()) clipped += write_wav(dewarped, opt.save_dewarped).clipped;

    print_stage_summary("stage: warp", warp_trace);
    print_stage_summary("stage: dewarp", dewarp_trace);
    std::printf("signal r = %.9f, PSD r = %.9f\n", signal_r, psd_r);

    json report = {
        {"input",
         {{"path", opt.input},
          {"channel", opt.channel},
          {"sample_rate_hz", x.sample_rate_hz},
          {"samples", x.size()},
          {"duration_s", x.duration_s()}}},
        {"warp", opt.warp_text},
        {"dewarp", opt.dewarp_text},
        {"signal_r", signal_r},
        {"psd_r", psd_r},
        {"peaks_hz", json::array({peak_frequency(psd_in), peak_frequency(psd_warped),
                                  peak_frequency(psd_dewarped)})},
        {"support_hz",
         {{"input", support_json(x)},
          {"warped", support_json(warped)},
          {"dewarped", support_json(dewarped)}}},
        {"psd", {{"segment_len", segment}, {"overlap", opt.overlap}}},
        {"warnings",
         {{"clipped", clipped},
          {"nyquist_clamped", warp_trace.nyquist_clamped + dewarp_trace.nyquist_clamped}}},
    };

    std::ofstream out(opt.report, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + opt.report + " for writing");
    out << report.dump(2) << '\n';
    if (!out) throw IoError("write failure on " + opt.report);
    std::printf("wrote %s\n", opt.report.c_str());
    return 0;
}

// Regenerates the pure-tone and log-sweep warp/de-warp experiments and
// checks their headline numbers.
int run_demo() {
    struct Row {
        std::string name;
        std::string detail;
        bool pass = false;
    };
    std::vector<Row> rows;

    const double rate = 16000.0;
    const WarpFunction w23 = parse("2/3*f");
    const WarpFunction w32 = parse("3/2*f");

    // Pure tone: 300 Hz -> 200 Hz -> 300 Hz.
    {
        const Signal x = generate_tone(300.0, 1.0, rate);
        const Signal warped = remap(x, w23);
        const Signal dewarped = remap(warped, w32);

        const double bin = rate / 4096.0;
        const double peak_in = peak_frequency(power_spectrum(x, 4096));
        const double peak_warped = peak_frequency(power_spectrum(warped, 4096));
        const double peak_dewarped = peak_frequency(power_spectrum(dewarped, 4096));

        rows.push_back({"tone warp: PSD peak 300 -> 200 Hz (+-1 bin)",
                        "peaks " + std::to_string(peak_in) + " -> " +
                            std::to_string(peak_warped) + " Hz",
                        std::abs(peak_in - 300.0) <= bin + 1e-9 &&
                            std::abs(peak_warped - 200.0) <= bin + 1e-9});

        const double r_sig = pearson_r(x.samples, dewarped.samples);
        const double r_psd = pearson_r(power_spectrum(x, 4096).power,
                                       power_spectrum(dewarped, 4096).power);
        rows.push_back({"tone de-warp: signal r >= 0.999, PSD r >= 0.95",
                        "r = " + std::to_string(r_sig) + ", PSD r = " + std::to_string(r_psd) +
                            ", peak " + std::to_string(peak_dewarped) + " Hz",
                        r_sig >= 0.999 && r_psd >= 0.95 &&
                            std::abs(peak_dewarped - 300.0) <= bin + 1e-9});
    }

    // Log sweep: 21..480 Hz -> 14..320 Hz -> back.
    {
        const Signal x = generate_log_sweep(21.0, 480.0, 1.0, rate);
        const Signal warped = remap(x, w23);
        const Signal dewarped = remap(warped, w32);

        const auto in_band = measure_support(x);
        rows.push_back({"sweep input: PSD support 21..480 Hz (+-5%)",
                        "measured " + std::to_string(in_band.low_hz) + ".." +
                            std::to_string(in_band.high_hz) + " Hz",
                        std::abs(in_band.low_hz - 21.0) <= 0.05 * 21.0 &&
                            std::abs(in_band.high_hz - 480.0) <= 0.05 * 480.0});

        const auto warped_band = measure_support(warped);
        rows.push_back({"sweep warp: PSD support 14..320 Hz (+-5%)",
                        "measured " + std::to_string(warped_band.low_hz) + ".." +
                            std::to_string(warped_band.high_hz) + " Hz",
                        std::abs(warped_band.low_hz - 14.0) <= 0.05 * 14.0 &&
                            std::abs(warped_band.high_hz - 320.0) <= 0.05 * 320.0});

        const double r_sig = pearson_r(x.samples, dewarped.samples);
        const double r_psd = pearson_r(power_spectrum(x, 4096).power,
                                       power_spectrum(dewarped, 4096).power);
        rows.push_back({"sweep de-warp: signal r >= 0.99, PSD r >= 0.98",
                        "r = " + std::to_string(r_sig) + ", PSD r = " + std::to_string(r_psd),
                        r_sig >= 0.99 && r_psd >= 0.98});
    }

    bool all_pass = true;
    std::printf("%-52s %-44s %s\n", "experiment", "measured", "result");
    for (const Row& row : rows) {
        std::printf("%-52s %-44s %s\n", row.name.c_str(), row.detail.c_str(),
                    row.pass ? "PASS" : "FAIL");
        all_pass = all_pass && row.pass;
    }
    std::printf("%s\n", all_pass ? "all experiments passed" : "SOME EXPERIMENTS FAILED");
    return all_pass ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"frequency warping of real-valued signals via analytic-signal resynthesis"};
    app.name("specwarp");
    app.require_subcommand(1);
    app.set_config("--config", "", "read options from an INI file (flags take precedence)");

    std::function<int()> action;

    // gen
    auto* gen = app.add_subcommand("gen", "generate a test signal and write it as WAV");
    gen->require_subcommand(1);
    GenOptions gen_opt;

    auto* tone = gen->add_subcommand("tone", "pure sinusoid");
    tone->add_option("output", gen_opt.output, "output WAV path")->required();
    tone->add_option("--freq", gen_opt.freq, "frequency in Hz")->required();
    tone->add_option("--duration", gen_opt.duration, "duration in seconds");
    tone->add_option("--rate", gen_opt.rate, "sample rate in Hz");
    tone->add_option("--amplitude", gen_opt.amplitude, "peak amplitude");
    tone->add_option("--bits", gen_opt.bits, "16 (PCM) or 32 (float)");
    tone->callback([&] { action = [&] { return run_gen(gen_opt, "tone"); }; });

    auto* sweep = gen->add_subcommand("sweep", "logarithmic frequency sweep");
    sweep->add_option("output", gen_opt.output, "output WAV path")->required();
    sweep->add_option("--start", gen_opt.start, "start frequency in Hz")->required();
    sweep->add_option("--end", gen_opt.end, "end frequency in Hz")->required();
    sweep->add_option("--duration", gen_opt.duration, "duration in seconds");
    sweep->add_option("--rate", gen_opt.rate, "sample rate in Hz");
    sweep->add_option("--bits", gen_opt.bits, "16 (PCM) or 32 (float)");
    sweep->callback([&] { action = [&] { return run_gen(gen_opt, "sweep"); }; });

    auto* multitone = gen->add_subcommand("multitone", "sum of sinusoids");
    multitone->add_option("output", gen_opt.output, "output WAV path")->required();
    multitone
        ->add_option("--component", gen_opt.components,
                     "FREQ:AMPLITUDE, repeat for each component")
        ->required();
    multitone->add_option("--duration", gen_opt.duration, "duration in seconds");
    multitone->add_option("--rate", gen_opt.rate, "sample rate in Hz");
    multitone->add_option("--bits", gen_opt.bits, "16 (PCM) or 32 (float)");
    multitone->callback([&] { action = [&] { return run_gen(gen_opt, "multitone"); }; });

    // warp
    WarpOptionsCli warp_opt;
    auto* warp = app.add_subcommand("warp", "remap the spectral content of a WAV file");
    warp->add_option("input", warp_opt.input, "input WAV path")->required();
    warp->add_option("output", warp_opt.output, "output WAV path")->required();
    warp->add_option("--warp", warp_opt.warp_text, "warp expression over f, e.g. \"2/3*f\"")
        ->required();
    warp->add_option("--chunk", warp_opt.chunk,
                     "process in independent chunks of this many samples (>= 16)");
    warp->add_option("--nyquist", warp_opt.nyquist, "clamp (default) or strict")
        ->check(CLI::IsMember({"clamp", "strict"}));
    warp->add_option("--bits", warp_opt.bits, "output bit depth: 16 or 32 (default: as input)");
    warp->callback([&] { action = [&] { return run_warp(warp_opt); }; });

    // psd
    PsdOptions psd_opt;
    auto* psd = app.add_subcommand("psd", "write the Welch power spectrum as CSV or JSON");
    psd->add_option("input", psd_opt.input, "input WAV path")->required();
    psd->add_option("output", psd_opt.output, "output path (.csv, or .json for JSON)")
        ->required();
    psd->add_option("--segment", psd_opt.segment,
                    "segment length, a power of two (default 4096, shrunk to fit)");
    psd->add_option("--overlap", psd_opt.overlap, "overlap fraction in [0, 1)");
    psd->add_option("--channel", psd_opt.channel, "channel index");
    psd->callback([&] { action = [&] { return run_psd(psd_opt); }; });

    // spectrogram
    SpectrogramOptions sg_opt;
    auto* sg = app.add_subcommand("spectrogram",
                                  "write a short-time power grid as CSV or JSON");
    sg->add_option("input", sg_opt.input, "input WAV path")->required();
    sg->add_option("output", sg_opt.output, "output path (.csv, or .json for JSON)")
        ->required();
    sg->add_option("--window", sg_opt.window, "window length in samples");
    sg->add_option("--hop", sg_opt.hop, "hop length in samples");
    sg->add_option("--channel", sg_opt.channel, "channel index");
    sg->callback([&] { action = [&] { return run_spectrogram(sg_opt); }; });

    // validate
    ValidateOptions val_opt;
    auto* validate = app.add_subcommand(
        "validate", "warp, de-warp, and report correlation metrics as JSON");
    validate->add_option("input", val_opt.input, "input WAV path")->required();
    validate->add_option("report", val_opt.report, "output JSON report path")->required();
    validate->add_option("--warp", val_opt.warp_text, "forward warp expression")->required();
    validate->add_option("--dewarp", val_opt.dewarp_text, "inverse warp expression")
        ->required();
    validate->add_option("--segment", val_opt.segment, "PSD segment length (power of two)");
    validate->add_option("--overlap", val_opt.overlap, "PSD overlap fraction in [0, 1)");
    validate->add_option("--channel", val_opt.channel, "channel index");
    validate->add_option("--save-warped", val_opt.save_warped, "also write the warped WAV");
    validate->add_option("--save-dewarped", val_opt.save_dewarped,
                         "also write the de-warped WAV");
    validate->add_option("--nyquist", val_opt.nyquist, "clamp (default) or strict")
        ->check(CLI::IsMember({"clamp", "strict"}));
    validate->callback([&] { action = [&] { return run_validate(val_opt); }; });

    // demo
    auto* demo = app.add_subcommand(
        "demo", "re-run the pure-tone and sweep warp experiments and print a pass/fail table");
    demo->callback([&] { action = run_demo; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        return action ? action() : 1;
    } catch (const Error& e) {
        std::fprintf(stderr, "specwarp: error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "specwarp: unexpected error: %s\n", e.what());
        return 1;
    }
}

}  // namespace specwarp::cli
