#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "specwarp/cli.hpp"
#include "specwarp/spectrum.hpp"
#include "specwarp/wav.hpp"

using namespace specwarp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path = fs::temp_directory_path() / ("specwarp-cli-" + std::to_string(rng()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const char* name) const { return (path / name).string(); }
};

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> storage;
    storage.reserve(args.size() + 1);
    storage.emplace_back("specwarp");
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(storage.size());
    for (const auto& s : storage) argv.push_back(s.c_str());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("gen tone writes a playable WAV") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("tone.wav"), "--freq", "300", "--duration",
                     "1.0", "--rate", "16000"}) == 0);
    const auto channels = read_wav(tmp.file("tone.wav"));
    REQUIRE(channels.size() == 1);
    CHECK(channels[0].size() == 16000);
    CHECK(channels[0].sample_rate_hz == 16000.0);
}

TEST_CASE("identity warp reproduces the input file") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "300"}) == 0);
    REQUIRE(run_cli({"warp", "--warp", "f", tmp.file("in.wav"), tmp.file("out.wav")}) == 0);

    const auto in = read_wav(tmp.file("in.wav"));
    const auto out = read_wav(tmp.file("out.wav"));
    REQUIRE(out[0].size() == in[0].size());
    CHECK(std::abs(pearson_r(in[0].samples, out[0].samples) - 1.0) <= 1e-9);
}

TEST_CASE("warp moves a tone's spectral peak") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "300"}) == 0);
    REQUIRE(run_cli({"warp", "--warp", "2/3*f", tmp.file("in.wav"), tmp.file("out.wav")}) ==
            0);
    const auto out = read_wav(tmp.file("out.wav"));
    const double peak = peak_frequency(power_spectrum(out[0], 4096));
    CHECK(std::abs(peak - 200.0) <= 16000.0 / 4096.0 + 1e-9);
}

TEST_CASE("warp handles stereo files per channel") {
    TempDir tmp;
    const Signal left = [] {
        Signal s;
        s.sample_rate_hz = 16000.0;
        s.samples.resize(8000);
        for (std::size_t n = 0; n < s.samples.size(); ++n) {
            s.samples[n] = 0.8 * std::sin(2 * 3.14159265358979 * 300.0 * n / 16000.0);
        }
        return s;
    }();
    Signal right = left;
    for (auto& v : right.samples) v = -v;
    write_wav(std::vector<Signal>{left, right}, tmp.file("st.wav"));

    REQUIRE(run_cli({"warp", "--warp", "f", tmp.file("st.wav"), tmp.file("out.wav")}) == 0);
    const auto out = read_wav(tmp.file("out.wav"));
    REQUIRE(out.size() == 2);
    CHECK(out[0].size() == out[1].size());
    CHECK(pearson_r(out[0].samples, out[1].samples) == doctest::Approx(-1.0));
}

TEST_CASE("gen multitone accepts repeated components") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "multitone", tmp.file("mt.wav"), "--component", "300:1.0",
                     "--component", "900:0.5", "--duration", "1.0"}) == 0);
    const auto channels = read_wav(tmp.file("mt.wav"));
    REQUIRE(channels.size() == 1);
    CHECK(channels[0].size() == 16000);
    const double peak = peak_frequency(power_spectrum(channels[0], 4096));
    CHECK(std::abs(peak - 300.0) <= 16000.0 / 4096.0 + 1e-9);

    CHECK(run_cli({"gen", "multitone", tmp.file("bad.wav"), "--component", "oops"}) != 0);
}

TEST_CASE("chunked warp via the CLI keeps the length and the peak") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "300"}) == 0);
    REQUIRE(run_cli({"warp", "--warp", "2/3*f", "--chunk", "4000", tmp.file("in.wav"),
                     tmp.file("out.wav")}) == 0);
    const auto out = read_wav(tmp.file("out.wav"));
    CHECK(out[0].size() == 16000);
    const double peak = peak_frequency(power_spectrum(out[0], 4096));
    CHECK(std::abs(peak - 200.0) <= 16000.0 / 4096.0 + 1e-9);
}

TEST_CASE("validate can save the intermediate signals") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "300"}) == 0);
    REQUIRE(run_cli({"validate", "--warp", "2/3*f", "--dewarp", "3/2*f", tmp.file("in.wav"),
                     tmp.file("report.json"), "--save-warped", tmp.file("warped.wav"),
                     "--save-dewarped", tmp.file("dewarped.wav")}) == 0);
    const auto warped = read_wav(tmp.file("warped.wav"));
    const double peak = peak_frequency(power_spectrum(warped[0], 4096));
    CHECK(std::abs(peak - 200.0) <= 16000.0 / 4096.0 + 1e-9);
    CHECK(fs::exists(tmp.file("dewarped.wav")));
}

TEST_CASE("psd subcommand writes the documented CSV") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "300"}) == 0);
    REQUIRE(run_cli({"psd", tmp.file("in.wav"), tmp.file("out.csv"), "--segment", "2048"}) ==
            0);

    std::ifstream csv(tmp.file("out.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "frequency_hz,power");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(csv, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 1025);  // 2048/2 + 1 bins
}

TEST_CASE("psd and spectrogram write JSON when asked") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "300"}) == 0);
    REQUIRE(run_cli({"psd", tmp.file("in.wav"), tmp.file("psd.json"), "--segment", "2048"}) ==
            0);
    const auto psd = nlohmann::json::parse(slurp(tmp.file("psd.json")));
    REQUIRE(psd["frequencies_hz"].size() == 1025);
    REQUIRE(psd["power"].size() == 1025);

    REQUIRE(run_cli({"spectrogram", tmp.file("in.wav"), tmp.file("sg.json"), "--window",
                     "1024", "--hop", "512"}) == 0);
    const auto sg = nlohmann::json::parse(slurp(tmp.file("sg.json")));
    CHECK(sg["power"].size() == sg["times_s"].size());
    CHECK(sg["power"][0].size() == sg["frequencies_hz"].size());
}

TEST_CASE("psd output is deterministic") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "sweep", tmp.file("in.wav"), "--start", "21", "--end", "480"}) ==
            0);
    REQUIRE(run_cli({"psd", tmp.file("in.wav"), tmp.file("a.csv")}) == 0);
    REQUIRE(run_cli({"psd", tmp.file("in.wav"), tmp.file("b.csv")}) == 0);
    CHECK(slurp(tmp.file("a.csv")) == slurp(tmp.file("b.csv")));
}

TEST_CASE("spectrogram subcommand writes the long-format CSV") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "300"}) == 0);
    REQUIRE(run_cli({"spectrogram", tmp.file("in.wav"), tmp.file("sg.csv"), "--window",
                     "1024", "--hop", "512"}) == 0);
    std::ifstream csv(tmp.file("sg.csv"));
    std::string header;
    std::getline(csv, header);
    CHECK(header == "time_s,frequency_hz,power");
}

TEST_CASE("validate emits the full report schema") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "300"}) == 0);
    REQUIRE(run_cli({"validate", "--warp", "2/3*f", "--dewarp", "3/2*f", tmp.file("in.wav"),
                     tmp.file("report.json")}) == 0);

    const auto report = nlohmann::json::parse(slurp(tmp.file("report.json")));
    CHECK(report.contains("input"));
    CHECK(report["input"].contains("sample_rate_hz"));
    CHECK(report["warp"] == "2/3*f");
    CHECK(report["dewarp"] == "3/2*f");
    CHECK(report["signal_r"].get<double>() >= 0.999);
    CHECK(report["psd_r"].get<double>() >= 0.95);
    REQUIRE(report["peaks_hz"].size() == 3);
    const double bin = 16000.0 / 4096.0;
    CHECK(std::abs(report["peaks_hz"][0].get<double>() - 300.0) <= bin + 1e-9);
    CHECK(std::abs(report["peaks_hz"][1].get<double>() - 200.0) <= bin + 1e-9);
    CHECK(std::abs(report["peaks_hz"][2].get<double>() - 300.0) <= bin + 1e-9);
    CHECK(report["warnings"]["clipped"].get<int>() == 0);
    CHECK(report["warnings"]["nyquist_clamped"].get<int>() == 0);
}

TEST_CASE("validate on a sweep reports high round-trip correlation") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "sweep", tmp.file("in.wav"), "--start", "21", "--end", "480",
                     "--bits", "32"}) == 0);
    REQUIRE(run_cli({"validate", "--warp", "2/3*f", "--dewarp", "3/2*f", tmp.file("in.wav"),
                     tmp.file("report.json")}) == 0);
    const auto report = nlohmann::json::parse(slurp(tmp.file("report.json")));
    CHECK(report["signal_r"].get<double>() >= 0.99);
}

TEST_CASE("demo runs its experiments and succeeds") {
    CHECK(run_cli({"demo"}) == 0);
}

TEST_CASE("config file supplies defaults that flags override") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "300"}) == 0);
    {
        std::ofstream cfg(tmp.file("cfg.ini"));
        cfg << "[psd]\nsegment=2048\n";
    }
    REQUIRE(run_cli({"--config", tmp.file("cfg.ini"), "psd", tmp.file("in.wav"),
                     tmp.file("a.csv")}) == 0);
    std::ifstream csv(tmp.file("a.csv"));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 1025 + 1);  // 2048-point grid from the config

    REQUIRE(run_cli({"--config", tmp.file("cfg.ini"), "psd", tmp.file("in.wav"),
                     tmp.file("b.csv"), "--segment", "1024"}) == 0);
    std::ifstream csv_b(tmp.file("b.csv"));
    rows = 0;
    while (std::getline(csv_b, line)) ++rows;
    CHECK(rows == 513 + 1);  // the flag wins over the config
}

TEST_CASE("failures exit nonzero with diagnostics") {
    TempDir tmp;
    CHECK(run_cli({"definitely-not-a-subcommand"}) != 0);
    CHECK(run_cli({"warp", "--warp", "2*f+g", tmp.file("missing.wav"),
                   tmp.file("out.wav")}) != 0);
    CHECK(run_cli({"psd", tmp.file("missing.wav"), tmp.file("out.csv")}) != 0);
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "300"}) == 0);
    CHECK(run_cli({"warp", "--warp", "((f", tmp.file("in.wav"), tmp.file("out.wav")}) != 0);
    CHECK(run_cli({"gen", "tone", tmp.file("bad.wav"), "--freq", "9000"}) != 0);
}

TEST_CASE("strict nyquist policy fails on aliasing warps") {
    TempDir tmp;
    REQUIRE(run_cli({"gen", "tone", tmp.file("in.wav"), "--freq", "3000"}) == 0);
    CHECK(run_cli({"warp", "--warp", "10*f", "--nyquist", "strict", tmp.file("in.wav"),
                   tmp.file("out.wav")}) != 0);
    // the default clamp policy completes with a warning instead
    CHECK(run_cli({"warp", "--warp", "10*f", tmp.file("in.wav"), tmp.file("out.wav")}) == 0);
}

}  // TEST_SUITE
