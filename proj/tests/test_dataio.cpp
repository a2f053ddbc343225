#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include <unistd.h>

#include <json.hpp>

#include "icesurf/dataio.hpp"
#include "icesurf/eval.hpp"
#include "icesurf/synth.hpp"

using namespace icesurf;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("icesurf_dataio_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

SynthResult sample(std::uint64_t seed = 1) {
    SynthConfig cfg;
    cfg.dims = {3, 5, 60};
    cfg.seed = seed;
    return generate(cfg);
}

}  // namespace

TEST_CASE("crc32 matches the standard check value") {
    CHECK(io::crc32("123456789") == 0xCBF43926u);
    CHECK(io::crc32("") == 0u);
}

TEST_CASE("sequence round trip is exact") {
    TempDir tmp;
    const auto s = sample();
    io::write_sequence(s.sequence, tmp.path / "seq");
    const auto back = io::read_sequence(tmp.path / "seq");
    CHECK(back.dims() == s.sequence.dims());
    CHECK(std::ranges::equal(back.intensity_data(), s.sequence.intensity_data()));
    CHECK(std::ranges::equal(back.air_data(), s.sequence.air_data()));
    CHECK(std::ranges::equal(back.bins(), s.sequence.bins()));
}

TEST_CASE("intensity.bin uses the slice-major, row-major layout") {
    TempDir tmp;
    Dims d{2, 3, 4};
    std::vector<float> data(d.voxels());
    TopoSequence seq(d, std::vector<float>(d.voxels()), std::vector<Label>(d.columns(), 0),
                     std::vector<std::optional<BottomBin>>(2));
    // Build a sequence with intensity(i, j, r) = 100 i + 10 r + j.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j)
            for (int r = 0; r < 4; ++r) data[(static_cast<std::size_t>(i) * 3 + j) * 4 + r] = 100.0f * i + 10.0f * r + j;
    TopoSequence coded(d, data, std::vector<Label>(d.columns(), 0), std::vector<std::optional<BottomBin>>(2));
    io::write_sequence(coded, tmp.path);
    const auto raw = io::read_file(tmp.path / "intensity.bin");
    REQUIRE(raw.size() == d.voxels() * 4);
    auto element = [&](std::size_t k) {
        float v;
        std::memcpy(&v, raw.data() + 4 * k, 4);
        return v;
    };
    for (int i = 0; i < 2; ++i)
        for (int r = 0; r < 4; ++r)
            for (int j = 0; j < 3; ++j) CHECK(element((static_cast<std::size_t>(i) * 4 + r) * 3 + j) == 100.0f * i + 10.0f * r + j);
}

TEST_CASE("container errors") {
    TempDir tmp;
    const auto dir = tmp.path / "seq";
    io::write_sequence(sample().sequence, dir);
    auto manifest = io::read_file(dir / "manifest.txt");

    SUBCASE("missing manifest") {
        fs::remove(dir / "manifest.txt");
        try {
            io::read_sequence(dir);
            FAIL("expected MissingFile");
        } catch (const MissingFile& e) {
            CHECK(std::string(e.what()).find("manifest.txt") != std::string::npos);
        }
    }
    SUBCASE("truncated intensity") {
        auto raw = io::read_file(dir / "intensity.bin");
        raw.resize(raw.size() - 4);
        io::write_file_atomic(dir / "intensity.bin", raw);
        CHECK_THROWS_AS(io::read_sequence(dir), SizeMismatch);
    }
    SUBCASE("flipped byte") {
        auto raw = io::read_file(dir / "intensity.bin");
        raw[17] = static_cast<char>(raw[17] ^ 0x40);
        io::write_file_atomic(dir / "intensity.bin", raw);
        CHECK_THROWS_AS(io::read_sequence(dir), ChecksumMismatch);
    }
    SUBCASE("future version") {
        const auto pos = manifest.find("version = 1");
        REQUIRE(pos != std::string::npos);
        manifest.replace(pos, 11, "version = 2");
        io::write_file_atomic(dir / "manifest.txt", manifest);
        CHECK_THROWS_AS(io::read_sequence(dir), UnsupportedVersion);
    }
    SUBCASE("garbage manifest") {
        io::write_file_atomic(dir / "manifest.txt", "this is not a manifest\n");
        CHECK_THROWS_AS(io::read_sequence(dir), CorruptManifest);
    }
    SUBCASE("missing dimension key") {
        const auto pos = manifest.find("rho = ");
        manifest.erase(pos, manifest.find('\n', pos) - pos + 1);
        io::write_file_atomic(dir / "manifest.txt", manifest);
        CHECK_THROWS_AS(io::read_sequence(dir), CorruptManifest);
    }
    SUBCASE("short air table") {
        auto air = io::read_file(dir / "air.csv");
        air.erase(air.rfind('\n', air.size() - 2) + 1);
        io::write_file_atomic(dir / "air.csv", air);
        CHECK_THROWS_AS(io::read_sequence(dir), SizeMismatch);
    }
}

TEST_CASE("surface round trip and validation") {
    std::mt19937_64 rng(2);
    Surface s(4, 7);
    for (auto& x : s.labels()) x = static_cast<Label>(rng() % 500);
    CHECK(io::parse_surface(io::format_surface(s)) == s);
    CHECK_THROWS_AS(io::parse_surface("i,j,s\n0,0,1\n0,2,1\n"), MalformedFile);
    CHECK_THROWS_AS(io::parse_surface("a,b,c\n0,0,1\n"), MalformedFile);
    CHECK_THROWS_AS(io::parse_surface("i,j,s\n0,0,1\n0,0,2\n"), MalformedFile);
    CHECK_THROWS_AS(io::parse_surface("i,j,s\n0,0,x\n"), MalformedFile);
}

TEST_CASE("params round trip is bit-exact") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.001, 10.0);
    for (int k = 0; k < 20; ++k) {
        EnergyParams p;
        std::vector<double> mu(11), sigma(11);
        for (auto& x : mu) x = u(rng);
        for (auto& x : sigma) x = u(rng);
        p.tmpl = TemplateModel(mu, sigma);
        p.tau = u(rng);
        p.alpha = 1 + static_cast<int>(rng() % 20);
        p.sigma_hat = u(rng);
        p.beta.resize(9);
        for (auto& x : p.beta) x = u(rng);
        const auto back = io::parse_params(io::format_params(p));
        CHECK(std::ranges::equal(back.tmpl.mu(), p.tmpl.mu()));
        CHECK(std::ranges::equal(back.tmpl.sigma(), p.tmpl.sigma()));
        CHECK(back.tau == p.tau);
        CHECK(back.alpha == p.alpha);
        CHECK(back.sigma_hat == p.sigma_hat);
        CHECK(back.beta == p.beta);
    }
    CHECK_THROWS_AS(io::parse_params("[template]\nmu = [1]\n"), MalformedFile);
}

TEST_CASE("evidence parsing") {
    const auto e = io::parse_evidence("kind,i,j,lo,hi\npin,0,1,5,5\nrange,2,3,4,9\n");
    REQUIRE(e.pins.size() == 1);
    CHECK(e.pins[0].s == 5);
    REQUIRE(e.ranges.size() == 1);
    CHECK(e.ranges[0].lo == 4);
    CHECK(e.ranges[0].hi == 9);
    CHECK_THROWS_AS(io::parse_evidence("kind,i,j,lo,hi\npin,0,1,5,6\n"), MalformedFile);
    CHECK_THROWS_AS(io::parse_evidence("kind,i,j,lo,hi\nhint,0,1,5,5\n"), MalformedFile);
}

TEST_CASE("synth config parsing") {
    const auto cfg = io::parse_synth_config("preset = noisy\nnoise_sigma = 0.3\nl = 4\n");
    CHECK(cfg.noise_sigma == 0.3);
    CHECK(cfg.dims.l == 4);
    CHECK(cfg.rough_harmonics == benchmark_suite(0)[1].second.rough_harmonics);
    CHECK_THROWS_AS(io::parse_synth_config("colour = red\n"), MalformedFile);
    CHECK_THROWS_AS(io::parse_synth_config("preset = mystery\n"), MalformedFile);
}

TEST_CASE("report_json") {
    const Surface gt(1, 2, std::vector<Label>{0, 0});
    const auto r = evaluate(Surface(1, 2, std::vector<Label>{0, 2}), gt);
    const auto j = nlohmann::json::parse(io::report_json(r));
    CHECK(j["mean_error"].get<double>() == doctest::Approx(1.0));
    CHECK(j["precision_at"]["1"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("atomic writes leave no temp files") {
    TempDir tmp;
    io::write_file_atomic(tmp.path / "a.txt", "hello");
    io::write_file_atomic(tmp.path / "a.txt", "world");
    CHECK(io::read_file(tmp.path / "a.txt") == "world");
    int n = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(tmp.path)) ++n;
    CHECK(n == 1);
    io::write_file_atomic(tmp.path / "made" / "b.txt", "x");
    CHECK(io::read_file(tmp.path / "made" / "b.txt") == "x");
    CHECK_THROWS_AS(io::write_file_atomic(tmp.path / "a.txt" / "x.txt", "x"), IoError);
    CHECK_THROWS_AS(io::read_file(tmp.path / "absent.txt"), MissingFile);
}
