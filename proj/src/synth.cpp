#include "icesurf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace icesurf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Harmonic {
    double amplitude;
    double freq_i;
    double freq_j;
    double phase;

    double value(double u, double v) const { return amplitude * std::cos(kTwoPi * (freq_i * u + freq_j * v) + phase); }
};

std::vector<Harmonic> draw_harmonics(std::mt19937_64& rng, int count, double amp_lo, double amp_hi, int max_freq) {
    std::uniform_real_distribution<double> amp(amp_lo, amp_hi);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    std::uniform_int_distribution<int> freq(0, std::max(max_freq, 1));
    std::vector<Harmonic> out;
    for (int k = 0; k < count; ++k) {
        int fi = freq(rng);
        int fj = freq(rng);
        if (fi == 0 && fj == 0) fj = 1;
        out.push_back({amp(rng), static_cast<double>(fi), static_cast<double>(fj), phase(rng)});
    }
    return out;
}

double sum_amplitude(const std::vector<Harmonic>& hs) {
    double a = 0.0;
    for (const auto& h : hs) a += std::abs(h.amplitude);
    return a;
}

// Largest per-step change along i and along j of sum(h) over the integer grid.
std::pair<double, double> slope_bounds(const std::vector<Harmonic>& hs, int l, int phi) {
    double di = 0.0;
    double dj = 0.0;
    for (const auto& h : hs) {
        di += std::abs(h.amplitude) * kTwoPi * h.freq_i / l;
        dj += std::abs(h.amplitude) * kTwoPi * h.freq_j / phi;
    }
    return {di, dj};
}

// 0 at the slice edges, 1 in the middle.
double roughness_profile(int j, int phi) { return 0.5 * (1.0 - std::cos(kTwoPi * (j + 0.5) / phi)); }

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, const std::string& label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(master ^ splitmix64(h));
}

TemplateModel default_render_template() {
    // Dyadic values so float32 rendering is exact.
    return TemplateModel({0.125, 0.125, 0.25, 0.25, 0.5, 1.0, 0.75, 0.5, 0.25, 0.125, 0.0},
                         std::vector<double>(11, 1.0));
}

EnergyParams generation_params(const SynthConfig& cfg) {
    EnergyParams p;
    const auto mu = cfg.render_template.mu();
    p.tmpl = TemplateModel(std::vector<double>(mu.begin(), mu.end()),
                           std::vector<double>(mu.size(), cfg.noise_sigma * cfg.noise_sigma));
    p.tau = cfg.tau;
    p.alpha = cfg.alpha;
    p.sigma_hat = cfg.sigma_hat;
    p.beta = constant_beta(cfg.dims.phi);
    return p;
}

SynthResult generate(const SynthConfig& cfg) {
    const Dims d = cfg.dims;
    if (d.l < 1 || d.phi < 1 || d.rho < 1) throw ConfigInfeasible("dimensions must be >= 1");
    if (cfg.alpha < 1) throw ConfigInfeasible("alpha must be >= 1");
    if (cfg.air_margin < cfg.tau + 1) throw ConfigInfeasible("air margin must be at least tau + 1 rows");
    if (cfg.noise_sigma < 0 || cfg.amplitude_min < 0 || cfg.amplitude_max < cfg.amplitude_min ||
        cfg.rough_amplitude < 0 || cfg.air_amplitude < 0 || cfg.bin_slack < 0) {
        throw ConfigInfeasible("negative or inverted amplitude / noise settings");
    }

    std::mt19937_64 surface_rng(derive_seed(cfg.seed, "surface"));
    std::mt19937_64 rough_rng(derive_seed(cfg.seed, "roughness"));
    std::mt19937_64 air_rng(derive_seed(cfg.seed, "air"));
    std::mt19937_64 bin_rng(derive_seed(cfg.seed, "bins"));
    std::mt19937_64 noise_rng(derive_seed(cfg.seed, "noise"));

    auto smooth = draw_harmonics(surface_rng, cfg.harmonics, cfg.amplitude_min, cfg.amplitude_max, cfg.max_frequency);
    auto rough = draw_harmonics(rough_rng, cfg.rough_harmonics, cfg.rough_amplitude, cfg.rough_amplitude,
                                cfg.rough_frequency);

    // Rescale so rounded neighbours stay strictly inside the window:
    // |round(x) - round(y)| <= |x - y| + 1 <= alpha - 1.
    auto [si, sj] = slope_bounds(smooth, d.l, d.phi);
    auto [ri, rj] = slope_bounds(rough, d.l, d.phi);
    const double rough_total = sum_amplitude(rough);
    const double profile_slope = std::numbers::pi / std::max(d.phi, 1);  // max |R(j+1) - R(j)|
    const double slope = std::max(si + ri, sj + rj + profile_slope * rough_total);
    const double allowed = std::max(0.0, static_cast<double>(cfg.alpha) - 2.0);
    if (slope > allowed) {
        const double scale = slope > 0.0 ? allowed / slope : 0.0;
        for (auto& h : smooth) h.amplitude *= scale;
        for (auto& h : rough) h.amplitude *= scale;
    }
    const double total = sum_amplitude(smooth) + sum_amplitude(rough);

    const int half = cfg.render_template.half_width();
    const double lo_base = total + cfg.air_margin + 2.0 * cfg.air_amplitude + 1.0;
    const double hi_base = (d.rho - 1 - half) - total;
    if (lo_base > hi_base) {
        throw ConfigInfeasible("rho = " + std::to_string(d.rho) + " cannot host the surface amplitude and air margin");
    }
    const double base = 0.5 * (lo_base + hi_base);

    Surface truth(d.l, d.phi);
    for (int i = 0; i < d.l; ++i) {
        for (int j = 0; j < d.phi; ++j) {
            const double u = static_cast<double>(i) / d.l;
            const double v = static_cast<double>(j) / d.phi;
            double s = base;
            for (const auto& h : smooth) s += h.value(u, v);
            double r = 0.0;
            for (const auto& h : rough) r += h.value(u, v);
            s += roughness_profile(j, d.phi) * r;
            truth.at(i, j) = std::clamp(static_cast<Label>(std::lround(s)), 0, d.rho - 1);
        }
    }

    std::uniform_real_distribution<double> air_phase(0.0, kTwoPi);
    const double air_ph = air_phase(air_rng);
    const double air_base = lo_base - total - cfg.air_margin - cfg.air_amplitude - 1.0;
    std::vector<Label> air(d.columns());
    for (int i = 0; i < d.l; ++i) {
        for (int j = 0; j < d.phi; ++j) {
            const double u = static_cast<double>(i) / d.l;
            const double v = static_cast<double>(j) / d.phi;
            const double a = air_base + cfg.air_amplitude * std::cos(kTwoPi * (u + 0.5 * v) + air_ph);
            Label label = static_cast<Label>(std::floor(a));
            label = std::min(label, truth.at(i, j) - cfg.air_margin);
            air[d.column_index(i, j)] = std::max(label, 0);
        }
    }

    std::vector<std::optional<BottomBin>> bins(static_cast<std::size_t>(d.l));
    std::uniform_int_distribution<int> bin_column(0, d.phi - 1);
    for (int i = 0; i < d.l; ++i) {
        const int j = bin_column(bin_rng);
        bins[i] = BottomBin{j, std::max(0, truth.at(i, j) - cfg.bin_slack)};
    }

    std::vector<float> intensity(d.voxels(), 0.0f);
    const auto mu = cfg.render_template.mu();
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int i = 0; i < d.l; ++i) {
        for (int j = 0; j < d.phi; ++j) {
            float* col = intensity.data() + d.column_index(i, j) * d.rho;
            const Label a = air[d.column_index(i, j)];
            col[a] += 1.0f;
            if (a > 0) col[a - 1] += 0.5f;
            if (a + 1 < d.rho) col[a + 1] += 0.5f;
            const Label s = truth.at(i, j);
            for (int k = 0; k < cfg.render_template.length(); ++k) {
                const int r = s + k - half;
                if (r >= 0 && r < d.rho) col[r] += static_cast<float>(mu[k]);
            }
            if (cfg.noise_sigma > 0.0) {
                for (int r = 0; r < d.rho; ++r) col[r] += static_cast<float>(cfg.noise_sigma * noise(noise_rng));
            }
        }
    }

    return SynthResult{TopoSequence(d, std::move(intensity), std::move(air), std::move(bins)), std::move(truth)};
}

std::vector<std::pair<std::string, SynthConfig>> benchmark_suite(std::uint64_t seed) {
    SynthConfig easy;
    easy.seed = seed;
    easy.noise_sigma = 0.1;

    SynthConfig noisy = easy;
    noisy.noise_sigma = 0.45;
    noisy.rough_harmonics = 3;
    noisy.rough_amplitude = 3.0;

    SynthConfig rough = easy;
    rough.noise_sigma = 0.2;
    rough.harmonics = 6;
    rough.amplitude_min = 4.0;
    rough.amplitude_max = 10.0;
    rough.max_frequency = 4;
    rough.rough_harmonics = 4;
    rough.rough_amplitude = 4.0;
    rough.alpha = 9;

    return {{"easy", easy}, {"noisy", noisy}, {"rough", rough}};
}

}  // namespace icesurf
