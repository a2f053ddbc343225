#pragma once
/**
 * Deterministic synthetic topographic sequences with known ground truth.
 *
 * The bottom surface is a sum of low-frequency 2D cosine harmonics, plus an
 * optional band of rougher harmonics whose amplitude peaks in the middle
 * columns of each slice. Amplitudes are rescaled so that neighbouring labels
 * always differ by less than `alpha`. The air surface is a gentle cosine
 * kept at least `air_margin` rows above the bottom. Each column renders the
 * template mean profile centred on the true label and a bright line at the
 * air label, then adds i.i.d. Gaussian noise.
 */

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "icesurf/core.hpp"

namespace icesurf {

/// t = 11 render profile: bright reflector at the boundary, fading below it.
TemplateModel default_render_template();

struct SynthConfig {
    Dims dims{32, 32, 128};
    std::uint64_t seed = 0;
    double noise_sigma = 0.05;

    int harmonics = 3;               // smooth cosine terms
    double amplitude_min = 2.0;      // rows
    double amplitude_max = 6.0;      // rows
    int max_frequency = 2;           // cycles over the grid, per axis

    int rough_harmonics = 0;         // extra terms scaled by the column roughness profile
    double rough_amplitude = 0.0;    // rows, per rough term
    int rough_frequency = 6;

    TemplateModel render_template = default_render_template();
    double tau = kDefaultTau;
    int air_margin = 16;             // rows between air and bottom, must exceed tau
    double air_amplitude = 2.0;      // rows
    int bin_slack = 3;

    int alpha = 6;                   // neighbouring labels differ by < alpha
    double sigma_hat = 1.5;          // pairwise std used by generation_params

    bool operator==(const SynthConfig&) const = default;
};

struct SynthResult {
    TopoSequence sequence;
    Surface truth;
};

/// Throws ConfigInfeasible when the dimensions cannot host the margins and amplitudes.
SynthResult generate(const SynthConfig& cfg);

/// Energy parameters that match the generator: render template with noise variance, constant beta.
EnergyParams generation_params(const SynthConfig& cfg);

/// The fixed "easy", "noisy", "rough" suite at 32 x 32 x 128.
std::vector<std::pair<std::string, SynthConfig>> benchmark_suite(std::uint64_t seed);

/// A 64-bit stream seed derived from a master seed and a fixed label.
std::uint64_t derive_seed(std::uint64_t master, const std::string& label);

}  // namespace icesurf
