#include "icesurf/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

namespace icesurf {

namespace {

// Two-pass sample statistics; variance is 0 with fewer than two samples.
struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

Moments moments(std::span<const double> xs) {
    Moments m;
    if (xs.empty()) return m;
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    if (xs.size() < 2) return m;
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.variance = ss / static_cast<double>(xs.size() - 1);
    return m;
}

}  // namespace

TemplateModel learn_template(std::span<const LabeledExample> labeled, int t) {
    if (t < 1 || t % 2 == 0) throw InvalidArgument("template length must be odd and >= 1");
    const int half = (t - 1) / 2;
    std::vector<std::vector<double>> samples(static_cast<std::size_t>(t));
    for (const auto& ex : labeled) {
        const auto& seq = ex.sequence;
        if (ex.truth.l() != seq.l() || ex.truth.phi() != seq.phi()) {
            throw DimMismatch("labeled surface does not match its sequence");
        }
        for (int i = 0; i < seq.l(); ++i) {
            for (int j = 0; j < seq.phi(); ++j) {
                const Label s = ex.truth.at(i, j);
                const auto col = seq.column(i, j);
                for (int k = 0; k < t; ++k) {
                    const int r = s + k - half;
                    if (r >= 0 && r < seq.rho()) samples[k].push_back(col[r]);
                }
            }
        }
    }
    std::vector<double> mu(static_cast<std::size_t>(t));
    std::vector<double> sigma(static_cast<std::size_t>(t));
    for (int k = 0; k < t; ++k) {
        if (samples[k].empty()) {
            throw InsufficientData("no in-range training samples for template offset " + std::to_string(k - half));
        }
        const Moments m = moments(samples[k]);
        mu[k] = m.mean;
        sigma[k] = std::max(m.variance, kVarianceFloor);
    }
    return TemplateModel(std::move(mu), std::move(sigma));
}

PairwiseEstimate learn_pairwise(std::span<const Surface> labeled, bool per_column) {
    if (labeled.empty()) throw InsufficientData("no labeled surfaces");
    const int phi = labeled.front().phi();
    std::vector<double> all;
    std::vector<std::vector<double>> by_column(static_cast<std::size_t>(phi));
    int max_abs = 0;
    for (const auto& surface : labeled) {
        if (surface.phi() != phi) throw DimMismatch("labeled surfaces have different widths");
        for (int i = 0; i < surface.l(); ++i) {
            for (int j = 0; j < phi; ++j) {
                if (j + 1 < phi) {
                    const int d = surface.at(i, j + 1) - surface.at(i, j);
                    all.push_back(d);
                    by_column[j].push_back(d);
                    by_column[j + 1].push_back(d);
                    max_abs = std::max(max_abs, std::abs(d));
                }
                if (i + 1 < surface.l()) {
                    const int d = surface.at(i + 1, j) - surface.at(i, j);
                    all.push_back(d);
                    by_column[j].push_back(d);
                    max_abs = std::max(max_abs, std::abs(d));
                }
            }
        }
    }
    if (all.empty()) throw InsufficientData("labeled surfaces contain no adjacent label pairs");

    PairwiseEstimate est;
    est.sigma_hat = std::max(std::sqrt(moments(all).variance), kVarianceFloor);
    est.alpha = max_abs + 1;
    est.beta.assign(static_cast<std::size_t>(phi), 1.0);
    if (per_column) {
        const double global = est.sigma_hat * est.sigma_hat;
        for (int j = 0; j < phi; ++j) {
            const double var = by_column[j].size() >= 2 ? moments(by_column[j]).variance : global;
            est.beta[j] = global / std::max(var, kVarianceFloor);
        }
        const double mean = std::accumulate(est.beta.begin(), est.beta.end(), 0.0) / phi;
        for (double& b : est.beta) b /= mean;
    }
    return est;
}

EnergyParams train(std::span<const LabeledExample> labeled, const TrainingOptions& options) {
    std::vector<Surface> surfaces;
    surfaces.reserve(labeled.size());
    for (const auto& ex : labeled) surfaces.push_back(ex.truth);
    PairwiseEstimate pw = learn_pairwise(surfaces, options.per_column_beta);
    EnergyParams params;
    params.tmpl = learn_template(labeled, options.template_length);
    params.tau = options.tau;
    params.alpha = pw.alpha;
    params.sigma_hat = pw.sigma_hat;
    params.beta = std::move(pw.beta);
    return params;
}

}  // namespace icesurf
