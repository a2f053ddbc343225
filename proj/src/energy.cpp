#include "icesurf/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace icesurf {

Cost template_cost(std::span<const float> column, const TemplateModel& tmpl, Label s) {
    const int rho = static_cast<int>(column.size());
    const int half = tmpl.half_width();
    const auto mu = tmpl.mu();
    const auto sigma = tmpl.sigma();
    Cost sum = 0.0;
    for (int k = 0; k < tmpl.length(); ++k) {
        const int r = s + k - half;
        if (r < 0 || r >= rho) continue;
        const double diff = static_cast<double>(column[r]) - mu[k];
        sum += diff * diff / sigma[k];
    }
    return sum;
}

Cost air_cost(Label s, Label a, double tau) {
    const double gap = static_cast<double>(s) - static_cast<double>(a);
    if (gap <= 0.0) return kInfinity;
    if (gap > tau) return 0.0;
    return tau - gap;
}

Cost bin_cost(Label s, Label bound) { return s < bound ? kInfinity : 0.0; }

Cost pairwise_cost(Label s, Label s_hat, double beta, double sigma_hat, int alpha) {
    const int d = s - s_hat;
    if (std::abs(d) >= alpha) return kInfinity;
    const double norm = std::log(sigma_hat * std::sqrt(2.0 * std::numbers::pi));
    return beta * (static_cast<double>(d) * d / (2.0 * sigma_hat * sigma_hat) + norm);
}

PairwiseModel PairwiseModel::from(const EnergyParams& params) {
    return PairwiseModel{params.beta, params.sigma_hat, params.alpha};
}

UnaryTable UnaryTable::slice(int i) const {
    UnaryTable out(Dims{1, dims_.phi, dims_.rho});
    for (int j = 0; j < dims_.phi; ++j) {
        auto src = column(i, j);
        std::copy(src.begin(), src.end(), out.column(0, j).begin());
    }
    return out;
}

namespace {

void require_valid(const TopoSequence& seq, const EnergyParams& params, const ExtraEvidence& extra) {
    if (auto violations = validate_sequence(seq); !violations.empty()) {
        throw InvalidArgument("invalid sequence: " + violations.front().message());
    }
    validate_params(params, seq.phi());
    validate_evidence(extra, seq.dims());
}

}  // namespace

UnaryTable build_unary(const TopoSequence& seq, const EnergyParams& params, const ExtraEvidence& extra) {
    require_valid(seq, params, extra);
    const Dims& d = seq.dims();
    UnaryTable table(d);
    for (int i = 0; i < d.l; ++i) {
        const auto& bin = seq.bin(i);
        for (int j = 0; j < d.phi; ++j) {
            auto out = table.column(i, j);
            auto intensity = seq.column(i, j);
            const Label a = seq.air(i, j);
            const bool has_bin = bin && bin->column == j;
            for (Label s = 0; s < d.rho; ++s) {
                Cost c = air_cost(s, a, params.tau);
                if (has_bin) c += bin_cost(s, bin->bound);
                if (c != kInfinity) c += template_cost(intensity, params.tmpl, s);
                out[s] = c;
            }
        }
    }
    for (const auto& pin : extra.pins) {
        auto out = table.column(pin.i, pin.j);
        for (Label s = 0; s < d.rho; ++s) {
            if (s != pin.s) out[s] = kInfinity;
        }
    }
    for (const auto& range : extra.ranges) {
        auto out = table.column(range.i, range.j);
        for (Label s = 0; s < d.rho; ++s) {
            if (s < range.lo || s > range.hi) out[s] = kInfinity;
        }
    }
    for (int i = 0; i < d.l; ++i) {
        for (int j = 0; j < d.phi; ++j) {
            auto col = table.column(i, j);
            if (std::all_of(col.begin(), col.end(), [](Cost c) { return c == kInfinity; })) {
                throw EmptyFeasibleSet("every label is excluded at (" + std::to_string(i) + "," + std::to_string(j) +
                                           ")",
                                       Pixel{i, j});
            }
        }
    }
    return table;
}

GridMrf build_mrf(const TopoSequence& seq, const EnergyParams& params, const ExtraEvidence& extra) {
    return GridMrf{build_unary(seq, params, extra), PairwiseModel::from(params)};
}

Cost total_energy(const Surface& surface, const GridMrf& mrf) {
    const Dims& d = mrf.dims();
    if (surface.l() != d.l || surface.phi() != d.phi) throw DimMismatch("surface does not match the energy grid");
    Cost e = 0.0;
    for (int i = 0; i < d.l; ++i) {
        for (int j = 0; j < d.phi; ++j) {
            const Label s = surface.at(i, j);
            if (s < 0 || s >= d.rho) throw InvalidArgument("surface label out of range");
            e += mrf.unary.at(i, j, s);
            if (j + 1 < d.phi) e += mrf.pairwise.cost(s, surface.at(i, j + 1), mrf.pairwise.horizontal_beta(j));
            if (i + 1 < d.l) e += mrf.pairwise.cost(s, surface.at(i + 1, j), mrf.pairwise.vertical_beta(j));
        }
    }
    return e;
}

Cost total_energy(const Surface& surface, const TopoSequence& seq, const EnergyParams& params,
                  const ExtraEvidence& extra) {
    require_valid(seq, params, extra);
    const Dims& d = seq.dims();
    if (surface.l() != d.l || surface.phi() != d.phi) throw DimMismatch("surface does not match the sequence");
    const PairwiseModel pairwise = PairwiseModel::from(params);
    Cost e = 0.0;
    for (int i = 0; i < d.l; ++i) {
        const auto& bin = seq.bin(i);
        for (int j = 0; j < d.phi; ++j) {
            const Label s = surface.at(i, j);
            if (s < 0 || s >= d.rho) throw InvalidArgument("surface label out of range");
            e += air_cost(s, seq.air(i, j), params.tau);
            if (bin && bin->column == j) e += bin_cost(s, bin->bound);
            e += template_cost(seq.column(i, j), params.tmpl, s);
            if (j + 1 < d.phi) e += pairwise.cost(s, surface.at(i, j + 1), pairwise.horizontal_beta(j));
            if (i + 1 < d.l) e += pairwise.cost(s, surface.at(i + 1, j), pairwise.vertical_beta(j));
        }
    }
    for (const auto& pin : extra.pins) {
        if (surface.at(pin.i, pin.j) != pin.s) return kInfinity;
    }
    for (const auto& range : extra.ranges) {
        const Label s = surface.at(range.i, range.j);
        if (s < range.lo || s > range.hi) return kInfinity;
    }
    return e;
}

}  // namespace icesurf
