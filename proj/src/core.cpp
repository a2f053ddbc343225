#include "icesurf/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace icesurf {

namespace {

std::string at_ij(int i, int j) {
    std::ostringstream os;
    os << "(" << i << "," << j << ")";
    return os.str();
}

}  // namespace

TopoSequence::TopoSequence(Dims dims, std::vector<float> intensity, std::vector<Label> air,
                           std::vector<std::optional<BottomBin>> bins)
    : dims_(dims), intensity_(std::move(intensity)), air_(std::move(air)), bins_(std::move(bins)) {
    if (dims_.l < 0 || dims_.phi < 0 || dims_.rho < 0) {
        throw InvalidArgument("negative sequence dimension");
    }
    if (intensity_.size() != dims_.voxels()) {
        throw InvalidArgument("intensity buffer does not match l*phi*rho");
    }
    if (air_.size() != dims_.columns()) {
        throw InvalidArgument("air buffer does not match l*phi");
    }
    if (bins_.size() != static_cast<std::size_t>(dims_.l)) {
        throw InvalidArgument("bins buffer does not match l");
    }
}

Surface::Surface(int l, int phi, Label fill)
    : l_(l), phi_(phi), labels_(static_cast<std::size_t>(l) * static_cast<std::size_t>(phi), fill) {
    if (l < 0 || phi < 0) throw InvalidArgument("negative surface dimension");
}

Surface::Surface(int l, int phi, std::vector<Label> labels) : l_(l), phi_(phi), labels_(std::move(labels)) {
    if (l < 0 || phi < 0) throw InvalidArgument("negative surface dimension");
    if (labels_.size() != static_cast<std::size_t>(l) * static_cast<std::size_t>(phi)) {
        throw InvalidArgument("surface labels do not match l*phi");
    }
}

TemplateModel::TemplateModel(std::vector<double> mu, std::vector<double> sigma)
    : mu_(std::move(mu)), sigma_(std::move(sigma)) {
    if (mu_.empty() || mu_.size() % 2 == 0) {
        throw InvalidArgument("template length must be odd and >= 1");
    }
    if (sigma_.size() != mu_.size()) {
        throw InvalidArgument("template mean and variance lengths differ");
    }
    for (std::size_t p = 0; p < mu_.size(); ++p) {
        if (!std::isfinite(mu_[p]) || !std::isfinite(sigma_[p])) {
            throw InvalidArgument("template values must be finite");
        }
        sigma_[p] = std::max(sigma_[p], kVarianceFloor);
    }
}

std::vector<double> constant_beta(int phi, double value) {
    return std::vector<double>(static_cast<std::size_t>(std::max(phi, 0)), value);
}

void validate_params(const EnergyParams& params, int phi) {
    if (params.tmpl.length() < 1) throw InvalidArgument("template is empty");
    if (!(params.tau >= 0.0) || !std::isfinite(params.tau)) throw InvalidArgument("tau must be finite and >= 0");
    if (params.alpha < 1) throw InvalidArgument("alpha must be >= 1");
    if (!(params.sigma_hat > 0.0) || !std::isfinite(params.sigma_hat)) {
        throw InvalidArgument("sigma_hat must be finite and > 0");
    }
    if (params.beta.size() != static_cast<std::size_t>(phi)) {
        throw InvalidArgument("beta has " + std::to_string(params.beta.size()) + " entries, expected phi = " +
                              std::to_string(phi));
    }
    for (double b : params.beta) {
        if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("beta weights must be finite and > 0");
    }
}

void validate_evidence(const ExtraEvidence& extra, const Dims& dims) {
    auto in_grid = [&](int i, int j) { return i >= 0 && i < dims.l && j >= 0 && j < dims.phi; };
    auto in_rows = [&](Label s) { return s >= 0 && s < dims.rho; };
    for (const auto& p : extra.pins) {
        if (!in_grid(p.i, p.j) || !in_rows(p.s)) {
            throw InvalidArgument("pin out of bounds at " + at_ij(p.i, p.j));
        }
    }
    for (const auto& r : extra.ranges) {
        if (!in_grid(r.i, r.j) || !in_rows(r.lo) || !in_rows(r.hi)) {
            throw InvalidArgument("range constraint out of bounds at " + at_ij(r.i, r.j));
        }
        if (r.lo > r.hi) throw InvalidArgument("range constraint has lo > hi at " + at_ij(r.i, r.j));
    }
}

std::vector<Violation> validate_sequence(const TopoSequence& seq) {
    std::vector<Violation> out;
    const Dims& d = seq.dims();
    if (d.l < 1 || d.phi < 1 || d.rho < 1) {
        out.push_back({"dimensions must be >= 1", "dims"});
        return out;
    }
    for (int i = 0; i < d.l; ++i) {
        for (int j = 0; j < d.phi; ++j) {
            auto col = seq.column(i, j);
            for (int r = 0; r < d.rho; ++r) {
                if (!std::isfinite(col[r])) {
                    out.push_back({"non-finite intensity", "(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                                               std::to_string(r) + ")"});
                }
            }
            const Label a = seq.air(i, j);
            if (a < 0 || a > d.rho - 1) out.push_back({"out-of-range air label", at_ij(i, j)});
        }
        if (const auto& bin = seq.bin(i)) {
            if (bin->column < 0 || bin->column > d.phi - 1) {
                out.push_back({"out-of-range bin column", "slice " + std::to_string(i)});
            }
            if (bin->bound < 0 || bin->bound > d.rho - 1) {
                out.push_back({"out-of-range bin bound", "slice " + std::to_string(i)});
            }
        }
    }
    return out;
}

LabelRange feasible_label_range(const TopoSequence& seq, const EnergyParams& /*params*/, int i, int j) {
    if (i < 0 || i >= seq.l() || j < 0 || j >= seq.phi()) {
        throw InvalidArgument("feasible_label_range: index out of bounds at " + at_ij(i, j));
    }
    Label lo = seq.air(i, j) + 1;
    if (const auto& bin = seq.bin(i); bin && bin->column == j) lo = std::max(lo, bin->bound);
    const LabelRange range{lo, seq.rho() - 1};
    if (range.lo > range.hi) {
        throw EmptyFeasibleSet("no label lies below the air surface and bin bound at " + at_ij(i, j), Pixel{i, j});
    }
    return range;
}

}  // namespace icesurf
