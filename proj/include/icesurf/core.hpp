#pragma once
/**
 * Domain types shared by every stage of the surface reconstruction.
 *
 * Index conventions (zero-based everywhere):
 *   i in [0, l)    slice index along the flight path
 *   j in [0, phi)  column (direction-of-arrival bin) within a slice
 *   r in [0, rho)  row (range bin) within a column
 *
 * A surface label s_{i,j} is the row of the ice-bottom boundary in column j
 * of slice i, so 0 <= s_{i,j} <= rho - 1.
 */

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "icesurf/errors.hpp"

namespace icesurf {

using Cost = double;
using Label = int;

/// Hard-constraint sentinel. Finite + kInfinity == kInfinity.
inline constexpr Cost kInfinity = std::numeric_limits<Cost>::infinity();

/// Lower bound applied to template variances and the pairwise std.
inline constexpr double kVarianceFloor = 1e-3;

inline constexpr int kDefaultTemplateLength = 11;
inline constexpr double kDefaultTau = 10.0;

struct Dims {
    int l = 0;
    int phi = 0;
    int rho = 0;

    std::size_t columns() const { return static_cast<std::size_t>(l) * static_cast<std::size_t>(phi); }
    std::size_t voxels() const { return columns() * static_cast<std::size_t>(rho); }
    std::size_t column_index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(phi) + static_cast<std::size_t>(j);
    }
    bool operator==(const Dims&) const = default;
};

/// Per-slice "bottom bin": at column `column` the boundary lies at row >= `bound`.
struct BottomBin {
    int column = 0;
    Label bound = 0;
    bool operator==(const BottomBin&) const = default;
};

/**
 * A sequence of l topographic slices, each phi x rho, plus the ice-air
 * surface labels and the optional per-slice bottom bins.
 *
 * Intensities are stored column-contiguous: index ((i * phi) + j) * rho + r.
 * The constructor only checks that buffer sizes agree with the dimensions;
 * semantic checks live in validate_sequence().
 */
class TopoSequence {
public:
    TopoSequence() = default;
    TopoSequence(Dims dims, std::vector<float> intensity, std::vector<Label> air,
                 std::vector<std::optional<BottomBin>> bins);

    const Dims& dims() const { return dims_; }
    int l() const { return dims_.l; }
    int phi() const { return dims_.phi; }
    int rho() const { return dims_.rho; }

    float intensity(int i, int j, int r) const { return intensity_[dims_.column_index(i, j) * dims_.rho + r]; }
    std::span<const float> column(int i, int j) const {
        return {intensity_.data() + dims_.column_index(i, j) * dims_.rho, static_cast<std::size_t>(dims_.rho)};
    }
    Label air(int i, int j) const { return air_[dims_.column_index(i, j)]; }
    const std::optional<BottomBin>& bin(int i) const { return bins_[i]; }

    std::span<const float> intensity_data() const { return intensity_; }
    std::span<const Label> air_data() const { return air_; }
    std::span<const std::optional<BottomBin>> bins() const { return bins_; }

    bool operator==(const TopoSequence&) const = default;

private:
    Dims dims_;
    std::vector<float> intensity_;
    std::vector<Label> air_;
    std::vector<std::optional<BottomBin>> bins_;
};

/// l x phi grid of boundary row labels.
class Surface {
public:
    Surface() = default;
    Surface(int l, int phi, Label fill = 0);
    Surface(int l, int phi, std::vector<Label> labels);

    int l() const { return l_; }
    int phi() const { return phi_; }

    Label& at(int i, int j) { return labels_[static_cast<std::size_t>(i) * phi_ + j]; }
    Label at(int i, int j) const { return labels_[static_cast<std::size_t>(i) * phi_ + j]; }

    std::span<const Label> labels() const { return labels_; }
    std::span<Label> labels() { return labels_; }
    std::span<const Label> slice(int i) const {
        return {labels_.data() + static_cast<std::size_t>(i) * phi_, static_cast<std::size_t>(phi_)};
    }

    bool operator==(const Surface&) const = default;

private:
    int l_ = 0;
    int phi_ = 0;
    std::vector<Label> labels_;
};

/**
 * Vertical appearance profile of the boundary: per-offset mean and variance
 * for offsets p in [-(t-1)/2, (t-1)/2] around the boundary row. Variances
 * are floored at kVarianceFloor on construction.
 */
class TemplateModel {
public:
    TemplateModel() = default;
    TemplateModel(std::vector<double> mu, std::vector<double> sigma);

    int length() const { return static_cast<int>(mu_.size()); }
    int half_width() const { return (length() - 1) / 2; }
    std::span<const double> mu() const { return mu_; }
    std::span<const double> sigma() const { return sigma_; }

    bool operator==(const TemplateModel&) const = default;

private:
    std::vector<double> mu_;
    std::vector<double> sigma_;
};

/// Everything the energy needs besides the observed sequence.
struct EnergyParams {
    TemplateModel tmpl;
    double tau = kDefaultTau;        // air-margin threshold, rows
    int alpha = 1;                   // pairwise window: |s - s'| < alpha
    double sigma_hat = 1.0;          // pairwise Gaussian std, rows
    std::vector<double> beta;        // per-column smoothness weights, length phi

    bool operator==(const EnergyParams&) const = default;
};

/// Throws InvalidArgument when params are unusable for a sequence with `phi` columns.
void validate_params(const EnergyParams& params, int phi);

/// Convenience: constant beta vector of length phi.
std::vector<double> constant_beta(int phi, double value = 1.0);

struct Pin {
    int i = 0;
    int j = 0;
    Label s = 0;
    bool operator==(const Pin&) const = default;
};

struct RangeConstraint {
    int i = 0;
    int j = 0;
    Label lo = 0;
    Label hi = 0;
    bool operator==(const RangeConstraint&) const = default;
};

/// User-supplied hard evidence: pinned labels and allowed label ranges.
struct ExtraEvidence {
    std::vector<Pin> pins;
    std::vector<RangeConstraint> ranges;

    bool empty() const { return pins.empty() && ranges.empty(); }
    bool operator==(const ExtraEvidence&) const = default;
};

/// Throws InvalidArgument if any index is out of bounds or a range is inverted.
void validate_evidence(const ExtraEvidence& extra, const Dims& dims);

struct Violation {
    std::string rule;
    std::string where;
    std::string message() const { return rule + " at " + where; }
};

/// Reports every broken TopoSequence invariant; empty iff the sequence is valid.
std::vector<Violation> validate_sequence(const TopoSequence& seq);

struct LabelRange {
    Label lo = 0;
    Label hi = 0;
    bool operator==(const LabelRange&) const = default;
};

/**
 * Interval of labels at (i, j) that pass the air (strictly below) and
 * bottom-bin hard constraints. Throws EmptyFeasibleSet when lo > hi.
 */
LabelRange feasible_label_range(const TopoSequence& seq, const EnergyParams& params, int i, int j);

}  // namespace icesurf
