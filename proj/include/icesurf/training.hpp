#pragma once
/**
 * Parameter estimation from labeled sequences.
 *
 * The template is the per-offset sample mean / variance of intensities
 * around the labeled boundary. The smoothness parameters come from the
 * label differences between 4-neighbours (within and across slices).
 */

#include <span>
#include <vector>

#include "icesurf/core.hpp"

namespace icesurf {

struct LabeledExample {
    const TopoSequence& sequence;
    const Surface& truth;
};

/// Throws InsufficientData when some template offset never falls inside a column.
TemplateModel learn_template(std::span<const LabeledExample> labeled, int t = kDefaultTemplateLength);

struct PairwiseEstimate {
    int alpha = 1;
    double sigma_hat = kVarianceFloor;
    std::vector<double> beta;
};

/**
 * sigma_hat: sample std of all neighbour differences (floored).
 * alpha: largest observed |difference| + 1, so every training surface stays feasible.
 * beta_j: sigma_hat^2 / var_j over differences touching column j, rescaled to mean 1;
 *         all ones when `per_column` is false.
 */
PairwiseEstimate learn_pairwise(std::span<const Surface> labeled, bool per_column = true);

struct TrainingOptions {
    int template_length = kDefaultTemplateLength;
    double tau = kDefaultTau;
    bool per_column_beta = true;
};

EnergyParams train(std::span<const LabeledExample> labeled, const TrainingOptions& options = {});

}  // namespace icesurf
