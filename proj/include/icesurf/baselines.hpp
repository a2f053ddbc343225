#pragma once
/**
 * Per-slice exact dynamic programming baselines. Each slice is solved as an
 * independent chain over its phi columns; edges between slices are ignored.
 *
 *   kFixed    one smoothness weight for every column (the mean of beta)
 *   kDynamic  the per-column weights beta[j]
 */

#include <vector>

#include "icesurf/energy.hpp"
#include "icesurf/msgpass.hpp"

namespace icesurf {

enum class BetaMode { kFixed, kDynamic };

/// Pairwise model actually used by the baseline in the given mode.
PairwiseModel baseline_pairwise(const PairwiseModel& pairwise, BetaMode mode);

/// Exact chain optimum for slice `i` of `unary`. Throws InfeasibleError if no path fits the window.
std::vector<Label> viterbi_slice(const UnaryTable& unary, int i, const PairwiseModel& pairwise, BetaMode mode,
                                 KernelKind kernel = KernelKind::kFast);

Surface solve_independent(const GridMrf& mrf, BetaMode mode, KernelKind kernel = KernelKind::kFast);
Surface solve_independent(const TopoSequence& seq, const EnergyParams& params, const ExtraEvidence& extra,
                          BetaMode mode);

}  // namespace icesurf
