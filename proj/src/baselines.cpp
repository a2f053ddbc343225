#include "icesurf/baselines.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace icesurf {

PairwiseModel baseline_pairwise(const PairwiseModel& pairwise, BetaMode mode) {
    if (mode == BetaMode::kDynamic || pairwise.beta.empty()) return pairwise;
    const double mean =
        std::accumulate(pairwise.beta.begin(), pairwise.beta.end(), 0.0) / static_cast<double>(pairwise.beta.size());
    PairwiseModel fixed = pairwise;
    std::fill(fixed.beta.begin(), fixed.beta.end(), mean);
    return fixed;
}

std::vector<Label> viterbi_slice(const UnaryTable& unary, int i, const PairwiseModel& pairwise, BetaMode mode,
                                 KernelKind kernel_kind) {
    const int phi = unary.dims().phi;
    const int rho = unary.dims().rho;
    const PairwiseModel pw = baseline_pairwise(pairwise, mode);
    MessageKernel kernel(kernel_kind);

    std::vector<Cost> cost(unary.column(i, 0).begin(), unary.column(i, 0).end());
    std::vector<Cost> incoming(rho);
    std::vector<Label> backpointers(static_cast<std::size_t>(phi) * rho, -1);

    for (int j = 1; j < phi; ++j) {
        std::span<Label> bp(backpointers.data() + static_cast<std::size_t>(j) * rho, static_cast<std::size_t>(rho));
        kernel.compute(cost, EdgeTerm{pw.horizontal_beta(j - 1), pw.sigma_hat, pw.alpha}, incoming, bp);
        const auto u = unary.column(i, j);
        for (int s = 0; s < rho; ++s) cost[s] = incoming[s] + u[s];
    }

    const auto best = std::min_element(cost.begin(), cost.end());
    if (*best == kInfinity) {
        throw InfeasibleError("slice " + std::to_string(i) + " has no label path within the smoothness window",
                              Pixel{i, phi - 1});
    }
    std::vector<Label> path(static_cast<std::size_t>(phi));
    path[phi - 1] = static_cast<Label>(best - cost.begin());
    for (int j = phi - 1; j > 0; --j) {
        path[j - 1] = backpointers[static_cast<std::size_t>(j) * rho + path[j]];
    }
    return path;
}

Surface solve_independent(const GridMrf& mrf, BetaMode mode, KernelKind kernel) {
    const Dims& d = mrf.dims();
    Surface out(d.l, d.phi);
    for (int i = 0; i < d.l; ++i) {
        const auto path = viterbi_slice(mrf.unary, i, mrf.pairwise, mode, kernel);
        for (int j = 0; j < d.phi; ++j) out.at(i, j) = path[j];
    }
    return out;
}

Surface solve_independent(const TopoSequence& seq, const EnergyParams& params, const ExtraEvidence& extra,
                          BetaMode mode) {
    return solve_independent(build_mrf(seq, params, extra), mode);
}

}  // namespace icesurf
