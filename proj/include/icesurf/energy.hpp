#pragma once
/**
 * Cost terms of the surface energy and total-energy evaluation.
 *
 *   E(S) = sum_{i,j} unary(i, j, s_{i,j}) + sum_{4-neighbour edges} pairwise(s, s')
 *
 * unary = template + air + bin (+ hard extra evidence). Every edge of the
 * l x phi grid is counted once. A horizontal edge (i,j)-(i,j+1) and a
 * vertical edge (i,j)-(i+1,j) both use the weight beta[j].
 */

#include <span>
#include <vector>

#include "icesurf/core.hpp"

namespace icesurf {

/// Sum over template offsets of (I(s+p) - mu_p)^2 / sigma_p; offsets outside the column contribute 0.
Cost template_cost(std::span<const float> column, const TemplateModel& tmpl, Label s);

/// Infinite at or above the air surface, linear ramp within tau rows below it, zero further down.
Cost air_cost(Label s, Label a, double tau);

Cost bin_cost(Label s, Label bound);

/// beta * (-ln N(s - s_hat; 0, sigma_hat)) inside the window |s - s_hat| < alpha, infinite outside.
Cost pairwise_cost(Label s, Label s_hat, double beta, double sigma_hat, int alpha);

/// Smoothness term parameters as consumed by the solvers.
struct PairwiseModel {
    std::vector<double> beta;
    double sigma_hat = 1.0;
    int alpha = 1;

    static PairwiseModel from(const EnergyParams& params);

    /// Weight of the edge (i, j)-(i, j+1).
    double horizontal_beta(int j) const { return beta[j]; }
    /// Weight of the edge (i, j)-(i+1, j).
    double vertical_beta(int j) const { return beta[j]; }

    Cost cost(Label s, Label s_hat, double edge_beta) const {
        return pairwise_cost(s, s_hat, edge_beta, sigma_hat, alpha);
    }
};

/// l x phi x rho table of unary costs, column-contiguous like TopoSequence.
class UnaryTable {
public:
    UnaryTable() = default;
    explicit UnaryTable(Dims dims) : dims_(dims), costs_(dims.voxels(), 0.0) {}

    const Dims& dims() const { return dims_; }

    Cost at(int i, int j, Label s) const { return costs_[dims_.column_index(i, j) * dims_.rho + s]; }
    Cost& at(int i, int j, Label s) { return costs_[dims_.column_index(i, j) * dims_.rho + s]; }

    std::span<const Cost> column(int i, int j) const {
        return {costs_.data() + dims_.column_index(i, j) * dims_.rho, static_cast<std::size_t>(dims_.rho)};
    }
    std::span<Cost> column(int i, int j) {
        return {costs_.data() + dims_.column_index(i, j) * dims_.rho, static_cast<std::size_t>(dims_.rho)};
    }

    /// Rows i..i of the table as a standalone 1 x phi x rho table.
    UnaryTable slice(int i) const;

private:
    Dims dims_;
    std::vector<Cost> costs_;
};

/// A fully specified grid MRF: what every solver consumes.
struct GridMrf {
    UnaryTable unary;
    PairwiseModel pairwise;

    const Dims& dims() const { return unary.dims(); }
};

/**
 * Builds the unary table. Validates the sequence, params and evidence first
 * (InvalidArgument on failure) and throws EmptyFeasibleSet naming the first
 * column whose labels are all infinite.
 */
UnaryTable build_unary(const TopoSequence& seq, const EnergyParams& params, const ExtraEvidence& extra = {});

GridMrf build_mrf(const TopoSequence& seq, const EnergyParams& params, const ExtraEvidence& extra = {});

/// Energy of a labeling; +inf when any term is infinite.
Cost total_energy(const Surface& surface, const GridMrf& mrf);
Cost total_energy(const Surface& surface, const TopoSequence& seq, const EnergyParams& params,
                  const ExtraEvidence& extra = {});

}  // namespace icesurf
