#pragma once
/**
 * Sequential tree-reweighted message passing on the l x phi grid.
 *
 * Nodes are visited in row-major order (i, then j). One iteration is a
 * forward sweep that sends messages to the right and lower neighbours,
 * followed by a backward sweep that sends them to the left and upper
 * neighbours. A node with n_in earlier and n_out later neighbours lies on
 * max(n_in, n_out) monotonic chains and its unary is split evenly among
 * them. The dual bound is evaluated exactly by dynamic programming over
 * one such chain decomposition of the current reparameterisation.
 */

#include <optional>
#include <vector>

#include "icesurf/energy.hpp"
#include "icesurf/msgpass.hpp"

namespace icesurf {

/// How decode() scores a pixel given its already-labelled left/upper neighbours.
enum class DecodeRule {
    /// unary + pairwise to fixed left/up labels + messages from right/down (exact on chains)
    kForwardMessages,
    /// unary + pairwise to fixed left/up labels + messages from all four neighbours
    kAllMessages,
};

struct TrwConfig {
    int max_iterations = 0;      // 0 means phi
    double tolerance = 1e-6;     // relative bound improvement below which we stop; <= 0 disables
    KernelKind kernel = KernelKind::kFast;
    DecodeRule decode = DecodeRule::kForwardMessages;
};

struct TrwResult {
    Surface surface;
    Cost energy = kInfinity;
    std::vector<Cost> bound_trace;
    int iterations = 0;
};

class TrwSolver {
public:
    /// Keeps a reference to `mrf`; it must outlive the solver.
    explicit TrwSolver(const GridMrf& mrf, KernelKind kernel = KernelKind::kFast);

    /// One forward and one backward sweep; appends the new bound to the trace.
    void iterate();

    /// Dual bound of the current messages; <= the minimum energy.
    Cost lower_bound();

    /// Row-major greedy labelling. Throws InfeasibleError at the first pixel with no finite score.
    Surface decode(DecodeRule rule = DecodeRule::kForwardMessages) const;

    int iterations() const { return iterations_; }
    const std::vector<Cost>& bound_trace() const { return bound_trace_; }

    /// Incoming message at node (i, j) from the given side.
    enum Side { kFromLeft = 0, kFromRight = 1, kFromUp = 2, kFromDown = 3 };
    std::span<const Cost> message(Side side, int i, int j) const;

private:
    struct Chain {
        std::vector<int> nodes;  // increasing row-major node indices
    };

    std::size_t node(int i, int j) const { return static_cast<std::size_t>(i) * phi_ + j; }
    std::span<Cost> msg(Side side, std::size_t n) {
        return {messages_[side].data() + n * rho_, static_cast<std::size_t>(rho_)};
    }
    std::span<const Cost> msg(Side side, std::size_t n) const {
        return {messages_[side].data() + n * rho_, static_cast<std::size_t>(rho_)};
    }

    void belief(int i, int j, std::span<Cost> out) const;
    void send(int i, int j, std::span<const Cost> belief, double gamma, Side back_side, Side target_side,
              std::size_t target, double beta);
    void build_chains();
    Cost chain_minimum(const Chain& chain);

    const GridMrf& mrf_;
    int l_;
    int phi_;
    int rho_;
    MessageKernel kernel_;
    std::vector<Cost> messages_[4];
    std::vector<double> gamma_;
    std::vector<Chain> chains_;
    std::vector<Cost> belief_;
    std::vector<Cost> scratch_;
    std::vector<Cost> scratch2_;
    std::vector<Cost> dp_;
    int iterations_ = 0;
    std::vector<Cost> bound_trace_;
};

TrwResult trw_infer(const GridMrf& mrf, const TrwConfig& cfg = {});
TrwResult trw_infer(const TopoSequence& seq, const EnergyParams& params, const ExtraEvidence& extra = {},
                    const TrwConfig& cfg = {});

}  // namespace icesurf
