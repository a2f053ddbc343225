#include "icesurf/trw.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace icesurf {

namespace {

std::string pixel_name(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

Cost subtract_min(std::span<Cost> v) {
    const Cost lo = *std::min_element(v.begin(), v.end());
    if (lo == kInfinity) return lo;
    for (Cost& c : v) c -= lo;
    return lo;
}

}  // namespace

TrwSolver::TrwSolver(const GridMrf& mrf, KernelKind kernel)
    : mrf_(mrf), l_(mrf.dims().l), phi_(mrf.dims().phi), rho_(mrf.dims().rho), kernel_(kernel) {
    if (l_ < 1 || phi_ < 1 || rho_ < 1) throw InvalidArgument("TRW needs a non-empty grid");
    if (mrf.pairwise.beta.size() != static_cast<std::size_t>(phi_)) {
        throw InvalidArgument("beta length does not match phi");
    }
    for (auto& m : messages_) m.assign(mrf.dims().voxels(), 0.0);
    gamma_.resize(mrf.dims().columns());
    for (int i = 0; i < l_; ++i) {
        for (int j = 0; j < phi_; ++j) {
            const int in = (j > 0) + (i > 0);
            const int out = (j + 1 < phi_) + (i + 1 < l_);
            const int chains = std::max(in, out);
            gamma_[node(i, j)] = chains > 0 ? 1.0 / chains : 1.0;
        }
    }
    belief_.resize(rho_);
    scratch_.resize(rho_);
    scratch2_.resize(rho_);
    dp_.resize(rho_);
    build_chains();
}

std::span<const Cost> TrwSolver::message(Side side, int i, int j) const { return msg(side, node(i, j)); }

void TrwSolver::belief(int i, int j, std::span<Cost> out) const {
    const auto unary = mrf_.unary.column(i, j);
    std::copy(unary.begin(), unary.end(), out.begin());
    const std::size_t n = node(i, j);
    auto add = [&](Side side) {
        const auto m = msg(side, n);
        for (int s = 0; s < rho_; ++s) out[s] += m[s];
    };
    if (j > 0) add(kFromLeft);
    if (j + 1 < phi_) add(kFromRight);
    if (i > 0) add(kFromUp);
    if (i + 1 < l_) add(kFromDown);
}

void TrwSolver::send(int i, int j, std::span<const Cost> b, double gamma, Side back_side, Side target_side,
                     std::size_t target, double beta) {
    const auto back = msg(back_side, node(i, j));
    for (int s = 0; s < rho_; ++s) {
        scratch_[s] = b[s] == kInfinity ? kInfinity : gamma * b[s] - back[s];
    }
    auto out = msg(target_side, target);
    kernel_.compute(scratch_, EdgeTerm{beta, mrf_.pairwise.sigma_hat, mrf_.pairwise.alpha}, out);
    if (subtract_min(out) == kInfinity) {
        throw InfeasibleError("no feasible label remains at " + pixel_name(i, j), Pixel{i, j});
    }
}

void TrwSolver::iterate() {
    const auto& pw = mrf_.pairwise;
    for (int i = 0; i < l_; ++i) {
        for (int j = 0; j < phi_; ++j) {
            const std::size_t n = node(i, j);
            belief(i, j, belief_);
            if (j + 1 < phi_) send(i, j, belief_, gamma_[n], kFromRight, kFromLeft, node(i, j + 1), pw.horizontal_beta(j));
            if (i + 1 < l_) send(i, j, belief_, gamma_[n], kFromDown, kFromUp, node(i + 1, j), pw.vertical_beta(j));
        }
    }
    for (int i = l_ - 1; i >= 0; --i) {
        for (int j = phi_ - 1; j >= 0; --j) {
            const std::size_t n = node(i, j);
            belief(i, j, belief_);
            if (j > 0) send(i, j, belief_, gamma_[n], kFromLeft, kFromRight, node(i, j - 1), pw.horizontal_beta(j - 1));
            if (i > 0) send(i, j, belief_, gamma_[n], kFromUp, kFromDown, node(i - 1, j), pw.vertical_beta(j));
        }
    }
    ++iterations_;
    bound_trace_.push_back(lower_bound());
}

// Pairs incoming with outgoing edges at every node: left->right, up->down,
// then any leftover incoming edge with the leftover outgoing one. Chains are
// the resulting maximal edge paths, so each node sits on max(n_in, n_out) of them.
void TrwSolver::build_chains() {
    const std::size_t count = mrf_.dims().columns();
    if (count == 1) {
        chains_.push_back(Chain{{0}});
        return;
    }
    // Forward edges are keyed by their tail node: 0 = right, 1 = down.
    auto edge_id = [](std::size_t tail, int dir) { return tail * 2 + static_cast<std::size_t>(dir); };
    std::vector<std::ptrdiff_t> successor(count * 2, -1);
    std::vector<bool> has_predecessor(count * 2, false);
    auto exists = [&](std::size_t tail, int dir) {
        const int i = static_cast<int>(tail / phi_);
        const int j = static_cast<int>(tail % phi_);
        return dir == 0 ? j + 1 < phi_ : i + 1 < l_;
    };
    auto link = [&](std::size_t from, std::size_t to) {
        successor[from] = static_cast<std::ptrdiff_t>(to);
        has_predecessor[to] = true;
    };
    for (int i = 0; i < l_; ++i) {
        for (int j = 0; j < phi_; ++j) {
            const std::size_t n = node(i, j);
            std::optional<std::size_t> in_left = j > 0 ? std::optional(edge_id(node(i, j - 1), 0)) : std::nullopt;
            std::optional<std::size_t> in_up = i > 0 ? std::optional(edge_id(node(i - 1, j), 1)) : std::nullopt;
            std::optional<std::size_t> out_right = j + 1 < phi_ ? std::optional(edge_id(n, 0)) : std::nullopt;
            std::optional<std::size_t> out_down = i + 1 < l_ ? std::optional(edge_id(n, 1)) : std::nullopt;
            if (in_left && out_right) {
                link(*in_left, *out_right);
                in_left.reset();
                out_right.reset();
            }
            if (in_up && out_down) {
                link(*in_up, *out_down);
                in_up.reset();
                out_down.reset();
            }
            const auto in = in_left ? in_left : in_up;
            const auto out = out_right ? out_right : out_down;
            if (in && out) link(*in, *out);
        }
    }
    for (std::size_t tail = 0; tail < count; ++tail) {
        for (int dir = 0; dir < 2; ++dir) {
            if (!exists(tail, dir) || has_predecessor[edge_id(tail, dir)]) continue;
            Chain chain;
            chain.nodes.push_back(static_cast<int>(tail));
            std::ptrdiff_t e = static_cast<std::ptrdiff_t>(edge_id(tail, dir));
            while (e >= 0) {
                const std::size_t t = static_cast<std::size_t>(e) / 2;
                const int d = static_cast<int>(e % 2);
                chain.nodes.push_back(static_cast<int>(d == 0 ? t + 1 : t + phi_));
                e = successor[static_cast<std::size_t>(e)];
            }
            chains_.push_back(std::move(chain));
        }
    }
}

// Minimum over one chain of  sum_s gamma_s * theta_s + sum_st theta_st  where theta is the
// reparameterisation induced by the messages:
//   theta_s(x)     = unary(x) + sum of incoming messages
//   theta_st(x, y) = pairwise(x, y) - M_{t->s}(x) - M_{s->t}(y)
Cost TrwSolver::chain_minimum(const Chain& chain) {
    const auto& pw = mrf_.pairwise;
    auto coords = [&](int n) { return std::pair{n / phi_, n % phi_}; };

    auto [i0, j0] = coords(chain.nodes.front());
    belief(i0, j0, belief_);
    for (int s = 0; s < rho_; ++s) {
        dp_[s] = belief_[s] == kInfinity ? kInfinity : gamma_[chain.nodes.front()] * belief_[s];
    }
    for (std::size_t k = 1; k < chain.nodes.size(); ++k) {
        const int from = chain.nodes[k - 1];
        const int to = chain.nodes[k];
        const bool horizontal = to - from == 1 && (from % phi_) + 1 < phi_;
        const Side back_side = horizontal ? kFromRight : kFromDown;  // M_{t->s}, stored at s
        const Side fwd_side = horizontal ? kFromLeft : kFromUp;      // M_{s->t}, stored at t
        const double beta = horizontal ? pw.horizontal_beta(from % phi_) : pw.vertical_beta(from % phi_);

        const auto back = msg(back_side, static_cast<std::size_t>(from));
        for (int s = 0; s < rho_; ++s) scratch_[s] = dp_[s] == kInfinity ? kInfinity : dp_[s] - back[s];
        kernel_.compute(scratch_, EdgeTerm{beta, pw.sigma_hat, pw.alpha}, scratch2_);

        auto [i, j] = coords(to);
        belief(i, j, belief_);
        const auto fwd = msg(fwd_side, static_cast<std::size_t>(to));
        const double gamma = gamma_[static_cast<std::size_t>(to)];
        for (int s = 0; s < rho_; ++s) {
            dp_[s] = belief_[s] == kInfinity ? kInfinity : gamma * belief_[s] + scratch2_[s] - fwd[s];
        }
    }
    return *std::min_element(dp_.begin(), dp_.end());
}

Cost TrwSolver::lower_bound() {
    Cost bound = 0.0;
    for (const auto& chain : chains_) bound += chain_minimum(chain);
    return bound;
}

Surface TrwSolver::decode(DecodeRule rule) const {
    const auto& pw = mrf_.pairwise;
    Surface out(l_, phi_);
    for (int i = 0; i < l_; ++i) {
        for (int j = 0; j < phi_; ++j) {
            const std::size_t n = node(i, j);
            const auto unary = mrf_.unary.column(i, j);
            Cost best = kInfinity;
            Label best_s = -1;
            for (Label s = 0; s < rho_; ++s) {
                Cost c = unary[s];
                if (j > 0) c += pw.cost(s, out.at(i, j - 1), pw.horizontal_beta(j - 1));
                if (i > 0) c += pw.cost(s, out.at(i - 1, j), pw.vertical_beta(j));
                if (j + 1 < phi_) c += msg(kFromRight, n)[s];
                if (i + 1 < l_) c += msg(kFromDown, n)[s];
                if (rule == DecodeRule::kAllMessages) {
                    if (j > 0) c += msg(kFromLeft, n)[s];
                    if (i > 0) c += msg(kFromUp, n)[s];
                }
                if (c < best) {
                    best = c;
                    best_s = s;
                }
            }
            if (best_s < 0) {
                throw InfeasibleError("no finite-energy label for pixel " + pixel_name(i, j) +
                                          " given its decoded neighbours",
                                      Pixel{i, j});
            }
            out.at(i, j) = best_s;
        }
    }
    return out;
}

TrwResult trw_infer(const GridMrf& mrf, const TrwConfig& cfg) {
    const int max_iterations = cfg.max_iterations > 0 ? cfg.max_iterations : mrf.dims().phi;
    TrwSolver solver(mrf, cfg.kernel);
    TrwResult result;
    std::optional<InfeasibleError> last_failure;

    auto try_decode = [&] {
        try {
            Surface s = solver.decode(cfg.decode);
            const Cost e = total_energy(s, mrf);
            if (e < result.energy) {
                result.energy = e;
                result.surface = std::move(s);
            }
        } catch (const InfeasibleError& err) {
            last_failure = err;
        }
    };

    for (int k = 0; k < max_iterations; ++k) {
        solver.iterate();
        const Cost bound = solver.bound_trace().back();
        if (bound == kInfinity) throw InfeasibleError("the dual bound is infinite: no finite-energy labeling exists");
        try_decode();
        const auto& trace = solver.bound_trace();
        if (cfg.tolerance > 0.0 && trace.size() >= 2) {
            const Cost gain = trace.back() - trace[trace.size() - 2];
            if (gain < cfg.tolerance * std::max(1.0, std::abs(trace.back()))) break;
        }
    }
    result.bound_trace = solver.bound_trace();
    result.iterations = solver.iterations();
    if (result.energy == kInfinity) {
        if (last_failure) throw *last_failure;
        throw InfeasibleError("decoding produced no finite-energy surface");
    }
    return result;
}

TrwResult trw_infer(const TopoSequence& seq, const EnergyParams& params, const ExtraEvidence& extra,
                    const TrwConfig& cfg) {
    return trw_infer(build_mrf(seq, params, extra), cfg);
}

}  // namespace icesurf
