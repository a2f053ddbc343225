#include "icesurf/msgpass.hpp"

#include <algorithm>
#include <cmath>

#include "icesurf/energy.hpp"

namespace icesurf {

void MessageKernel::compute(std::span<const Cost> h, const EdgeTerm& edge, std::span<Cost> out,
                            std::span<Label> argmin) {
    const int rho = static_cast<int>(h.size());
    if (kind_ == KernelKind::kNaive) {
        naive(h, edge, out, argmin);
    } else if (edge.alpha >= rho && edge.beta > 0.0) {
        envelope(h, edge, out, argmin);
    } else {
        windowed(h, edge, out, argmin);
    }
}

void MessageKernel::naive(std::span<const Cost> h, const EdgeTerm& edge, std::span<Cost> out,
                          std::span<Label> argmin) {
    const int rho = static_cast<int>(h.size());
    for (Label t = 0; t < rho; ++t) {
        Cost best = kInfinity;
        Label best_s = -1;
        for (Label s = 0; s < rho; ++s) {
            const Cost c = h[s] + pairwise_cost(s, t, edge.beta, edge.sigma_hat, edge.alpha);
            if (c < best) {
                best = c;
                best_s = s;
            }
        }
        out[t] = best;
        if (!argmin.empty()) argmin[t] = best_s;
    }
}

void MessageKernel::windowed(std::span<const Cost> h, const EdgeTerm& edge, std::span<Cost> out,
                             std::span<Label> argmin) {
    const int rho = static_cast<int>(h.size());
    const int reach = std::min(edge.alpha - 1, rho - 1);
    offsets_.resize(static_cast<std::size_t>(reach) + 1);
    for (int d = 0; d <= reach; ++d) offsets_[d] = pairwise_cost(d, 0, edge.beta, edge.sigma_hat, edge.alpha);

    for (Label t = 0; t < rho; ++t) {
        Cost best = kInfinity;
        Label best_s = -1;
        const Label lo = std::max(0, t - reach);
        const Label hi = std::min(rho - 1, t + reach);
        for (Label s = lo; s <= hi; ++s) {
            const Cost c = h[s] + offsets_[std::abs(s - t)];
            if (c < best) {
                best = c;
                best_s = s;
            }
        }
        out[t] = best;
        if (!argmin.empty()) argmin[t] = best_s;
    }
}

// Lower envelope of the parabolas h(s) + w (t - s)^2 over finite h(s).
// Only valid when no pair of labels is truncated, i.e. alpha >= rho.
void MessageKernel::envelope(std::span<const Cost> h, const EdgeTerm& edge, std::span<Cost> out,
                             std::span<Label> argmin) {
    const int rho = static_cast<int>(h.size());
    const double w = edge.beta / (2.0 * edge.sigma_hat * edge.sigma_hat);
    hull_.resize(static_cast<std::size_t>(rho));
    bounds_.resize(static_cast<std::size_t>(rho) + 1);

    auto intersect = [&](int q, int v) {
        return ((h[q] + w * q * q) - (h[v] + w * v * v)) / (2.0 * w * (q - v));
    };

    int k = -1;
    for (int q = 0; q < rho; ++q) {
        if (h[q] == kInfinity) continue;
        if (k < 0) {
            k = 0;
            hull_[0] = q;
            bounds_[0] = -kInfinity;
            bounds_[1] = kInfinity;
            continue;
        }
        double z = intersect(q, hull_[k]);
        while (k > 0 && z <= bounds_[k]) {
            --k;
            z = intersect(q, hull_[k]);
        }
        ++k;
        hull_[k] = q;
        bounds_[k] = z;
        bounds_[k + 1] = kInfinity;
    }

    if (k < 0) {
        std::fill(out.begin(), out.end(), kInfinity);
        if (!argmin.empty()) std::fill(argmin.begin(), argmin.end(), -1);
        return;
    }

    // Costs use the same expression as the naive scan so the kernels agree bitwise.
    auto cost_at = [&](int c, Label t) {
        return h[hull_[c]] + pairwise_cost(hull_[c], t, edge.beta, edge.sigma_hat, edge.alpha);
    };
    int seg = 0;
    for (Label t = 0; t < rho; ++t) {
        while (bounds_[seg + 1] < t) ++seg;
        int c = seg;
        Cost best = cost_at(c, t);
        // Rounded breakpoints can misplace t by one segment; exact ties go to the smaller label.
        while (c < k && cost_at(c + 1, t) < best) best = cost_at(++c, t);
        while (c > 0 && cost_at(c - 1, t) <= best) best = cost_at(--c, t);
        out[t] = best;
        if (!argmin.empty()) argmin[t] = hull_[c];
    }
}

namespace {

Message run(KernelKind kind, std::span<const Cost> h, double beta, double sigma_hat, int alpha) {
    Message m;
    m.cost.resize(h.size());
    m.argmin.resize(h.size());
    MessageKernel kernel(kind);
    kernel.compute(h, EdgeTerm{beta, sigma_hat, alpha}, m.cost, m.argmin);
    return m;
}

}  // namespace

Message message_naive(std::span<const Cost> h, double beta, double sigma_hat, int alpha) {
    return run(KernelKind::kNaive, h, beta, sigma_hat, alpha);
}

Message message_fast(std::span<const Cost> h, double beta, double sigma_hat, int alpha) {
    return run(KernelKind::kFast, h, beta, sigma_hat, alpha);
}

}  // namespace icesurf
