#pragma once
/**
 * Min-sum message kernels for the truncated log-Gaussian pairwise term:
 *
 *   m(t) = min_s [ h(s) + beta * ((s - t)^2 / (2 sigma^2) + ln(sigma sqrt(2 pi))) ],  |s - t| < alpha
 *
 * message_naive scans all rho^2 pairs and is the reference. message_fast
 * gives the same result: windowed minimisation in O(rho * alpha) when the
 * truncation is active, and the lower-envelope distance transform in O(rho)
 * when alpha >= rho. Ties in the argmin go to the smaller source label.
 */

#include <span>
#include <vector>

#include "icesurf/core.hpp"

namespace icesurf {

struct Message {
    std::vector<Cost> cost;
    std::vector<Label> argmin;  // -1 where cost is infinite
};

enum class KernelKind { kFast, kNaive };

struct EdgeTerm {
    double beta = 1.0;
    double sigma_hat = 1.0;
    int alpha = 1;
};

Message message_naive(std::span<const Cost> h, double beta, double sigma_hat, int alpha);
Message message_fast(std::span<const Cost> h, double beta, double sigma_hat, int alpha);

/**
 * Reusable kernel with its own scratch space, so solvers can compute
 * messages into preallocated buffers. Not thread-safe; use one per thread.
 */
class MessageKernel {
public:
    explicit MessageKernel(KernelKind kind = KernelKind::kFast) : kind_(kind) {}

    KernelKind kind() const { return kind_; }

    /// Writes the message into `out` (size rho). `argmin` may be empty.
    void compute(std::span<const Cost> h, const EdgeTerm& edge, std::span<Cost> out,
                 std::span<Label> argmin = {});

private:
    void naive(std::span<const Cost> h, const EdgeTerm& edge, std::span<Cost> out, std::span<Label> argmin);
    void windowed(std::span<const Cost> h, const EdgeTerm& edge, std::span<Cost> out, std::span<Label> argmin);
    void envelope(std::span<const Cost> h, const EdgeTerm& edge, std::span<Cost> out, std::span<Label> argmin);

    KernelKind kind_;
    std::vector<Cost> offsets_;  // pairwise cost by |distance|
    std::vector<int> hull_;
    std::vector<double> bounds_;
};

}  // namespace icesurf
