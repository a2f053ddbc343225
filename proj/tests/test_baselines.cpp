#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "icesurf/baselines.hpp"
#include "oracles.hpp"

using namespace icesurf;

namespace {

/// Brute force over one slice with the pairwise model used by the baseline.
double slice_minimum(const GridMrf& mrf, int i, const PairwiseModel& pw) {
    const auto& d = mrf.dims();
    std::vector<int> labels(d.phi, 0);
    double best = kInfinity;
    while (true) {
        double e = 0.0;
        for (int j = 0; j < d.phi; ++j) {
            e += mrf.unary.at(i, j, labels[j]);
            if (j + 1 < d.phi) e += oracle::pair_term(labels[j], labels[j + 1], pw.beta[j], pw.sigma_hat, pw.alpha);
        }
        best = std::min(best, e);
        int k = d.phi - 1;
        while (k >= 0 && ++labels[k] == d.rho) labels[k--] = 0;
        if (k < 0) break;
    }
    return best;
}

double slice_energy(const GridMrf& mrf, int i, const std::vector<Label>& labels, const PairwiseModel& pw) {
    double e = 0.0;
    for (int j = 0; j < mrf.dims().phi; ++j) {
        e += mrf.unary.at(i, j, labels[j]);
        if (j + 1 < mrf.dims().phi) e += pw.cost(labels[j], labels[j + 1], pw.horizontal_beta(j));
    }
    return e;
}

}  // namespace

TEST_CASE("baseline_pairwise") {
    PairwiseModel pw{{0.5, 1.0, 3.0}, 2.0, 4};
    const auto fixed = baseline_pairwise(pw, BetaMode::kFixed);
    CHECK(fixed.beta == std::vector<double>(3, 1.5));
    CHECK(fixed.sigma_hat == 2.0);
    CHECK(fixed.alpha == 4);
    CHECK(baseline_pairwise(pw, BetaMode::kDynamic).beta == pw.beta);
}

TEST_CASE("viterbi_slice is exact on random slices") {
    std::mt19937_64 rng(12);
    for (int k = 0; k < 40; ++k) {
        const int phi = 1 + static_cast<int>(rng() % 5);
        const int rho = 2 + static_cast<int>(rng() % 4);
        auto mrf = oracle::random_mrf(rng, 2, phi, rho, 1 + static_cast<int>(rng() % 4), 0.9, 0.2);
        for (auto mode : {BetaMode::kFixed, BetaMode::kDynamic}) {
            const auto pw = baseline_pairwise(mrf.pairwise, mode);
            for (int i = 0; i < 2; ++i) {
                const double best = slice_minimum(mrf, i, pw);
                if (best == kInfinity) {
                    CHECK_THROWS_AS(viterbi_slice(mrf.unary, i, mrf.pairwise, mode), InfeasibleError);
                    continue;
                }
                const auto labels = viterbi_slice(mrf.unary, i, mrf.pairwise, mode);
                CHECK(slice_energy(mrf, i, labels, pw) == doctest::Approx(best).epsilon(1e-12));
                const auto naive = viterbi_slice(mrf.unary, i, mrf.pairwise, mode, KernelKind::kNaive);
                CHECK(naive == labels);
            }
        }
    }
}

TEST_CASE("fixed and dynamic coincide for constant beta") {
    std::mt19937_64 rng(13);
    auto mrf = oracle::random_mrf(rng, 4, 9, 15, 4, 1.2, 0.0, 10.0, false);
    CHECK(solve_independent(mrf, BetaMode::kFixed) == solve_independent(mrf, BetaMode::kDynamic));
}

TEST_CASE("slices are independent") {
    std::mt19937_64 rng(14);
    auto mrf = oracle::random_mrf(rng, 3, 6, 12, 4, 1.0);
    const auto all = solve_independent(mrf, BetaMode::kDynamic);
    auto changed = mrf;
    for (int j = 0; j < 6; ++j)
        for (int s = 0; s < 12; ++s) changed.unary.at(2, j, s) = static_cast<double>((s * 7 + j) % 5);
    const auto other = solve_independent(changed, BetaMode::kDynamic);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 6; ++j) CHECK(all.at(i, j) == other.at(i, j));
}

TEST_CASE("the dynamic solution has no higher dynamic-chain energy than the fixed one") {
    std::mt19937_64 rng(15);
    for (int k = 0; k < 20; ++k) {
        auto mrf = oracle::random_mrf(rng, 2, 8, 10, 4, 1.0);
        const auto dyn = solve_independent(mrf, BetaMode::kDynamic);
        const auto fix = solve_independent(mrf, BetaMode::kFixed);
        for (int i = 0; i < 2; ++i) {
            const auto d = dyn.slice(i);
            const auto f = fix.slice(i);
            CHECK(slice_energy(mrf, i, {d.begin(), d.end()}, mrf.pairwise) <=
                  slice_energy(mrf, i, {f.begin(), f.end()}, mrf.pairwise) + 1e-9);
        }
    }
}

TEST_CASE("infeasible slice reports its last column") {
    std::mt19937_64 rng(16);
    auto mrf = oracle::random_mrf(rng, 2, 3, 6, 2, 1.0);
    for (int s = 0; s < 6; ++s) {
        mrf.unary.at(1, 0, s) = s == 0 ? 0.0 : kInfinity;
        mrf.unary.at(1, 1, s) = s == 5 ? 0.0 : kInfinity;
    }
    try {
        solve_independent(mrf, BetaMode::kDynamic);
        FAIL("expected InfeasibleError");
    } catch (const InfeasibleError& e) {
        REQUIRE(e.where());
        CHECK(e.where()->i == 1);
    }
}
