#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "icesurf/energy.hpp"
#include "oracles.hpp"

using namespace icesurf;

namespace {

constexpr double kLnSqrt2Pi = 0.91893853320467267;

TopoSequence ramp_sequence(int l, int phi, int rho, Label air, std::uint64_t seed) {
    Dims d{l, phi, rho};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    std::vector<float> data(d.voxels());
    for (auto& x : data) x = u(rng);
    return TopoSequence(d, data, std::vector<Label>(d.columns(), air),
                        std::vector<std::optional<BottomBin>>(static_cast<std::size_t>(l)));
}

EnergyParams simple_params(int phi, int alpha = 3) {
    EnergyParams p;
    p.tmpl = TemplateModel({0.25, 1.0, 0.5}, {0.5, 0.5, 0.5});
    p.tau = 2.0;
    p.alpha = alpha;
    p.sigma_hat = 1.3;
    p.beta = constant_beta(phi, 0.7);
    return p;
}

}  // namespace

TEST_CASE("template_cost") {
    const TemplateModel t({1.0, 2.0, 1.0}, {1.0, 1.0, 1.0});
    const std::vector<float> col{1.0f, 2.0f, 1.0f, 0.0f};
    CHECK(template_cost(col, t, 1) == 0.0);
    CHECK(template_cost(col, t, 2) == 3.0);
    // s = 0: offset -1 falls outside, offsets 0 and +1 give (1-2)^2 + (2-1)^2.
    CHECK(template_cost(col, t, 0) == 2.0);
    CHECK(template_cost(col, t, 3) == 4.0);

    const TemplateModel scaled({1.0, 2.0, 1.0}, {2.0, 0.5, 1.0});
    CHECK(template_cost(col, scaled, 2) == doctest::Approx(1.0 / 2.0 + 1.0 / 0.5 + 1.0));
}

TEST_CASE("air_cost") {
    CHECK(air_cost(4, 5, 10.0) == kInfinity);
    CHECK(air_cost(5, 5, 10.0) == kInfinity);
    CHECK(air_cost(17, 5, 10.0) == 0.0);
    CHECK(air_cost(9, 5, 10.0) == 6.0);
    CHECK(air_cost(15, 5, 10.0) == 0.0);
    CHECK(air_cost(6, 5, 0.0) == 0.0);
}

TEST_CASE("bin_cost") {
    CHECK(bin_cost(49, 50) == kInfinity);
    CHECK(bin_cost(50, 50) == 0.0);
    for (Label s = 0; s < 10; ++s) CHECK(bin_cost(s, 0) == 0.0);
}

TEST_CASE("pairwise_cost") {
    CHECK(pairwise_cost(4, 4, 1.0, 1.0, 3) == doctest::Approx(kLnSqrt2Pi).epsilon(1e-15));
    CHECK(pairwise_cost(5, 4, 1.0, 1.0, 3) == doctest::Approx(1.4189385332046727).epsilon(1e-15));
    CHECK(pairwise_cost(7, 4, 1.0, 1.0, 3) == kInfinity);
    CHECK(pairwise_cost(1, 4, 1.0, 1.0, 3) == kInfinity);

    std::mt19937_64 rng(3);
    for (int k = 0; k < 500; ++k) {
        const Label a = static_cast<Label>(rng() % 40);
        const Label b = static_cast<Label>(rng() % 40);
        const double beta = 0.1 + (rng() % 100) / 10.0;
        const double sigma = 0.5 + (rng() % 40) / 10.0;
        const int alpha = 1 + static_cast<int>(rng() % 20);
        CHECK(pairwise_cost(a, b, beta, sigma, alpha) == pairwise_cost(b, a, beta, sigma, alpha));
        CHECK(pairwise_cost(a, a, beta, sigma, alpha) <= pairwise_cost(a, b, beta, sigma, alpha));
        CHECK(oracle::same_cost(pairwise_cost(a, b, beta, sigma, alpha), oracle::pair_term(a, b, beta, sigma, alpha)));
    }
}

TEST_CASE("build_unary composes template and air costs") {
    const auto seq = ramp_sequence(2, 3, 12, 2, 11);
    const auto p = simple_params(3);
    const auto table = build_unary(seq, p);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (Label s = 0; s < 12; ++s) {
                const Cost expected = air_cost(s, 2, p.tau) == kInfinity
                                          ? kInfinity
                                          : air_cost(s, 2, p.tau) + template_cost(seq.column(i, j), p.tmpl, s);
                CHECK(table.at(i, j, s) == expected);
            }
        }
    }
}

TEST_CASE("build_unary: entries at or above the air surface are infinite everywhere") {
    Dims d{3, 4, 20};
    std::mt19937_64 rng(5);
    std::vector<Label> air(d.columns());
    for (auto& a : air) a = static_cast<Label>(rng() % 15);
    TopoSequence seq(d, std::vector<float>(d.voxels(), 0.1f), air, {BottomBin{1, 12}, std::nullopt, BottomBin{3, 18}});
    const auto p = simple_params(4);
    const auto table = build_unary(seq, p);
    for (int i = 0; i < d.l; ++i) {
        for (int j = 0; j < d.phi; ++j) {
            const auto range = feasible_label_range(seq, p, i, j);
            for (Label s = 0; s < d.rho; ++s) {
                const bool feasible = s >= range.lo && s <= range.hi;
                CHECK((table.at(i, j, s) != kInfinity) == feasible);
            }
        }
    }
}

TEST_CASE("build_unary applies pins and ranges") {
    const auto seq = ramp_sequence(2, 2, 10, 0, 2);
    const auto p = simple_params(2);
    ExtraEvidence extra{{Pin{1, 0, 6}}, {RangeConstraint{0, 1, 3, 5}}};
    const auto table = build_unary(seq, p, extra);
    for (Label s = 0; s < 10; ++s) {
        CHECK((table.at(1, 0, s) != kInfinity) == (s == 6));
        CHECK((table.at(0, 1, s) != kInfinity) == (s >= 3 && s <= 5));
    }
    ExtraEvidence conflicting{{Pin{0, 0, 3}, Pin{0, 0, 4}}, {}};
    try {
        build_unary(seq, p, conflicting);
        FAIL("expected EmptyFeasibleSet");
    } catch (const EmptyFeasibleSet& e) {
        REQUIRE(e.where());
        CHECK(e.where()->i == 0);
        CHECK(e.where()->j == 0);
    }
}

TEST_CASE("build_unary rejects invalid input") {
    auto seq = ramp_sequence(1, 2, 5, 4, 1);  // air at the last row
    CHECK_THROWS_AS(build_unary(seq, simple_params(2)), EmptyFeasibleSet);
    CHECK_THROWS_AS(build_unary(ramp_sequence(1, 2, 5, 0, 1), simple_params(3)), InvalidArgument);
}

TEST_CASE("total_energy small cases") {
    const auto p = simple_params(2);
    SUBCASE("1x1 has no pairwise terms") {
        const auto seq = ramp_sequence(1, 1, 8, 0, 4);
        auto p1 = simple_params(1);
        const Surface s(1, 1, std::vector<Label>{5});
        CHECK(total_energy(s, seq, p1) == build_unary(seq, p1).at(0, 0, 5));
    }
    SUBCASE("1x2 with equal labels adds one zero-distance edge") {
        const auto seq = ramp_sequence(1, 2, 8, 0, 4);
        const Surface s(1, 2, std::vector<Label>{5, 5});
        const auto table = build_unary(seq, p);
        const double edge = 0.7 * std::log(1.3 * std::sqrt(2.0 * std::numbers::pi));
        CHECK(total_energy(s, seq, p) == doctest::Approx(table.at(0, 0, 5) + table.at(0, 1, 5) + edge).epsilon(1e-13));
    }
    SUBCASE("a label at the air surface gives infinity") {
        const auto seq = ramp_sequence(1, 2, 8, 3, 4);
        CHECK(total_energy(Surface(1, 2, std::vector<Label>{3, 5}), seq, p) == kInfinity);
    }
    SUBCASE("a violated pin gives infinity") {
        const auto seq = ramp_sequence(1, 2, 8, 0, 4);
        const ExtraEvidence extra{{Pin{0, 1, 6}}, {}};
        CHECK(total_energy(Surface(1, 2, std::vector<Label>{5, 5}), seq, p, extra) == kInfinity);
        CHECK(std::isfinite(total_energy(Surface(1, 2, std::vector<Label>{5, 6}), seq, p, extra)));
    }
}

TEST_CASE("total_energy is finite iff labels are feasible and neighbours are within alpha") {
    std::mt19937_64 rng(9);
    const auto seq = ramp_sequence(3, 4, 10, 2, 8);
    const auto p = simple_params(4, 3);
    for (int trial = 0; trial < 300; ++trial) {
        Surface s(3, 4);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 4; ++j) s.at(i, j) = static_cast<Label>(rng() % 10);
        bool feasible = true;
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 4; ++j) {
                if (s.at(i, j) <= 2) feasible = false;
                if (j + 1 < 4 && std::abs(s.at(i, j) - s.at(i, j + 1)) >= 3) feasible = false;
                if (i + 1 < 3 && std::abs(s.at(i, j) - s.at(i + 1, j)) >= 3) feasible = false;
            }
        }
        CHECK(std::isfinite(total_energy(s, seq, p)) == feasible);
    }
}

TEST_CASE("total_energy changes locally under single-label perturbations") {
    std::mt19937_64 rng(21);
    auto mrf = oracle::random_mrf(rng, 4, 5, 9, 9, 1.7);
    Surface s(4, 5);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 5; ++j) s.at(i, j) = static_cast<Label>(rng() % 9);
    const auto& pw = mrf.pairwise;
    for (int trial = 0; trial < 200; ++trial) {
        const int i = static_cast<int>(rng() % 4);
        const int j = static_cast<int>(rng() % 5);
        const Label next = static_cast<Label>(rng() % 9);
        auto local = [&](const Surface& x) {
            const Label v = x.at(i, j);
            double e = mrf.unary.at(i, j, v);
            if (j > 0) e += pw.cost(v, x.at(i, j - 1), pw.horizontal_beta(j - 1));
            if (j + 1 < 5) e += pw.cost(v, x.at(i, j + 1), pw.horizontal_beta(j));
            if (i > 0) e += pw.cost(v, x.at(i - 1, j), pw.vertical_beta(j));
            if (i + 1 < 4) e += pw.cost(v, x.at(i + 1, j), pw.vertical_beta(j));
            return e;
        };
        const double before = total_energy(s, mrf);
        const double local_before = local(s);
        Surface t = s;
        t.at(i, j) = next;
        CHECK(total_energy(t, mrf) - before == doctest::Approx(local(t) - local_before).epsilon(1e-9));
        s = t;
    }
}

TEST_CASE("the pairwise normalisation constant never moves the argmin") {
    std::mt19937_64 rng(33);
    for (int trial = 0; trial < 10; ++trial) {
        const auto mrf = oracle::random_mrf(rng, 2, 3, 3, 3, 0.3);
        const auto with_constant = oracle::minimize(mrf);
        auto quadratic = [&](int a, int b, double beta) {
            const int d = a - b;
            return std::abs(d) >= 3 ? kInfinity : beta * 0.5 * d * d / 0.09;
        };
        double best = kInfinity;
        std::vector<int> arg;
        std::vector<int> labels(6, 0);
        while (true) {
            double e = 0;
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 3; ++j) {
                    const int s = labels[i * 3 + j];
                    e += mrf.unary.at(i, j, s);
                    if (j + 1 < 3) e += quadratic(s, labels[i * 3 + j + 1], mrf.pairwise.beta[j]);
                    if (i + 1 < 2) e += quadratic(s, labels[(i + 1) * 3 + j], mrf.pairwise.beta[j]);
                }
            }
            if (e < best) {
                best = e;
                arg = labels;
            }
            int k = 5;
            while (k >= 0 && ++labels[k] == 3) labels[k--] = 0;
            if (k < 0) break;
        }
        CHECK(arg == with_constant.labels);
    }
}
