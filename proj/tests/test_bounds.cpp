// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "pgmkit/bounds.hpp"

using namespace pgmkit;

namespace {

DensityMatrix random_density(int d, int rank, std::uint64_t seed) {
    const Matrix psd = oracles::random_psd(d, rank, seed);
    return DensityMatrix::validate(psd / psd.trace().real(), 1e-9);
}

Ensemble random_mixed_ensemble(int d, int n, std::uint64_t seed) {
    std::vector<DensityMatrix> states;
    for (int i = 0; i < n; ++i) {
        const int rank = 1 + static_cast<int>((seed + static_cast<std::uint64_t>(i)) %
                                              static_cast<std::uint64_t>(d));
        states.push_back(random_density(d, rank, seed * 1000 + static_cast<std::uint64_t>(i)));
    }
    return Ensemble(std::move(states));
}

} // namespace

TEST_CASE("fidelity-sum bound holds and is tight for orthonormal states", "[bounds]") {
    const Ensemble ortho = gen_equal_overlap(4, 0.0);
    const BoundReport report = fidelity_sum_bound(ortho);
    CHECK(report.holds);
    CHECK_FALSE(report.vacuous);
    CHECK(report.bound_value == Catch::Approx(0.0).margin(1e-9));
    CHECK(report.measured_value == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("fidelity-sum bound on random ensembles", "[bounds]") {
    for (std::uint64_t seed : {301u, 302u, 303u}) {
        const Ensemble s = random_mixed_ensemble(6, 3, seed);
        const BoundReport report = fidelity_sum_bound(s);
        CHECK(report.holds);
        CHECK(report.measured_value <= report.bound_value + kSlackTol);
    }
    // Highly overlapping states give a sum ≥ 1: still valid, flagged vacuous.
    const Ensemble crowded = gen_equal_overlap(6, 0.9);
    const BoundReport report = fidelity_sum_bound(crowded);
    CHECK(report.holds);
    CHECK(report.vacuous);
}

TEST_CASE("spectral sandwich holds on random pure ensembles", "[bounds]") {
    for (std::uint64_t seed : {311u, 312u}) {
        const Ensemble s = gen_haar_pure(8, 5, seed);
        for (const BoundReport& r : spectral_sandwich(s)) {
            CHECK(r.holds);
            CHECK_FALSE(r.vacuous);
        }
    }
}

TEST_CASE("spectral sandwich is an equality for orthonormal states", "[bounds]") {
    const Ensemble s = gen_equal_overlap(5, 0.0);
    for (const BoundReport& r : spectral_sandwich(s)) {
        // ||G|| = ||G^{-1}|| = 1 and tr μ_i ρ_i = tr ρ_i² = 1.
        CHECK(r.holds);
        CHECK(r.bound_value == Catch::Approx(1.0).margin(1e-10));
        CHECK(r.measured_value == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("spectral sandwich lower bound is tight for identical mixed states",
          "[bounds]") {
    const int n = 4;
    std::vector<DensityMatrix> states;
    for (int i = 0; i < n; ++i) {
        states.push_back(
            DensityMatrix::validate(Matrix::Identity(n, n) / double(n)));
    }
    const Ensemble s(std::move(states));
    const std::vector<BoundReport> reports = spectral_sandwich(s);
    for (std::size_t i = 0; i < reports.size(); i += 2) {
        const BoundReport& lower = reports[i];
        CHECK(lower.holds);
        CHECK(lower.bound_value == Catch::Approx(1.0 / n).margin(1e-12));
        CHECK(lower.measured_value == Catch::Approx(1.0 / n).margin(1e-12));
        // The upper bound is vacuous: G is singular here.
        CHECK(reports[i + 1].vacuous);
        CHECK(reports[i + 1].holds);
    }
}

TEST_CASE("multi-copy PGM budget formula at frozen points", "[bounds]") {
    // k = ceil((2/ε) ln(n/δ)): n=100, ε=0.5, δ=0.125 → ceil(4 ln 800) = 27.
    const CopyBudget b = multicopy_pgm_budget(100, 0.5, 0.125);
    CHECK(b.k == 27);
    CHECK(b.l == 0);
    CHECK(b.total == 27);

    // n=2, ε=1 (orthogonal pair), δ=0.5: ceil(2 ln 4) ≈ ceil(2.77) = 3.
    CHECK(multicopy_pgm_budget(2, 1.0, 0.5).k == 3);
}

TEST_CASE("two-stage budget formula at frozen points", "[bounds]") {
    // k = ceil(||G|| ln(2/δ)), l = ceil(ln(2k/δ)/ε).
    // ||G||=4, ε=0.25, δ=0.1: k = ceil(4 ln 20) = 12, l = ceil(ln 240 / 0.25) = 22.
    const CopyBudget b = two_stage_budget(4.0, 0.25, 0.1);
    CHECK(b.k == 12);
    CHECK(b.l == 22);
    CHECK(b.total == 12 * 23);

    // ||G|| = 1 (orthonormal), δ = 0.5: k = ceil(ln 4) = 2.
    const CopyBudget tight = two_stage_budget(1.0, 1.0, 0.5);
    CHECK(tight.k == 2);
    CHECK(tight.l == 3); // ceil(ln(2·2/0.5)) = ceil(ln 8) = ceil(2.079) = 3
    CHECK(tight.total == 2 * 4);
}

TEST_CASE("budget formulas reject bad premises", "[bounds]") {
    try {
        multicopy_pgm_budget(4, 0.0, 0.1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::zero_epsilon);
    }
    CHECK_THROWS_AS(multicopy_pgm_budget(1, 0.5, 0.1), Error);
    CHECK_THROWS_AS(multicopy_pgm_budget(4, 1.5, 0.1), Error);
    CHECK_THROWS_AS(multicopy_pgm_budget(4, 0.5, 0.0), Error);
    CHECK_THROWS_AS(multicopy_pgm_budget(4, 0.5, 1.0), Error);
    CHECK_THROWS_AS(two_stage_budget(0.5, 0.5, 0.1), Error); // ||G|| < 1
    try {
        two_stage_budget(2.0, 0.0, 0.1);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::zero_epsilon);
    }
}

TEST_CASE("Gram norm upper bound: slack zero for equal overlaps", "[bounds]") {
    const Ensemble s = gen_equal_overlap(8, 0.5);
    const BoundReport report = gram_norm_upper(build_gram(s));
    CHECK(report.holds);
    // ||G|| = 1 + c(n-1) exactly equals the bound 1 + (n-1) max|G_ij|.
    CHECK(std::abs(report.slack) < 1e-9);
    CHECK(report.bound_value == Catch::Approx(4.5).margin(1e-12));
}

TEST_CASE("Gram norm upper bound holds for Haar ensembles", "[bounds]") {
    for (std::uint64_t seed : {321u, 322u}) {
        const Ensemble s = gen_haar_pure(6, 5, seed);
        const BoundReport report = gram_norm_upper(build_gram(s));
        CHECK(report.holds);
        CHECK(report.slack >= -kSlackTol);
    }
}

TEST_CASE("Gram norm upper bound refuses mixed ensembles", "[bounds]") {
    const Ensemble s = random_mixed_ensemble(4, 3, 331);
    try {
        gram_norm_upper(build_gram(s));
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == errc::unsupported_mixed);
    }
}

TEST_CASE("square-root perturbation bound on random PSD pairs", "[bounds]") {
    // 100 pairs, zero violations expected.
    int violations = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Matrix a = oracles::random_psd(8, 8, 2000 + 2 * seed);
        const Matrix b = oracles::random_psd(8, 8, 2001 + 2 * seed);
        const BoundReport report = sqrt_perturbation_check(a, b);
        if (!report.holds) {
            ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("square-root perturbation bound demands equal shapes", "[bounds]") {
    CHECK_THROWS_AS(
        sqrt_perturbation_check(Matrix::Identity(3, 3), Matrix::Identity(4, 4)),
        Error);
}

TEST_CASE("the bound chain holds link by link", "[bounds]") {
    SECTION("random mixed ensembles") {
        for (std::uint64_t seed : {341u, 342u, 343u}) {
            const ChainReport chain =
                fidelity_bound_chain(random_mixed_ensemble(6, 3, seed));
            CHECK(chain.all_hold);
            for (const ChainLink& link : chain.links) {
                INFO(link.name);
                CHECK(link.holds);
            }
        }
    }
    SECTION("random pure ensembles") {
        const ChainReport chain = fidelity_bound_chain(gen_haar_pure(8, 6, 351));
        CHECK(chain.all_hold);
        // For pure states the final identity reads Σ|G_ij|, i≠j.
        const Ensemble s = gen_haar_pure(8, 6, 351);
        const GramMatrix g = build_gram(s);
        double expected = 0.0;
        for (int i = 0; i < 6; ++i) {
            for (int j = 0; j < 6; ++j) {
                if (i != j) {
                    expected += std::abs(g.entries()(i, j));
                }
            }
        }
        CHECK(chain.fidelity_sum == Catch::Approx(expected).margin(1e-9));
    }
    SECTION("orthonormal ensemble collapses the whole chain to zero") {
        const ChainReport chain = fidelity_bound_chain(gen_equal_overlap(4, 0.0));
        CHECK(chain.all_hold);
        CHECK(chain.worst_case_error == Catch::Approx(0.0).margin(1e-10));
        CHECK(chain.fidelity_sum == Catch::Approx(0.0).margin(1e-10));
    }
}

TEST_CASE("measured epsilon keeps both conventions apart", "[bounds]") {
    const Ensemble s = gen_equal_overlap(4, 0.5);
    const EpsilonReport eps = measured_epsilon(s);
    CHECK(eps.max_fidelity == Catch::Approx(0.5).margin(1e-10));
    CHECK(eps.max_overlap == Catch::Approx(0.25).margin(1e-10));
    CHECK(eps.eps_fidelity == Catch::Approx(0.5).margin(1e-10));
    CHECK(eps.eps_overlap == Catch::Approx(0.75).margin(1e-10));

    // Duplicates drive both epsilons to zero.
    const Vector psi = oracles::random_unit_vector(3, 361);
    std::vector<DensityMatrix> dup;
    dup.push_back(DensityMatrix::pure(psi));
    dup.push_back(DensityMatrix::pure(psi));
    const EpsilonReport zero = measured_epsilon(Ensemble(std::move(dup)));
    CHECK(zero.eps_fidelity == Catch::Approx(0.0).margin(1e-10));
    CHECK(zero.eps_overlap == Catch::Approx(0.0).margin(1e-10));
}
