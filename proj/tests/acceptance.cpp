// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Every tolerance is pinned here; nothing is adaptive.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pgmkit/commands.hpp"
#include "pgmkit/ensemble_io.hpp"
#include "pgmkit/protocol.hpp"

using namespace pgmkit;

namespace {

struct Criterion {
    int id;
    const char* name;
    bool pass;
    std::string detail;
};

std::vector<Criterion> results;

void record(int id, const char* name, bool pass, std::string detail) {
    results.push_back(Criterion{id, name, pass, std::move(detail)});
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer), pattern, a, b);
    return std::string(buffer);
}

DensityMatrix random_density(int d, int rank, std::uint64_t seed) {
    const Matrix psd = oracles::random_psd(d, rank, seed);
    return DensityMatrix::validate(psd / psd.trace().real(), 1e-9);
}

/// The shared corpus for criteria 1-3: 50 mixed ensembles, d ≤ 8, n ≤ 6,
/// state ranks sweeping 1..d. Fixed seeds; regenerated identically each run.
std::vector<Ensemble> mixed_corpus() {
    std::vector<Ensemble> corpus;
    corpus.reserve(50);
    for (int t = 0; t < 50; ++t) {
        const int d = 2 + t % 7;                   // 2..8
        const int n = 2 + t % 5;                   // 2..6
        std::vector<DensityMatrix> states;
        for (int i = 0; i < n; ++i) {
            const int rank = 1 + (t + i) % d;      // 1..d
            states.push_back(random_density(
                d, rank, 10'000 + 100 * static_cast<std::uint64_t>(t) +
                             static_cast<std::uint64_t>(i)));
        }
        corpus.push_back(Ensemble(std::move(states)));
    }
    return corpus;
}

void criterion_1_2_3(const std::vector<Ensemble>& corpus) {
    double worst_completeness = 0.0;
    double worst_route_diff = 0.0;
    bool chain_ok = true;
    std::string chain_detail;

    for (std::size_t t = 0; t < corpus.size(); ++t) {
        const Ensemble& s = corpus[t];
        const Povm povm = build_pgm(s);
        Matrix sum = Matrix::Zero(s.dim(), s.dim());
        for (const Matrix& element : povm.elements) {
            sum += element;
        }
        worst_completeness =
            std::max(worst_completeness, (sum - povm.support_projector).norm());

        const ConfusionMatrix direct = confusion_matrix(s, ConfusionMethod::direct);
        const ConfusionMatrix via_gram = confusion_matrix(s, ConfusionMethod::gram);
        worst_route_diff = std::max(
            worst_route_diff,
            (direct.entries() - via_gram.entries()).cwiseAbs().maxCoeff());

        const ChainReport chain = fidelity_bound_chain(s);
        if (!chain.all_hold) {
            chain_ok = false;
            for (const ChainLink& link : chain.links) {
                if (!link.holds) {
                    chain_detail = "ensemble " + std::to_string(t) +
                                   " breaks link " + link.name;
                }
            }
        }
    }

    record(1, "povm-completeness", worst_completeness <= 1e-10,
           fmt("max residual %.2e (limit 1e-10) over 50 ensembles",
               worst_completeness));
    record(2, "confusion-route-agreement", worst_route_diff <= 1e-9,
           fmt("max entrywise gap %.2e (limit 1e-9)", worst_route_diff));

    // Near-orthogonal special case: 4 pure states, overlaps ≤ 1/48,
    // measured worst-case error must stay under 1/3.
    const int n = 4;
    std::vector<DensityMatrix> nearly;
    const Vector ones = Vector::Ones(n);
    for (int i = 0; i < n; ++i) {
        Vector v = Vector::Zero(n);
        v(i) = 1.0;
        v += 0.005 * ones;
        nearly.push_back(DensityMatrix::pure(v / v.norm()));
    }
    const Ensemble near_ortho(std::move(nearly));
    double max_overlap = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            max_overlap = std::max(max_overlap, fidelity(near_ortho[i], near_ortho[j]));
        }
    }
    const double p_e =
        worst_case_error(confusion_matrix(near_ortho, ConfusionMethod::gram));
    const bool special_case_ok = max_overlap <= 1.0 / (3.0 * n * n) && p_e <= 1.0 / 3.0;
    record(3, "error-bound-chain",
           chain_ok && special_case_ok,
           chain_ok ? fmt("all links hold on 50 ensembles; near-orthogonal "
                          "instance: overlap %.4f, error %.4f",
                          max_overlap, p_e)
                    : chain_detail);
}

void criterion_4() {
    bool ok = true;
    std::string detail = "sandwich holds on 10 Haar ensembles";
    for (std::uint64_t seed = 0; seed < 10 && ok; ++seed) {
        const Ensemble s = gen_haar_pure(8, 5, 20'000 + seed);
        for (const BoundReport& r : spectral_sandwich(s)) {
            if (!r.holds) {
                ok = false;
                detail = "violated: " + r.name + fmt(" seed %.0f", double(seed));
            }
        }
    }

    // Tightness, orthonormal: both sides pin the success probability at 1.
    const Ensemble ortho = gen_equal_overlap(5, 0.0);
    for (const BoundReport& r : spectral_sandwich(ortho)) {
        if (std::abs(r.bound_value - 1.0) > 1e-12 ||
            std::abs(r.measured_value - 1.0) > 1e-12) {
            ok = false;
            detail = "orthonormal tightness failed at " + r.name;
        }
    }

    // Tightness, identical maximally mixed states: lower bound exactly 1/n
    // and ||G|| = 1.
    const int n = 4;
    std::vector<DensityMatrix> mm;
    for (int i = 0; i < n; ++i) {
        mm.push_back(DensityMatrix::validate(Matrix::Identity(n, n) / double(n)));
    }
    const Ensemble degenerate(std::move(mm));
    const GramMatrix g = build_gram(degenerate);
    if (std::abs(gram_spectral(g).op_norm - 1.0) > 1e-12) {
        ok = false;
        detail = fmt("degenerate ensemble: ||G|| = %.15f is not 1",
                     gram_spectral(g).op_norm);
    }
    for (const BoundReport& r : spectral_sandwich(degenerate, g)) {
        if (r.name.rfind("spectral_lower", 0) == 0 &&
            (std::abs(r.bound_value - 0.25) > 1e-12 ||
             std::abs(r.measured_value - 0.25) > 1e-12)) {
            ok = false;
            detail = "1/n tightness failed at " + r.name;
        }
    }
    record(4, "spectral-sandwich", ok, detail);
}

void criterion_5() {
    const double c = 1.0 / std::sqrt(2.0);
    Vector a = Vector::Zero(2);
    a(0) = 1.0;
    Vector b(2);
    b << c, std::sqrt(1.0 - c * c);
    std::vector<DensityMatrix> states;
    states.push_back(DensityMatrix::pure(a));
    states.push_back(DensityMatrix::pure(b));
    const ConfusionMatrix confusion =
        confusion_matrix(Ensemble(std::move(states)), ConfusionMethod::gram);
    const double expected = oracles::two_state_success(c);
    const double gap = std::max(std::abs(confusion(0, 0) - expected),
                                std::abs(confusion(1, 1) - expected));
    record(5, "two-state-closed-form", gap <= 1e-9,
           fmt("diagonal within %.2e of %.10f", gap, expected));
}

void criterion_6() {
    const Ensemble s = gen_haar_pure(8, 8, 30'001);
    const EpsilonReport eps = measured_epsilon(s);
    const CopyBudget budget = multicopy_pgm_budget(s.size(), eps.eps_fidelity, 0.01);
    const GramMatrix g = build_gram(s);
    const double error = multicopy_pgm_pure(g, budget.k).second;
    record(6, "multicopy-error-target", error <= 0.01,
           fmt("k = %.0f copies give worst-case error %.2e (target 1e-2)",
               double(budget.k), error));
}

void criterion_7() {
    const Ensemble s = gen_haar_pure(4, 4, 30'002);
    const GramMatrix g = build_gram(s);
    double worst = 0.0;
    for (int k : {2, 3}) {
        const auto powered = multicopy_pgm_pure(g, k);
        std::vector<DensityMatrix> big;
        for (int i = 0; i < s.size(); ++i) {
            big.push_back(tensor_power(s[i], k));
        }
        const ConfusionMatrix direct =
            confusion_matrix(Ensemble(std::move(big)), ConfusionMethod::direct);
        const ConfusionMatrix entrywise = confusion_from_gram(powered.first);
        worst = std::max(
            worst, (direct.entries() - entrywise.entries()).cwiseAbs().maxCoeff());
    }
    record(7, "gram-power-exactness", worst <= 1e-8,
           fmt("max confusion gap %.2e across k = 2, 3 (limit 1e-8)", worst));
}

void criterion_8() {
    const Ensemble s = gen_haar_pure(32, 16, 30'003);
    const EpsilonReport eps = measured_epsilon(s);
    const ProtocolReport report =
        estimate_failure(s, 0.1, eps.eps_overlap, 2000, 90'210, false, 1);
    const bool rate_ok =
        report.worst_case_failure <= 0.1 + 3.0 * report.ci_halfwidth;
    const bool copies_ok =
        report.mean_copies_used <= static_cast<double>(report.budget.total);
    record(8, "two-stage-monte-carlo", rate_ok && copies_ok,
           fmt("worst failure %.4f (cap %.4f)", report.worst_case_failure,
               0.1 + 3.0 * report.ci_halfwidth) +
               fmt(", mean copies %.1f of %.0f", report.mean_copies_used,
                   double(report.budget.total)));
}

void criterion_9() {
    int violations = 0;
    for (std::uint64_t pair = 0; pair < 100; ++pair) {
        const Matrix a = oracles::random_psd(8, 8, 40'000 + 2 * pair);
        const Matrix b = oracles::random_psd(8, 8, 40'001 + 2 * pair);
        if (!sqrt_perturbation_check(a, b).holds) {
            ++violations;
        }
    }
    record(9, "sqrt-perturbation", violations == 0,
           fmt("%.0f violations in 100 random PSD pairs", double(violations)));
}

void criterion_10() {
    std::vector<double> norms;
    norms.reserve(100);
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const Ensemble s = gen_haar_pure(64, 64, 50'000 + seed);
        norms.push_back(gram_spectral(build_gram(s)).op_norm);
    }
    std::sort(norms.begin(), norms.end());
    const double median = 0.5 * (norms[49] + norms[50]);
    const double p95 = norms[94];
    const bool ok = median >= 3.2 && median <= 4.8 && p95 <= 5.5;
    record(10, "gram-norm-concentration", ok,
           fmt("median %.3f (band [3.2, 4.8]), 95th pct %.3f (cap 5.5)", median,
               p95));
}

void criterion_11() {
    const int n = 64;
    const double c = 0.5;
    const Ensemble s = gen_equal_overlap(n, c);
    const GramMatrix g = build_gram(s);
    const BoundReport norm_bound = gram_norm_upper(g);
    const ConfusionMatrix confusion = confusion_from_gram(g);
    double min_diag = 1.0;
    for (int i = 0; i < n; ++i) {
        min_diag = std::min(min_diag, confusion(i, i));
    }
    const double floor = 1.0 - c - 5.0 / n;
    const bool ok = std::abs(norm_bound.slack) <= 1e-9 && min_diag >= floor;
    record(11, "equal-overlap-exhibit", ok,
           fmt("norm-bound slack %.2e; min diagonal %.6f", norm_bound.slack,
               min_diag) +
               fmt(" >= floor %.6f", floor));
}

void criterion_12() {
    const std::filesystem::path file =
        std::filesystem::temp_directory_path() / "pgmkit_acceptance_sim.json";
    write_ensemble(file, gen_haar_pure(16, 8, 30'004));
    const RunResult a = cmd_simulate(file, 0.1, std::nullopt, 300, 11, false, 1);
    const RunResult b = cmd_simulate(file, 0.1, std::nullopt, 300, 11, false, 1);
    const RunResult c = cmd_simulate(file, 0.1, std::nullopt, 300, 11, false, 4);
    const std::string ra = render_report(a.report, ReportFormat::structured);
    const std::string rb = render_report(b.report, ReportFormat::structured);
    const std::string rc = render_report(c.report, ReportFormat::structured);
    std::error_code ec;
    std::filesystem::remove(file, ec);
    const bool ok = ra == rb && ra == rc && !ra.empty();
    record(12, "simulate-determinism", ok,
           ok ? "byte-identical across repeat runs and 1 vs 4 threads"
              : "reports differ between runs");
}

} // namespace

int main() {
    const std::vector<Ensemble> corpus = mixed_corpus();
    criterion_1_2_3(corpus);
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();

    std::sort(results.begin(), results.end(),
              [](const Criterion& a, const Criterion& b) { return a.id < b.id; });
    int failures = 0;
    for (const Criterion& r : results) {
        if (!r.pass) {
            ++failures;
        }
        std::printf("%s %2d %-28s %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name,
                    r.detail.c_str());
    }
    std::printf("%d/%d criteria passed\n", int(results.size()) - failures,
                int(results.size()));
    return failures == 0 ? 0 : 1;
}
