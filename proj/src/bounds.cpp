// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#include "pgmkit/bounds.hpp"

#include <cmath>
#include <string>

namespace pgmkit {

namespace {

// Ceiling with a hair of slack, so a formula value that lands a few ulp
// above an integer does not inflate the copy count.
std::int64_t ceil_with_slack(double x) {
    return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

void check_epsilon_delta(double epsilon, double delta) {
    if (epsilon == 0.0) {
        throw Error(errc::zero_epsilon,
                    "epsilon is zero (the ensemble admits identical states)");
    }
    if (!(epsilon > 0.0) || epsilon > 1.0) {
        throw Error(errc::invalid_argument, "epsilon must lie in (0, 1]");
    }
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw Error(errc::invalid_argument, "delta must lie in (0, 1)");
    }
}

BoundReport upper_report(std::string name, double bound, double measured,
                         double tol = kSlackTol) {
    const bool vacuous = !(bound < 1.0) || std::isinf(bound);
    return BoundReport{std::move(name), bound, measured,
                       measured <= bound + tol, bound - measured, vacuous};
}

double ordered_pair_fidelity_sum(const Ensemble& s) {
    double sum = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        for (int j = 0; j < s.size(); ++j) {
            if (i != j) {
                sum += fidelity(s[i], s[j]);
            }
        }
    }
    return sum;
}

} // namespace

BoundReport fidelity_sum_bound(const Ensemble& s) {
    return fidelity_sum_bound(s, build_gram(s));
}

BoundReport fidelity_sum_bound(const Ensemble& s, const GramMatrix& g) {
    const double bound = ordered_pair_fidelity_sum(s);
    const double measured = worst_case_error(confusion_from_gram(g));
    return upper_report("fidelity_sum", bound, measured);
}

std::vector<BoundReport> spectral_sandwich(const Ensemble& s) {
    return spectral_sandwich(s, build_gram(s));
}

std::vector<BoundReport> spectral_sandwich(const Ensemble& s, const GramMatrix& g) {
    const GramSpectral spectral = gram_spectral(g);
    const ConfusionMatrix confusion = confusion_from_gram(g);
    std::vector<BoundReport> reports;
    reports.reserve(2 * static_cast<std::size_t>(s.size()));
    for (int i = 0; i < s.size(); ++i) {
        const double purity = s[i].purity();
        const double success = confusion(i, i);
        const double lower = purity / spectral.op_norm;
        reports.push_back(BoundReport{
            "spectral_lower[" + std::to_string(i) + "]",
            lower,
            success,
            success >= lower - kSlackTol,
            success - lower,
            false,
        });
        const double upper = spectral.invertible ? spectral.inv_norm * purity : kInf;
        reports.push_back(BoundReport{
            "spectral_upper[" + std::to_string(i) + "]",
            upper,
            success,
            spectral.invertible ? success <= upper + kSlackTol : true,
            upper - success,
            !spectral.invertible,
        });
    }
    return reports;
}

CopyBudget multicopy_pgm_budget(int n, double epsilon, double delta) {
    if (n < 2) {
        throw Error(errc::invalid_argument, "the budget needs at least two states");
    }
    check_epsilon_delta(epsilon, delta);
    const std::int64_t k =
        ceil_with_slack((2.0 / epsilon) * std::log(static_cast<double>(n) / delta));
    return CopyBudget{k, 0, k, epsilon, delta};
}

CopyBudget two_stage_budget(double gram_norm, double epsilon, double delta) {
    if (!(gram_norm >= 1.0 - 1e-12)) {
        throw Error(errc::invalid_argument,
                    "a pure-state Gram matrix has operator norm at least 1");
    }
    check_epsilon_delta(epsilon, delta);
    const std::int64_t k = ceil_with_slack(gram_norm * std::log(2.0 / delta));
    const std::int64_t l =
        ceil_with_slack(std::log(2.0 * static_cast<double>(k) / delta) / epsilon);
    return CopyBudget{k, l, k * (l + 1), epsilon, delta};
}

BoundReport gram_norm_upper(const GramMatrix& g) {
    if (!g.is_pure()) {
        throw Error(errc::unsupported_mixed,
                    "the norm bound needs a pure ensemble (unit-diagonal Gram)");
    }
    const int n = g.states();
    double max_off = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                max_off = std::max(max_off, std::abs(g.entries()(i, j)));
            }
        }
    }
    const double bound = 1.0 + (n - 1) * max_off;
    const double measured = gram_spectral(g).op_norm;
    // Norm bounds are informative at any size; never vacuous.
    BoundReport report = upper_report("gram_norm_upper", bound, measured);
    report.vacuous = false;
    return report;
}

BoundReport sqrt_perturbation_check(const Matrix& a, const Matrix& b, double cutoff) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(errc::dimension_mismatch,
                    "perturbation check needs matrices of equal dimension");
    }
    const Matrix root_a = psd_sqrt(a, cutoff);
    const Matrix root_b = psd_sqrt(b, cutoff);
    const double lhs = (root_a - root_b).norm();
    const double rhs = std::sqrt(trace_norm(a - b));
    BoundReport report = upper_report("sqrt_perturbation", rhs, lhs);
    report.vacuous = false;
    return report;
}

ChainReport fidelity_bound_chain(const Ensemble& s) {
    return fidelity_bound_chain(s, build_gram(s));
}

ChainReport fidelity_bound_chain(const Ensemble& s, const GramMatrix& g) {
    const int n = g.states();
    const Matrix& root = g.sqrt();

    ChainReport chain;
    chain.worst_case_error = worst_case_error(confusion_from_gram(g));

    chain.offdiag_sqrt_sq_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                chain.offdiag_sqrt_sq_sum += g.block_of(root, i, j).squaredNorm();
            }
        }
    }

    // Λ keeps the diagonal blocks; √Λ is the blockwise square root.
    const int r = g.size();
    Matrix lambda = Matrix::Zero(r, r);
    Matrix root_lambda = Matrix::Zero(r, r);
    for (int i = 0; i < n; ++i) {
        const BlockRange& b = g.block(i);
        const Matrix diag_block = g.block_of(g.entries(), i, i);
        lambda.block(b.offset, b.offset, b.length, b.length) = diag_block;
        root_lambda.block(b.offset, b.offset, b.length, b.length) = psd_sqrt(diag_block);
    }
    chain.sqrt_diff_sq = (root - root_lambda).squaredNorm();

    chain.delta_trace_norm = trace_norm(g.entries() - lambda);

    chain.offdiag_block_trace_sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) {
                chain.offdiag_block_trace_sum += trace_norm(g.block_of(g.entries(), i, j));
            }
        }
    }

    chain.fidelity_sum = ordered_pair_fidelity_sum(s);

    auto link = [](std::string name, double lhs, double rhs, bool equality) {
        const bool holds = equality ? std::abs(lhs - rhs) <= kChainTol
                                    : lhs <= rhs + kChainTol;
        return ChainLink{std::move(name), lhs, rhs, equality, holds};
    };
    chain.links = {
        link("worst_case_le_offdiag_sum", chain.worst_case_error,
             chain.offdiag_sqrt_sq_sum, false),
        link("offdiag_sum_le_sqrt_diff", chain.offdiag_sqrt_sq_sum,
             chain.sqrt_diff_sq, false),
        link("sqrt_diff_le_delta_trace", chain.sqrt_diff_sq,
             chain.delta_trace_norm, false),
        link("delta_trace_le_block_sum", chain.delta_trace_norm,
             chain.offdiag_block_trace_sum, false),
        link("block_sum_eq_fidelity_sum", chain.offdiag_block_trace_sum,
             chain.fidelity_sum, true),
    };
    chain.all_hold = true;
    for (const auto& l : chain.links) {
        chain.all_hold = chain.all_hold && l.holds;
    }
    return chain;
}

EpsilonReport measured_epsilon(const Ensemble& s) {
    double max_fidelity = 0.0;
    double max_overlap = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        for (int j = i + 1; j < s.size(); ++j) {
            const double f = fidelity(s[i], s[j]);
            max_fidelity = std::max(max_fidelity, f);
            max_overlap = std::max(
                max_overlap, trace_product_real(s[i].matrix(), s[j].matrix()));
        }
    }
    return EpsilonReport{max_fidelity, max_overlap,
                         1.0 - max_fidelity, 1.0 - max_overlap};
}

} // namespace pgmkit
