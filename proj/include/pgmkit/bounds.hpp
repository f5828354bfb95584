// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pgmkit/gram.hpp"

namespace pgmkit {

/// Absolute slack allowed on every inequality check.
inline constexpr double kSlackTol = 1e-9;
/// Looser tolerance for the multi-step chain, where several spectral
/// computations stack up.
inline constexpr double kChainTol = 1e-8;

/// One checked inequality: `holds` is true when the stated direction is
/// satisfied within kSlackTol, `slack` is the margin (nonnegative when the
/// bound holds exactly). Bounds that cannot bind — error-probability bounds
/// at or above 1, or infinite bounds — are flagged vacuous.
struct BoundReport {
    std::string name;
    double bound_value;
    double measured_value;
    bool holds;
    double slack;
    bool vacuous = false;
};

/// Copy accounting for a measurement strategy: k copies measured by the PGM
/// plus, when used, l accept/reject tests for each of the k outcome groups.
struct CopyBudget {
    std::int64_t k;
    std::int64_t l;
    std::int64_t total; // k * (l + 1)
    double epsilon;
    double delta;
};

/// The pairwise-fidelity bound P_E(S) <= Σ_{i≠j} F(ρ_i, ρ_j), summed over
/// ordered pairs. Measured side: worst-case error of the PGM confusion
/// matrix.
BoundReport fidelity_sum_bound(const Ensemble& s);
BoundReport fidelity_sum_bound(const Ensemble& s, const GramMatrix& g);

/// The spectral sandwich ||G||^{-1} tr ρ_i² <= tr μ_i ρ_i <= ||G^{-1}|| tr ρ_i²,
/// two reports per state. The upper report is vacuous when G is singular.
std::vector<BoundReport> spectral_sandwich(const Ensemble& s);
std::vector<BoundReport> spectral_sandwich(const Ensemble& s, const GramMatrix& g);

/// Copies sufficient for the multi-copy PGM on any ensemble with pairwise
/// fidelities at most 1-ε: k = ⌈(2/ε) ln(n/δ)⌉. Throws errc::zero_epsilon
/// when ε = 0 (duplicate states).
CopyBudget multicopy_pgm_budget(int n, double epsilon, double delta);

/// Copies for the two-stage pure-state protocol: k = ⌈||G|| ln(2/δ)⌉ PGM
/// outcomes, then l = ⌈ln(2k/δ)/ε⌉ projective tests per outcome group.
CopyBudget two_stage_budget(double gram_norm, double epsilon, double delta);

/// ||G|| <= 1 + (n-1) max_{i≠j} |G_ij| for pure ensembles (unit diagonal).
/// Throws errc::unsupported_mixed otherwise.
BoundReport gram_norm_upper(const GramMatrix& g);

/// Square-root perturbation bound in the Frobenius instantiation:
/// ||√A - √B||_F <= sqrt(||A - B||_1) for PSD A, B.
BoundReport sqrt_perturbation_check(const Matrix& a, const Matrix& b,
                                    double cutoff = kSupportCutoff);

struct ChainLink {
    std::string name;
    double lhs;
    double rhs;
    bool equality; // the final link is an identity, not an inequality
    bool holds;
};

/// Every intermediate value of the worst-case-error bound chain
///   P_E(S) <= Σ_{i≠j}||√G^(ij)||_F² <= ||√G - √Λ||_F² <= ||Δ||_1
///          <= Σ_{i≠j}||G^(ij)||_1 = Σ_{i≠j}F(ρ_i,ρ_j),
/// where Λ keeps the diagonal blocks of G and Δ the off-diagonal ones.
/// A failure localizes to a single link.
struct ChainReport {
    double worst_case_error;
    double offdiag_sqrt_sq_sum;
    double sqrt_diff_sq;
    double delta_trace_norm;
    double offdiag_block_trace_sum;
    double fidelity_sum;
    std::vector<ChainLink> links;
    bool all_hold;
};

ChainReport fidelity_bound_chain(const Ensemble& s);
ChainReport fidelity_bound_chain(const Ensemble& s, const GramMatrix& g);

/// ε measured from the ensemble under both premises: 1 - max F (fidelity
/// convention) and 1 - max tr ρ_i ρ_j (overlap convention; equals 1 - max F²
/// for pure states). The two differ for the same ensemble and are never
/// silently interchanged.
struct EpsilonReport {
    double max_fidelity;
    double max_overlap;
    double eps_fidelity; // 1 - max_fidelity
    double eps_overlap;  // 1 - max_overlap
};

EpsilonReport measured_epsilon(const Ensemble& s);

} // namespace pgmkit
