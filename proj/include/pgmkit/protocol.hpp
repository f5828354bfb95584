// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "pgmkit/bounds.hpp"

namespace pgmkit {

/// Outcome index used when the two-stage protocol reports failure.
inline constexpr int kFail = -1;

/// Deterministic per-trial seed derived from (master seed, true index,
/// trial index), so trial results are independent of execution order.
std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t index,
                                std::uint64_t trial);

/// Entrywise k-th power of a pure-state Gram matrix — the exact Gram matrix
/// of the k-fold tensor powers — together with the worst-case PGM error of
/// the powered ensemble. Polynomial in n; never touches dimension d^k.
/// Throws errc::unsupported_mixed on a mixed-ensemble Gram matrix.
std::pair<GramMatrix, double> multicopy_pgm_pure(const GramMatrix& g, std::int64_t k);

/// Born-rule sample of the PGM outcome on input ρ_{true_index}: returns i
/// with probability C[i][true_index].
int pgm_sample(const ConfusionMatrix& c, int true_index, std::mt19937_64& rng);

/// Trace of one two-stage trial.
struct TrialOutcome {
    int true_index;
    int reported; // kFail when no group accepted
    std::vector<int> pgm_outcomes;
    std::int64_t copies_used;
    int accepted_group; // position in the tested group order, -1 when none
};

/// Precomputed tables for simulating the two-stage protocol on a pure
/// ensemble: the single-copy confusion matrix for stage-1 sampling and the
/// pairwise overlap probabilities |<ψ_i|ψ_j>|² for the stage-2 tests.
class TwoStageContext {
  public:
    explicit TwoStageContext(const Ensemble& s, double cutoff = kSupportCutoff);

    int states() const { return confusion_.size(); }
    double gram_norm() const { return spectral_.op_norm; }
    const ConfusionMatrix& confusion() const { return confusion_; }

    /// Probability that a projective test onto ρ_outcome accepts the true
    /// state. Exactly 1 when outcome == true_index.
    double accept_probability(int outcome, int true_index) const {
        return accept_prob_(outcome, true_index);
    }

  private:
    ConfusionMatrix confusion_;
    RealMatrix accept_prob_;
    GramSpectral spectral_;
};

/// One run of the two-stage protocol: k PGM samples, then groups of l
/// accept/reject tests walked in outcome order; the first fully accepting
/// group is reported, or kFail when none accepts. With dedup, duplicate
/// outcomes share a single group and the saved copies show up in
/// copies_used.
TrialOutcome run_two_stage_trial(const TwoStageContext& ctx, int true_index,
                                 const CopyBudget& budget, bool dedup,
                                 std::mt19937_64& rng);

/// Convenience overload that builds the context on the fly.
TrialOutcome run_two_stage_trial(const Ensemble& s, int true_index,
                                 const CopyBudget& budget, bool dedup,
                                 std::mt19937_64& rng);

/// Aggregated Monte Carlo estimate of the protocol failure probability.
struct ProtocolReport {
    std::vector<double> per_index_failure;
    double worst_case_failure;
    double ci_halfwidth; // 95% normal-approximation halfwidth at the worst index
    std::int64_t trials; // per true index
    std::uint64_t seed;
    CopyBudget budget;
    double mean_copies_used;
    std::int64_t max_copies_used;
    bool epsilon_warning;    // measured max overlap exceeds 1 - ε
    double measured_max_overlap;
};

/// Runs `trials` independent two-stage trials per true index with derived
/// per-trial seeds and aggregates failures (wrong answers and FAILs alike).
/// The report depends only on (s, delta, epsilon, trials, seed, dedup) —
/// `threads` changes wall time, never content. Requires trials >= 100.
ProtocolReport estimate_failure(const Ensemble& s, double delta, double epsilon,
                                std::int64_t trials, std::uint64_t seed,
                                bool dedup, int threads = 1);

} // namespace pgmkit
