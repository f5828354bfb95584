// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#include "pgmkit/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace pgmkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_trial_seed(std::uint64_t master, std::uint64_t index,
                                std::uint64_t trial) {
    std::uint64_t h = splitmix64(master);
    h = splitmix64(h ^ index);
    h = splitmix64(h ^ trial);
    return h;
}

std::pair<GramMatrix, double> multicopy_pgm_pure(const GramMatrix& g, std::int64_t k) {
    if (!g.is_pure()) {
        throw Error(errc::unsupported_mixed,
                    "entrywise Gram powers are exact only for pure ensembles");
    }
    if (k < 1) {
        throw Error(errc::invalid_argument, "copy count must be at least 1");
    }
    const int n = g.states();
    Matrix powered(n, n);
    for (int j = 0; j < n; ++j) {
        powered(j, j) = 1.0;
        for (int i = j + 1; i < n; ++i) {
            // Binary exponentiation of the overlap <ψ_i|ψ_j>^k.
            Complex base = g.entries()(i, j);
            Complex acc = 1.0;
            for (std::int64_t e = k; e > 0; e >>= 1) {
                if (e & 1) {
                    acc *= base;
                }
                base *= base;
            }
            powered(i, j) = acc;
            powered(j, i) = std::conj(acc);
        }
    }
    std::vector<BlockRange> blocks(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        blocks[static_cast<std::size_t>(i)] = BlockRange{i, 1};
    }
    GramMatrix result(std::move(powered), std::move(blocks));
    const double error = worst_case_error(confusion_from_gram(result));
    return {std::move(result), error};
}

int pgm_sample(const ConfusionMatrix& c, int true_index, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    const int n = c.size();
    double cum = 0.0;
    for (int i = 0; i < n; ++i) {
        cum += c(i, true_index);
        if (u < cum) {
            return i;
        }
    }
    return n - 1; // the column sums to 1 only up to rounding
}

namespace {

ConfusionMatrix pure_confusion(const Ensemble& s, double cutoff) {
    if (!s.all_pure()) {
        throw Error(errc::unsupported_mixed,
                    "the two-stage protocol is defined for pure ensembles");
    }
    return confusion_matrix(s, ConfusionMethod::gram, cutoff);
}

} // namespace

TwoStageContext::TwoStageContext(const Ensemble& s, double cutoff)
    : confusion_(pure_confusion(s, cutoff)),
      accept_prob_(RealMatrix::Zero(s.size(), s.size())) {
    const GramMatrix g = build_gram(s, cutoff);
    spectral_ = gram_spectral(g, cutoff);
    const int n = s.size();
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            accept_prob_(i, j) =
                i == j ? 1.0 : std::min(1.0, std::norm(g.entries()(i, j)));
        }
    }
}

TrialOutcome run_two_stage_trial(const TwoStageContext& ctx, int true_index,
                                 const CopyBudget& budget, bool dedup,
                                 std::mt19937_64& rng) {
    if (true_index < 0 || true_index >= ctx.states()) {
        throw Error(errc::invalid_argument, "true index out of range");
    }
    if (budget.k < 1 || budget.l < 1) {
        throw Error(errc::invalid_argument,
                    "the two-stage protocol needs k >= 1 and l >= 1");
    }

    TrialOutcome out;
    out.true_index = true_index;
    out.reported = kFail;
    out.accepted_group = -1;
    out.pgm_outcomes.reserve(static_cast<std::size_t>(budget.k));
    for (std::int64_t t = 0; t < budget.k; ++t) {
        out.pgm_outcomes.push_back(pgm_sample(ctx.confusion(), true_index, rng));
    }

    // Candidates are tested in outcome order; dedup collapses repeats onto
    // their first appearance so each hypothesis is tested at most once.
    std::vector<int> candidates;
    if (dedup) {
        candidates.reserve(static_cast<std::size_t>(ctx.states()));
        for (int o : out.pgm_outcomes) {
            if (std::find(candidates.begin(), candidates.end(), o) == candidates.end()) {
                candidates.push_back(o);
            }
        }
    } else {
        candidates = out.pgm_outcomes;
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::int64_t groups_tested = 0;
    for (std::size_t gi = 0; gi < candidates.size(); ++gi) {
        const int candidate = candidates[gi];
        ++groups_tested;
        const double p = ctx.accept_probability(candidate, true_index);
        bool all_accept = true;
        if (p < 1.0) { // the true hypothesis accepts surely; no draws needed
            for (std::int64_t t = 0; t < budget.l; ++t) {
                if (!(unit(rng) < p)) {
                    all_accept = false;
                }
            }
        }
        if (all_accept) {
            out.reported = candidate;
            out.accepted_group = static_cast<int>(gi);
            break;
        }
    }
    out.copies_used = budget.k + groups_tested * budget.l;
    return out;
}

TrialOutcome run_two_stage_trial(const Ensemble& s, int true_index,
                                 const CopyBudget& budget, bool dedup,
                                 std::mt19937_64& rng) {
    return run_two_stage_trial(TwoStageContext(s), true_index, budget, dedup, rng);
}

ProtocolReport estimate_failure(const Ensemble& s, double delta, double epsilon,
                                std::int64_t trials, std::uint64_t seed,
                                bool dedup, int threads) {
    if (trials < 100) {
        throw Error(errc::invalid_argument,
                    "failure estimation needs at least 100 trials per index");
    }
    const TwoStageContext ctx(s);
    const CopyBudget budget = two_stage_budget(ctx.gram_norm(), epsilon, delta);
    const EpsilonReport eps = measured_epsilon(s);

    const int n = ctx.states();
    const std::int64_t total = static_cast<std::int64_t>(n) * trials;
    std::vector<std::uint8_t> failed(static_cast<std::size_t>(total));
    std::vector<std::int64_t> copies(static_cast<std::size_t>(total));

    // Every trial owns a seed derived from (master, index, trial), and the
    // flat result arrays are written in disjoint slices, so the aggregate is
    // identical for any thread count.
    auto run_slice = [&](std::int64_t begin, std::int64_t end) {
        for (std::int64_t f = begin; f < end; ++f) {
            const int index = static_cast<int>(f / trials);
            const std::int64_t trial = f % trials;
            std::mt19937_64 rng(derive_trial_seed(
                seed, static_cast<std::uint64_t>(index),
                static_cast<std::uint64_t>(trial)));
            const TrialOutcome out =
                run_two_stage_trial(ctx, index, budget, dedup, rng);
            failed[static_cast<std::size_t>(f)] = out.reported != index ? 1 : 0;
            copies[static_cast<std::size_t>(f)] = out.copies_used;
        }
    };

    const int workers = std::clamp(threads, 1, 64);
    if (workers == 1) {
        run_slice(0, total);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        const std::int64_t chunk = (total + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::int64_t begin = std::min<std::int64_t>(w * chunk, total);
            const std::int64_t end = std::min<std::int64_t>(begin + chunk, total);
            if (begin < end) {
                pool.emplace_back(run_slice, begin, end);
            }
        }
        for (auto& worker : pool) {
            worker.join();
        }
    }

    ProtocolReport report;
    report.per_index_failure.resize(static_cast<std::size_t>(n));
    report.worst_case_failure = 0.0;
    int worst_index = 0;
    for (int i = 0; i < n; ++i) {
        std::int64_t fails = 0;
        for (std::int64_t t = 0; t < trials; ++t) {
            fails += failed[static_cast<std::size_t>(i * trials + t)];
        }
        const double rate = static_cast<double>(fails) / static_cast<double>(trials);
        report.per_index_failure[static_cast<std::size_t>(i)] = rate;
        if (rate > report.worst_case_failure) {
            report.worst_case_failure = rate;
            worst_index = i;
        }
    }
    const double p = report.per_index_failure[static_cast<std::size_t>(worst_index)];
    report.ci_halfwidth =
        1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
    report.trials = trials;
    report.seed = seed;
    report.budget = budget;
    double copies_sum = 0.0;
    std::int64_t copies_max = 0;
    for (std::int64_t c : copies) {
        copies_sum += static_cast<double>(c);
        copies_max = std::max(copies_max, c);
    }
    report.mean_copies_used = copies_sum / static_cast<double>(total);
    report.max_copies_used = copies_max;
    report.measured_max_overlap = eps.max_overlap;
    report.epsilon_warning = eps.max_overlap > 1.0 - epsilon + 1e-12;
    return report;
}

} // namespace pgmkit
