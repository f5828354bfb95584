// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <limits>
#include <memory>
#include <mutex>
#include <vector>

#include "pgmkit/states.hpp"

namespace pgmkit {

struct BlockRange {
    int offset;
    int length;
};

/// Gram matrix of the weighted eigenvectors {√λ_ik |ψ_ik>} of an ensemble,
/// with one contiguous block of rows per state. For a pure ensemble this is
/// the n×n matrix of state overlaps. The spectrum is computed eagerly; the
/// PSD square root is computed once on first use and cached.
class GramMatrix {
  public:
    GramMatrix(Matrix entries, std::vector<BlockRange> blocks,
               double cutoff = kSupportCutoff);

    GramMatrix(GramMatrix&&) noexcept = default;
    GramMatrix& operator=(GramMatrix&&) noexcept = default;

    int size() const { return static_cast<int>(entries_.rows()); }
    int states() const { return static_cast<int>(blocks_.size()); }
    bool is_pure() const { return size() == states(); }

    const Matrix& entries() const { return entries_; }
    const BlockRange& block(int i) const { return blocks_[static_cast<std::size_t>(i)]; }
    const EigSystem& eig() const { return eig_; }

    /// The (i,j) block of an R×R matrix laid out like this Gram matrix.
    Eigen::Block<const Matrix> block_of(const Matrix& m, int i, int j) const;

    /// √G, computed at most once.
    const Matrix& sqrt() const;

  private:
    struct SqrtCache {
        std::once_flag flag;
        Matrix value;
    };

    Matrix entries_;
    std::vector<BlockRange> blocks_;
    EigSystem eig_;
    std::unique_ptr<SqrtCache> sqrt_cache_;
};

GramMatrix build_gram(const Ensemble& s, double cutoff = kSupportCutoff);

/// The pretty good measurement: elements μ_i = Σ^{-1/2} ρ_i Σ^{-1/2} with
/// Σ = Σ_i ρ_i inverted on its support. The elements sum to the support
/// projector.
struct Povm {
    std::vector<Matrix> elements;
    Matrix support_projector;
};

Povm build_pgm(const Ensemble& s, double cutoff = kSupportCutoff);

enum class ConfusionMethod {
    direct, // tr μ_i ρ_j from the measurement operators
    gram,   // squared Frobenius norm of the (i,j) block of √G
};

/// Column-stochastic matrix of outcome probabilities: C[i][j] is the
/// probability that the PGM reports i when the true state is ρ_j.
class ConfusionMatrix {
  public:
    explicit ConfusionMatrix(RealMatrix entries);

    int size() const { return static_cast<int>(entries_.rows()); }
    double operator()(int i, int j) const { return entries_(i, j); }
    const RealMatrix& entries() const { return entries_; }

  private:
    RealMatrix entries_;
};

ConfusionMatrix confusion_matrix(const Ensemble& s, ConfusionMethod method,
                                 double cutoff = kSupportCutoff);

/// The Gram route on a prebuilt matrix (reuses the cached √G).
ConfusionMatrix confusion_from_gram(const GramMatrix& g);

/// Worst-case error probability max_i (1 - C[i][i]).
double worst_case_error(const ConfusionMatrix& c);

struct GramSpectral {
    double op_norm;  // λ_max(G)
    double inv_norm; // 1/λ_min(G), or +inf when singular at the cutoff
    double min_eig;  // λ_min(G)
    bool invertible;
};

GramSpectral gram_spectral(const GramMatrix& g, double cutoff = kSupportCutoff);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace pgmkit
