// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#include "pgmkit/gram.hpp"

#include <cmath>
#include <utility>

namespace pgmkit {

GramMatrix::GramMatrix(Matrix entries, std::vector<BlockRange> blocks, double cutoff)
    : entries_(std::move(entries)),
      blocks_(std::move(blocks)),
      sqrt_cache_(std::make_unique<SqrtCache>()) {
    const Eigen::Index r = entries_.rows();
    if (entries_.cols() != r || r < 1) {
        throw Error(errc::invalid_argument, "Gram matrix must be square and nonempty");
    }
    if (blocks_.empty()) {
        throw Error(errc::invalid_argument, "Gram matrix needs a block index");
    }
    int expected_offset = 0;
    for (const auto& b : blocks_) {
        if (b.offset != expected_offset || b.length < 1) {
            throw Error(errc::invalid_argument, "Gram blocks must tile the rows contiguously");
        }
        expected_offset += b.length;
        const double diag_sum =
            entries_.diagonal().segment(b.offset, b.length).real().sum();
        if (std::abs(diag_sum - 1.0) > 1e-10) {
            throw Error(errc::invalid_argument,
                        "Gram block diagonal does not sum to the state trace");
        }
    }
    if (expected_offset != r) {
        throw Error(errc::invalid_argument, "Gram blocks must tile the rows exactly");
    }
    entries_ = 0.5 * (entries_ + entries_.adjoint()).eval();
    eig_ = hermitian_eig(entries_);
    const double lambda_max = std::max(eig_.eigenvalues.maxCoeff(), 0.0);
    if (eig_.eigenvalues.minCoeff() < -cutoff * lambda_max) {
        throw Error(errc::not_psd, "Gram matrix is not PSD within the cutoff slack");
    }
}

Eigen::Block<const Matrix> GramMatrix::block_of(const Matrix& m, int i, int j) const {
    const BlockRange& bi = blocks_[static_cast<std::size_t>(i)];
    const BlockRange& bj = blocks_[static_cast<std::size_t>(j)];
    return m.block(bi.offset, bj.offset, bi.length, bj.length);
}

const Matrix& GramMatrix::sqrt() const {
    std::call_once(sqrt_cache_->flag, [this] {
        // Same kernel handling as psd_sqrt: sub-cutoff eigenvalues are
        // rounding noise (the Gram matrix of N vectors in dimension d < N is
        // exactly rank-deficient) and square-rooting them would smear
        // O(sqrt(eps)) error across every entry.
        const double threshold =
            kSupportCutoff * std::max(eig_.eigenvalues.maxCoeff(), 0.0);
        RealVector roots = RealVector::Zero(eig_.dim());
        for (Eigen::Index i = 0; i < eig_.dim(); ++i) {
            if (eig_.eigenvalues(i) > threshold) {
                roots(i) = std::sqrt(eig_.eigenvalues(i));
            }
        }
        Matrix s = eig_.eigenvectors * roots.asDiagonal() * eig_.eigenvectors.adjoint();
        sqrt_cache_->value = 0.5 * (s + s.adjoint());
    });
    return sqrt_cache_->value;
}

GramMatrix build_gram(const Ensemble& s, double cutoff) {
    const int n = s.size();
    // Kept eigenpairs per state, weighted by √λ.
    std::vector<BlockRange> blocks;
    blocks.reserve(static_cast<std::size_t>(n));
    std::vector<Vector> columns;
    for (int i = 0; i < n; ++i) {
        const EigSystem& eig = s[i].eig();
        const double lambda_max = std::max(eig.eigenvalues.maxCoeff(), 0.0);
        const double threshold = cutoff * lambda_max;
        const int offset = static_cast<int>(columns.size());
        for (Eigen::Index j = 0; j < eig.eigenvalues.size(); ++j) {
            const double lambda = eig.eigenvalues(j);
            if (lambda > threshold) {
                columns.push_back(std::sqrt(lambda) * eig.eigenvectors.col(j));
            }
        }
        blocks.push_back(BlockRange{offset, static_cast<int>(columns.size()) - offset});
    }
    const int r = static_cast<int>(columns.size());
    Matrix weighted(s.dim(), r);
    for (int c = 0; c < r; ++c) {
        weighted.col(c) = columns[static_cast<std::size_t>(c)];
    }
    Matrix gram = weighted.adjoint() * weighted;
    return GramMatrix(std::move(gram), std::move(blocks), cutoff);
}

Povm build_pgm(const Ensemble& s, double cutoff) {
    const int d = s.dim();
    Matrix sigma = Matrix::Zero(d, d);
    for (const auto& state : s) {
        sigma += state.matrix();
    }
    const SupportInvSqrt inv = support_inv_sqrt(sigma, cutoff);
    Povm povm;
    povm.support_projector = inv.projector;
    povm.elements.reserve(static_cast<std::size_t>(s.size()));
    for (const auto& state : s) {
        Matrix mu = inv.inv_sqrt * state.matrix() * inv.inv_sqrt;
        povm.elements.push_back(0.5 * (mu + mu.adjoint()));
    }
    return povm;
}

ConfusionMatrix::ConfusionMatrix(RealMatrix entries) : entries_(std::move(entries)) {
    const Eigen::Index n = entries_.rows();
    if (entries_.cols() != n || n < 1) {
        throw Error(errc::invalid_argument, "confusion matrix must be square");
    }
    if (entries_.minCoeff() < -1e-10 || entries_.maxCoeff() > 1.0 + 1e-10) {
        throw Error(errc::invalid_argument, "confusion entries leave [0, 1]");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        if (std::abs(entries_.col(j).sum() - 1.0) > 1e-9) {
            throw Error(errc::invalid_argument, "confusion columns must sum to 1");
        }
    }
}

ConfusionMatrix confusion_matrix(const Ensemble& s, ConfusionMethod method,
                                 double cutoff) {
    if (method == ConfusionMethod::gram) {
        return confusion_from_gram(build_gram(s, cutoff));
    }
    const Povm povm = build_pgm(s, cutoff);
    const int n = s.size();
    RealMatrix c(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            c(i, j) = trace_product_real(povm.elements[static_cast<std::size_t>(i)],
                                         s[j].matrix());
        }
    }
    return ConfusionMatrix(std::move(c));
}

ConfusionMatrix confusion_from_gram(const GramMatrix& g) {
    const Matrix& root = g.sqrt();
    const int n = g.states();
    RealMatrix c(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            c(i, j) = g.block_of(root, i, j).squaredNorm();
        }
    }
    return ConfusionMatrix(std::move(c));
}

double worst_case_error(const ConfusionMatrix& c) {
    double worst = 0.0;
    for (int i = 0; i < c.size(); ++i) {
        worst = std::max(worst, 1.0 - c(i, i));
    }
    return std::min(worst, 1.0);
}

GramSpectral gram_spectral(const GramMatrix& g, double cutoff) {
    const RealVector& eigenvalues = g.eig().eigenvalues;
    const double max_eig = std::max(eigenvalues.maxCoeff(), 0.0);
    const double min_eig = eigenvalues.minCoeff();
    const bool invertible = min_eig > cutoff * max_eig;
    return GramSpectral{max_eig, invertible ? 1.0 / min_eig : kInf, min_eig, invertible};
}

} // namespace pgmkit
