// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#include "pgmkit/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace pgmkit {

namespace {

double herm_deviation(const Matrix& m) {
    return (m - m.adjoint()).norm();
}

} // namespace

const char* errc_name(errc code) noexcept {
    switch (code) {
        case errc::not_hermitian: return "not_hermitian";
        case errc::not_psd: return "not_psd";
        case errc::trace_not_one: return "trace_not_one";
        case errc::zero_support: return "zero_support";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::invalid_argument: return "invalid_argument";
        case errc::size_limit_exceeded: return "size_limit_exceeded";
        case errc::zero_epsilon: return "zero_epsilon";
        case errc::unsupported_mixed: return "unsupported_mixed";
        case errc::parse_error: return "parse_error";
    }
    return "unknown";
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    const double scale = std::max(m.norm(), 1e-300);
    return herm_deviation(m) <= tol * scale;
}

EigSystem hermitian_eig(const Matrix& h, double tol) {
    if (h.rows() != h.cols()) {
        throw Error(errc::not_hermitian, "matrix is not square");
    }
    if (!is_hermitian(h, tol)) {
        throw Error(errc::not_hermitian,
                    "matrix deviates from its adjoint beyond tolerance");
    }
    // Symmetrize first so the solver sees an exactly Hermitian input.
    const Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(errc::invalid_argument, "eigendecomposition failed to converge");
    }
    return EigSystem{solver.eigenvalues(), solver.eigenvectors()};
}

namespace {

// Applies f to the spectrum: V f(Λ) V†, re-Hermitized.
Matrix eig_apply(const EigSystem& eig, const RealVector& mapped) {
    const Matrix result =
        eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.adjoint();
    return 0.5 * (result + result.adjoint());
}

void require_psd(const RealVector& eigenvalues, double slack) {
    if (eigenvalues.size() > 0 && eigenvalues.minCoeff() < -slack) {
        throw Error(errc::not_psd, "matrix has an eigenvalue below the PSD slack");
    }
}

} // namespace

Matrix psd_sqrt(const Matrix& a, double cutoff) {
    const EigSystem eig = hermitian_eig(a);
    const double lambda_max = std::max(eig.eigenvalues.maxCoeff(), 0.0);
    require_psd(eig.eigenvalues, cutoff * lambda_max);
    // Eigenvalues at rounding-noise scale must be treated as exact zeros:
    // the square root would otherwise amplify O(eps) kernel noise to
    // O(sqrt(eps)), which is visible in downstream Frobenius norms.
    const double threshold = cutoff * lambda_max;
    const Eigen::Index d = eig.dim();
    RealVector roots = RealVector::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (eig.eigenvalues(i) > threshold) {
            roots(i) = std::sqrt(eig.eigenvalues(i));
        }
    }
    return eig_apply(eig, roots);
}

SupportInvSqrt support_inv_sqrt(const Matrix& a, double cutoff) {
    const EigSystem eig = hermitian_eig(a);
    const double lambda_max = std::max(eig.eigenvalues.maxCoeff(), 0.0);
    require_psd(eig.eigenvalues, cutoff * lambda_max);
    if (lambda_max <= 0.0) {
        throw Error(errc::zero_support, "matrix has empty support");
    }
    const double threshold = cutoff * lambda_max;
    const Eigen::Index d = eig.dim();
    RealVector inv_roots = RealVector::Zero(d);
    RealVector kept = RealVector::Zero(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        if (eig.eigenvalues(i) > threshold) {
            inv_roots(i) = 1.0 / std::sqrt(eig.eigenvalues(i));
            kept(i) = 1.0;
        }
    }
    return SupportInvSqrt{eig_apply(eig, inv_roots), eig_apply(eig, kept)};
}

SchattenNorms schatten_norms(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const RealVector& sigma = svd.singularValues();
    return SchattenNorms{
        sigma.sum(),
        std::sqrt(sigma.squaredNorm()),
        sigma.size() > 0 ? sigma(0) : 0.0,
    };
}

double trace_norm(const Matrix& m) {
    return schatten_norms(m).trace_norm;
}

double operator_norm(const Matrix& m) {
    return schatten_norms(m).operator_norm;
}

double trace_product_real(const Matrix& a, const Matrix& b) {
    // tr(ab) = Σ_{rs} a_{rs} b_{sr}
    return (a.transpose().array() * b.array()).sum().real();
}

} // namespace pgmkit
