// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>

#include "pgmkit/errors.hpp"

namespace pgmkit {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Hermiticity / orthonormality tolerance, relative to the Frobenius norm
/// of the input.
inline constexpr double kTolHerm = 1e-10;
inline constexpr double kTolOrth = 1e-10;
/// Reconstruction tolerance (VΛV†, B², completeness sums), relative.
inline constexpr double kTolRecon = 1e-9;
/// Eigenvalues at or below kSupportCutoff * λ_max count as zero: they are
/// excluded from supports, pseudo-inverses and Gram blocks.
inline constexpr double kSupportCutoff = 1e-12;

/// Eigendecomposition of a Hermitian matrix: eigenvalues ascending,
/// eigenvectors as orthonormal columns in matching order.
struct EigSystem {
    RealVector eigenvalues;
    Matrix eigenvectors;

    Eigen::Index dim() const { return eigenvalues.size(); }
};

bool is_hermitian(const Matrix& m, double tol = kTolHerm);

/// Diagonalizes a Hermitian matrix. Throws errc::not_hermitian when the
/// input is farther than `tol * ||H||_F` from its adjoint.
EigSystem hermitian_eig(const Matrix& h, double tol = kTolHerm);

/// Principal square root of a PSD matrix. Eigenvalues in
/// (-cutoff * λ_max, 0) are clamped to zero; anything below that slack
/// throws errc::not_psd.
Matrix psd_sqrt(const Matrix& a, double cutoff = kSupportCutoff);

struct SupportInvSqrt {
    Matrix inv_sqrt;   // A^{-1/2}, inverted on the support only
    Matrix projector;  // orthogonal projector onto the support
};

/// Inverse square root restricted to the support: only eigenvalues above
/// cutoff * λ_max are inverted. Throws errc::zero_support when nothing
/// survives the cutoff.
SupportInvSqrt support_inv_sqrt(const Matrix& a, double cutoff = kSupportCutoff);

struct SchattenNorms {
    double trace_norm;     // sum of singular values
    double frobenius_norm; // root of summed squared singular values
    double operator_norm;  // largest singular value
};

/// All three Schatten norms of an arbitrary rectangular complex matrix.
SchattenNorms schatten_norms(const Matrix& m);

double trace_norm(const Matrix& m);
double operator_norm(const Matrix& m);

/// Re(tr(a b)) without forming the product.
double trace_product_real(const Matrix& a, const Matrix& b);

} // namespace pgmkit
