// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#include "pgmkit/states.hpp"

#include <cmath>
#include <random>
#include <utility>

#include <unsupported/Eigen/KroneckerProduct>

namespace pgmkit {

namespace {

int rank_above_cutoff(const RealVector& eigenvalues) {
    const double lambda_max = std::max(eigenvalues.maxCoeff(), 0.0);
    const double threshold = kSupportCutoff * lambda_max;
    int rank = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues(i) > threshold) {
            ++rank;
        }
    }
    return rank;
}

} // namespace

DensityMatrix::DensityMatrix(Matrix m, EigSystem eig, int rank)
    : matrix_(std::move(m)), eig_(std::move(eig)), rank_(rank) {}

DensityMatrix DensityMatrix::validate(const Matrix& raw, double tol) {
    if (raw.rows() != raw.cols() || raw.rows() < 1) {
        throw Error(errc::invalid_argument, "state matrix must be square and nonempty");
    }
    EigSystem eig = hermitian_eig(raw, tol); // throws not_hermitian
    if (eig.eigenvalues.minCoeff() < -tol) {
        throw Error(errc::not_psd, "state has a negative eigenvalue beyond tolerance");
    }
    const double trace = raw.trace().real();
    if (std::abs(trace - 1.0) > tol) {
        throw Error(errc::trace_not_one, "state trace deviates from 1 beyond tolerance");
    }
    const int rank = rank_above_cutoff(eig.eigenvalues);
    Matrix sym = 0.5 * (raw + raw.adjoint());
    return DensityMatrix(std::move(sym), std::move(eig), rank);
}

DensityMatrix DensityMatrix::pure(const Vector& amplitudes, double norm_tol) {
    const Eigen::Index d = amplitudes.size();
    if (d < 1) {
        throw Error(errc::invalid_argument, "amplitude vector is empty");
    }
    if (std::abs(amplitudes.norm() - 1.0) > norm_tol) {
        throw Error(errc::invalid_argument, "amplitude vector is not normalized");
    }
    // Complete the vector to an orthonormal basis and pin the state itself
    // as the top-eigenvalue column, so downstream overlaps use the given
    // amplitudes verbatim.
    Eigen::HouseholderQR<Matrix> qr(amplitudes);
    Matrix basis = qr.householderQ();
    const Complex phase_num = basis.col(0).dot(amplitudes);
    const double phase_mag = std::abs(phase_num);
    if (phase_mag > 0.0) {
        basis.col(0) *= phase_num / phase_mag;
    }
    Matrix eigenvectors(d, d);
    eigenvectors.leftCols(d - 1) = basis.rightCols(d - 1);
    eigenvectors.col(d - 1) = amplitudes;
    RealVector eigenvalues = RealVector::Zero(d);
    eigenvalues(d - 1) = 1.0;
    return from_eigensystem(eigenvalues, eigenvectors, norm_tol);
}

DensityMatrix DensityMatrix::from_eigensystem(const RealVector& eigenvalues,
                                              const Matrix& eigenvectors,
                                              double tol) {
    const Eigen::Index d = eigenvectors.rows();
    if (eigenvectors.cols() != d || eigenvalues.size() != d || d < 1) {
        throw Error(errc::invalid_argument, "eigensystem dimensions are inconsistent");
    }
    const double orth_dev = (eigenvectors.adjoint() * eigenvectors
                             - Matrix::Identity(d, d)).norm();
    if (orth_dev > kTolOrth * std::sqrt(static_cast<double>(d))) {
        throw Error(errc::invalid_argument, "eigenvector columns are not orthonormal");
    }
    if (eigenvalues.minCoeff() < -tol) {
        throw Error(errc::not_psd, "state has a negative eigenvalue beyond tolerance");
    }
    if (std::abs(eigenvalues.sum() - 1.0) > tol) {
        throw Error(errc::trace_not_one, "eigenvalues do not sum to 1");
    }
    Matrix m = eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
    m = 0.5 * (m + m.adjoint());
    const int rank = rank_above_cutoff(eigenvalues);
    return DensityMatrix(std::move(m), EigSystem{eigenvalues, eigenvectors}, rank);
}

double DensityMatrix::purity() const {
    return eig_.eigenvalues.squaredNorm();
}

Vector DensityMatrix::top_eigenvector() const {
    Eigen::Index top = 0;
    eig_.eigenvalues.maxCoeff(&top);
    return eig_.eigenvectors.col(top);
}

Matrix DensityMatrix::sqrt() const {
    // Kernel eigenvalues are clamped to exact zeros before the square root;
    // otherwise rank-deficient states pick up O(sqrt(eps)) noise that trace
    // norms downstream (fidelities in particular) sum over the whole kernel.
    const double threshold =
        kSupportCutoff * std::max(eig_.eigenvalues.maxCoeff(), 0.0);
    RealVector roots = RealVector::Zero(eig_.dim());
    for (Eigen::Index i = 0; i < eig_.dim(); ++i) {
        if (eig_.eigenvalues(i) > threshold) {
            roots(i) = std::sqrt(eig_.eigenvalues(i));
        }
    }
    Matrix result = eig_.eigenvectors * roots.asDiagonal() * eig_.eigenvectors.adjoint();
    return 0.5 * (result + result.adjoint());
}

Ensemble::Ensemble(std::vector<DensityMatrix> states) : states_(std::move(states)) {
    if (states_.size() < 2) {
        throw Error(errc::invalid_argument, "an ensemble needs at least two states");
    }
    const int d = states_.front().dim();
    all_pure_ = true;
    for (const auto& s : states_) {
        if (s.dim() != d) {
            throw Error(errc::dimension_mismatch, "ensemble states have mixed dimensions");
        }
        all_pure_ = all_pure_ && s.is_pure();
    }
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw Error(errc::dimension_mismatch, "fidelity needs states of equal dimension");
    }
    return trace_norm(a.sqrt() * b.sqrt());
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

Vector sample_gaussian_vector(int d, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(d);
    for (int i = 0; i < d; ++i) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        v(i) = Complex(re, im);
    }
    return v;
}

void check_generator_params(int d, int n) {
    if (d < 1) {
        throw Error(errc::invalid_argument, "dimension must be at least 1");
    }
    if (n < 2) {
        throw Error(errc::invalid_argument, "an ensemble needs at least two states");
    }
}

} // namespace

Ensemble gen_haar_pure(int d, int n, std::uint64_t seed) {
    check_generator_params(d, n);
    std::mt19937_64 rng(seed);
    std::vector<DensityMatrix> states;
    states.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vector v = sample_gaussian_vector(d, rng);
        v /= v.norm();
        states.push_back(DensityMatrix::pure(v));
    }
    return Ensemble(std::move(states));
}

Ensemble gen_sign_states(int d, int n, std::uint64_t seed) {
    check_generator_params(d, n);
    std::mt19937_64 rng(seed);
    const double amp = 1.0 / std::sqrt(static_cast<double>(d));
    std::vector<DensityMatrix> states;
    states.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vector v(d);
        for (int j = 0; j < d; ++j) {
            const bool flip = (rng() & 1u) != 0;
            v(j) = Complex(flip ? -amp : amp, 0.0);
        }
        // ±1/√d amplitudes give unit norm only up to rounding; pass the
        // rounding slack explicitly.
        states.push_back(DensityMatrix::pure(v, 1e-12 * d));
    }
    return Ensemble(std::move(states));
}

Ensemble gen_equal_overlap(int n, double c) {
    if (n < 2) {
        throw Error(errc::invalid_argument, "an ensemble needs at least two states");
    }
    if (c < 0.0 || c >= 1.0) {
        throw Error(errc::invalid_argument, "equal overlap requires c in [0, 1)");
    }
    // Closed-form square root of (1-c)I + cJ: off-diagonal entries are all
    // equal, so each column is a unit vector and any two columns meet at c.
    const double nd = static_cast<double>(n);
    const double top = std::sqrt(1.0 + c * (nd - 1.0));
    const double rest = std::sqrt(1.0 - c);
    const double off = (top - rest) / nd;
    const double diag = off + rest;
    std::vector<DensityMatrix> states;
    states.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Vector v = Vector::Constant(n, Complex(off, 0.0));
        v(i) = Complex(diag, 0.0);
        v /= v.norm();
        states.push_back(DensityMatrix::pure(v));
    }
    return Ensemble(std::move(states));
}

Ensemble gen_ginibre_mixed(int d, int rank, int n, std::uint64_t seed) {
    check_generator_params(d, n);
    if (rank < 1 || rank > d) {
        throw Error(errc::invalid_argument, "rank must lie in [1, d]");
    }
    std::mt19937_64 rng(seed);
    std::vector<DensityMatrix> states;
    states.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Matrix x(d, rank);
        for (int col = 0; col < rank; ++col) {
            x.col(col) = sample_gaussian_vector(d, rng);
        }
        Matrix rho = x * x.adjoint();
        rho /= rho.trace().real();
        states.push_back(DensityMatrix::validate(rho));
    }
    return Ensemble(std::move(states));
}

DensityMatrix tensor_power(const DensityMatrix& s, int k, std::int64_t entry_limit) {
    if (k < 1) {
        throw Error(errc::invalid_argument, "tensor power needs k >= 1");
    }
    if (k == 1) {
        return s;
    }
    // d^k and its square, with overflow guarding against large k.
    const std::int64_t d = s.dim();
    std::int64_t dim = 1;
    for (int i = 0; i < k; ++i) {
        if (dim > entry_limit / d) {
            throw Error(errc::size_limit_exceeded,
                        "tensor power exceeds the entry limit");
        }
        dim *= d;
    }
    if (dim > entry_limit / dim) {
        throw Error(errc::size_limit_exceeded, "tensor power exceeds the entry limit");
    }
    if (s.is_pure()) {
        // (|v><v|)^{⊗k} stays rank one; build the amplitude vector directly.
        Vector v = s.top_eigenvector();
        Vector acc = v;
        for (int i = 1; i < k; ++i) {
            acc = Eigen::kroneckerProduct(acc, v).eval();
        }
        return DensityMatrix::pure(acc, 1e-9);
    }
    Matrix acc = s.matrix();
    for (int i = 1; i < k; ++i) {
        acc = Eigen::kroneckerProduct(acc, s.matrix()).eval();
    }
    return DensityMatrix::validate(acc, 1e-9);
}

} // namespace pgmkit
