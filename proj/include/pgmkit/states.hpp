// Copyright 2026 the pgmkit developers
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "pgmkit/linalg.hpp"

namespace pgmkit {

/// Default validation tolerance for density matrices: Hermiticity,
/// eigenvalue floor and trace deviation.
inline constexpr double kTolState = 1e-10;

/// Entry-count ceiling for exact tensor powers (the output matrix may hold
/// at most this many complex entries).
inline constexpr std::int64_t kTensorEntryLimit = std::int64_t{1} << 20;

/// A validated quantum state: Hermitian, PSD within tolerance, unit trace,
/// with its eigendecomposition cached at construction.
class DensityMatrix {
  public:
    /// Validates a raw matrix. Throws errc::not_hermitian, errc::not_psd or
    /// errc::trace_not_one, each only for its own violation.
    static DensityMatrix validate(const Matrix& raw, double tol = kTolState);

    /// Rank-one state |v><v| from a unit vector. The amplitudes are kept
    /// exactly as the top eigenvector of the cached decomposition.
    static DensityMatrix pure(const Vector& amplitudes, double norm_tol = kTolState);

    /// Builds Σ_j λ_j |v_j><v_j| from explicit spectral data and keeps that
    /// decomposition as the cache. The columns must be orthonormal; this is
    /// the hook for choosing a particular basis inside degenerate eigenspaces.
    static DensityMatrix from_eigensystem(const RealVector& eigenvalues,
                                          const Matrix& eigenvectors,
                                          double tol = kTolState);

    int dim() const { return static_cast<int>(matrix_.rows()); }
    int rank() const { return rank_; }
    bool is_pure() const { return rank_ == 1; }

    const Matrix& matrix() const { return matrix_; }
    const EigSystem& eig() const { return eig_; }

    /// tr ρ² from the cached spectrum.
    double purity() const;

    /// Eigenvector of the largest eigenvalue (the state vector when pure).
    Vector top_eigenvector() const;

    /// √ρ with negative numerical eigenvalues clamped to zero.
    Matrix sqrt() const;

  private:
    DensityMatrix(Matrix m, EigSystem eig, int rank);

    Matrix matrix_;
    EigSystem eig_;
    int rank_;
};

/// An ordered list of at least two states of common dimension.
class Ensemble {
  public:
    explicit Ensemble(std::vector<DensityMatrix> states);

    int size() const { return static_cast<int>(states_.size()); }
    int dim() const { return states_.front().dim(); }
    bool all_pure() const { return all_pure_; }

    const DensityMatrix& operator[](int i) const { return states_[static_cast<std::size_t>(i)]; }
    auto begin() const { return states_.begin(); }
    auto end() const { return states_.end(); }

  private:
    std::vector<DensityMatrix> states_;
    bool all_pure_;
};

/// Fidelity F(a,b) = ||√a √b||_1. Unsquared convention: for pure states this
/// is |<ψ|φ>|, not its square.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

// ---------------------------------------------------------------------------
// Ensemble generators. All are deterministic functions of their parameters
// and seed.
// ---------------------------------------------------------------------------

/// n Haar-random pure states in dimension d (normalized iid complex
/// Gaussian vectors).
Ensemble gen_haar_pure(int d, int n, std::uint64_t seed);

/// n pure states with amplitudes z_i/√d, z_i uniform in {±1}. Duplicates
/// are permitted.
Ensemble gen_sign_states(int d, int n, std::uint64_t seed);

/// n pure states in dimension n whose pairwise real inner products all equal
/// c, built as columns of the closed-form square root of (1-c)I + cJ.
Ensemble gen_equal_overlap(int n, double c);

/// n mixed states XX†/tr(XX†) with X a d×rank iid complex Gaussian matrix.
Ensemble gen_ginibre_mixed(int d, int rank, int n, std::uint64_t seed);

/// Exact k-fold Kronecker power. Refuses with errc::size_limit_exceeded when
/// the output would hold more than `entry_limit` complex entries.
DensityMatrix tensor_power(const DensityMatrix& s, int k,
                           std::int64_t entry_limit = kTensorEntryLimit);

} // namespace pgmkit
