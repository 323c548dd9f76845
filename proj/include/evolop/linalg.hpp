#pragma once

#include <functional>
#include <utility>

#include "evolop/common.hpp"

namespace evolop {

/// Rank-revealing pivoted Cholesky of a symmetric PSD matrix.
/// Returns R (n x k) with R*R^T == K up to a discarded tail of trace
/// <= rel_tol * trace(K). k is the detected numerical rank.
Matrix pivoted_cholesky(const Matrix& K, double rel_tol = 1e-13);

/// Top-k eigenpairs of a symmetric matrix given through its matvec.
/// Values are returned descending, vectors orthonormal. Uses a dense solve
/// when the dimension is small and Lanczos with full reorthogonalization
/// otherwise; both paths are deterministic.
struct TopkResult {
    Vector values;   // k, descending
    Matrix vectors;  // n x k
};
TopkResult topk_sym(Index n, const std::function<Vector(const Vector&)>& matvec, Index k,
                    Index dense_threshold = 600);
TopkResult topk_sym(const Matrix& S, Index k, Index dense_threshold = 600);

/// All eigenpairs of a symmetric matrix, values descending, with eigenvalues
/// in [-floor, 0) clamped to zero where floor = 1e-12 * |trace|.
struct SymEig {
    Vector values;
    Matrix vectors;
};
SymEig eig_sym_desc(const Matrix& S, bool clamp_to_zero = true);

/// Symmetric inverse square root with spectral cutoff: eigenvalues below
/// cutoff_rel * |trace| are dropped (pseudo-inverse sense).
Matrix sym_inv_sqrt(const Matrix& S, double cutoff_rel = 1e-12);

/// Fixes the sign of each column so its first component of magnitude
/// > 1e-14 * max|column| is positive. Reproducible ordering under
/// degenerate eigenvalues.
void fix_column_signs(Matrix& m);

/// Sorts complex eigenpairs by (|lambda| desc, Re desc, Im desc) in place.
/// The eigenvalue ordering convention used across the library.
void sort_eig_pairs(CVector& values, CMatrix& vectors);

/// Solver for A = K + shift*I (K symmetric PSD) exposing whole and
/// half (Cholesky-factor) solves. With `pseudo_inverse`, a spectral
/// decomposition with cutoff 1e-12 * trace is used instead; without it,
/// a numerically singular A raises NumericalError.
class PsdSolver {
public:
    PsdSolver(const Matrix& K, double shift, bool pseudo_inverse, const std::string& label);

    Vector solve(const Vector& b) const;      // A^{-1} b
    Matrix solve(const Matrix& B) const;      // A^{-1} B
    Matrix half_solve(const Matrix& B) const; // L^{-1} B  with L L^T = A
    Matrix half_solve_t(const Matrix& B) const; // L^{-T} B

private:
    bool spectral_ = false;
    Eigen::LLT<Matrix> llt_;
    // Spectral path: A^{-1} = Q D^{-1} Q^T restricted to kept eigenvalues.
    Matrix q_;
    Vector d_;  // kept eigenvalues
};

}  // namespace evolop
