#pragma once

#include "evolop/common.hpp"
#include "evolop/estimators.hpp"

namespace evolop {

/// Spectral decomposition of a fitted operator. Right eigenfunctions are
/// dual-coefficient columns against the training inputs,
///     psi_j(x) = sum_i k(x, X_train_i) * right_coeffs(i, j),
/// normalized to unit empirical norm on X_train with the entry of largest
/// modulus made real-positive. Left eigenfunctions live against Y_train and
/// are biorthonormal to the right set in the empirical inner product.
struct SpectralDecomposition {
    CVector eigenvalues;  // |lambda| descending, conjugate pairs adjacent
    CMatrix right_coeffs;
    CMatrix left_coeffs;
    KernelSpec kernel;
    Matrix X_train;
    Matrix Y_train;
    int lag = 1;
    bool non_diagonalizable = false;
};

enum class Side { Right, Left };

/// Koopman modes of an observable given by its values on Y_train: the
/// one-step forecast decomposes as f_hat(x) = sum_j lambda_j psi_j(x) m_j.
struct ModeSet {
    CMatrix modes;              // r x q
    Matrix observable_values;   // the f_Y used to compute them
};

/// Eigenpairs of the r x r restriction matrix M = V^T K_YX U mapped back to
/// dual coefficients. A defective M (eigenvector matrix numerically
/// singular) is flagged, never perturbed.
SpectralDecomposition eig_decomposition(const FittedOperator& model);

CMatrix eval_eigenfunctions(const SpectralDecomposition& decomp, const Matrix& X_new, Side side);

ModeSet compute_modes(const SpectralDecomposition& decomp, const Matrix& f_Y);

enum class PredictMethod { Rollout, Spectral };

/// Multi-step forecast of an observable from x0. Rollout re-embeds the
/// predicted state each step (identity observable, so f_Y must have d
/// columns); spectral evaluates sum_j lambda_j^k psi_j(x0) m_j and returns
/// the real part. For real data the imaginary residual must stay below
/// 1e-6 * |forecast|; it is reported through `imag_residual` when given.
Matrix predict(const FittedOperator& model, const Vector& x0, const Matrix& f_Y, int steps,
               PredictMethod method, double* imag_residual = nullptr);

}  // namespace evolop
