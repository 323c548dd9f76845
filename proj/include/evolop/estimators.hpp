#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evolop/common.hpp"
#include "evolop/kernels.hpp"

namespace evolop {

/// Time-lagged snapshot pair: row i of Y is the state `lag` steps after row
/// i of X.
struct SnapshotPair {
    Matrix X;
    Matrix Y;
    int lag = 1;
};

/// Slice a trajectory (T x d) into the n = T - lag aligned snapshot rows.
SnapshotPair build_pairs(const Matrix& trajectory, int lag);

enum class Method { Ridge, Pcr, Rrr, RandRrr, NystromPcr, NystromRrr };

struct EstimatorConfig {
    Method method = Method::Rrr;
    int rank = 5;
    double tikhonov = 1e-8;
    int oversample = 10;        // randomized RRR sketch surplus p
    int power_iters = 2;        // randomized RRR power iterations q
    int inducing = 100;         // Nystrom inducing points m
    std::uint64_t seed = 0;
    bool pseudo_inverse = false;  // allow tikhonov = 0 on singular systems

    void validate(Index n_samples) const;
    std::string method_name() const;
    bool is_nystrom() const { return method == Method::NystromPcr || method == Method::NystromRrr; }
    bool has_rank() const { return method != Method::Ridge; }
};

/// The learned finite-rank evolution operator in dual coordinates. Acts on an
/// observable known by its values f_Y on Y_train as
///
///     f_hat(x) = k(x, X_train) * U * (V^T * f_Y).
///
/// For Nystrom estimators X_train/Y_train hold the m inducing rows and
/// `inducing` records their indices into the original sample; everything
/// downstream (prediction, spectral decomposition) is agnostic to this.
struct FittedOperator {
    KernelSpec kernel;
    Matrix X_train;
    Matrix Y_train;
    Matrix U;
    Matrix V;
    Vector singular_values;  // squared singular values, RRR variants only
    EstimatorConfig config;
    std::vector<Index> inducing;
    int lag = 1;

    Index n_train() const { return X_train.rows(); }
    Index state_dim() const { return X_train.cols(); }
    Index rank() const { return U.cols(); }

    Matrix predict_values(const Matrix& X_query, const Matrix& f_Y) const;
    Vector predict_state(const Vector& x) const;
};

/// Dispatch to the method-specific solver. Deterministic given
/// (config, kernel, pairs) including seeds.
FittedOperator fit(const EstimatorConfig& config, const KernelSpec& kernel,
                   const SnapshotPair& pairs);

// ---------------------------------------------------------------------------
// Gram-space solvers. All conventions are pinned by equivalence with the
// primal solvers on explicit-feature kernels (see primal.hpp):
// the induced operator k_x U V^T f_Y must reproduce the primal predictions
// and its restriction matrix V^T K_YX U the primal eigenvalues.
// ---------------------------------------------------------------------------

struct DualWeights {
    Matrix U;
    Matrix V;
    Vector sigma2;  // descending, RRR variants only
};

/// Kernel ridge: U V^T = (K_X + n*gamma*I)^{-1}, realized as U = V = L^{-T}.
DualWeights ridge_dual_solve(const Matrix& K_X, double gamma, bool pseudo_inverse = false);

/// Principal component regression (kernel DMD): U spans the top-r
/// eigenvectors of K_X scaled so U^T K_X U = n I_r.
DualWeights pcr_dual_solve(const Matrix& K_X, double gamma, Index r);

/// Reduced rank regression: top-r pairs of the generalized problem
/// (1/n) K_Y K_X w = sigma^2 (K_X + n*gamma*I) w, symmetrized through the
/// Cholesky factor of (K_X + n*gamma*I) and a PSD factor of K_Y; columns
/// normalized so (1/n) w^T K_X (K_X + n*gamma*I) w = 1, V = (1/n) K_X U.
DualWeights rrr_dual_solve(const Matrix& K_X, const Matrix& K_Y, double gamma, Index r,
                           bool pseudo_inverse = false);

/// Randomized RRR: seeded Gaussian sketch (n x (r+p)), q power iterations of
/// the whitened product, then the RRR solve restricted to the captured
/// subspace. Deterministic given the seed; r+p = n reproduces rrr_dual_solve.
DualWeights randomized_rrr_solve(const Matrix& K_X, const Matrix& K_Y, double gamma, Index r,
                                 Index oversample, Index power_iters, std::uint64_t seed,
                                 bool pseudo_inverse = false);

/// Nystrom-reduced PCR/RRR on m uniformly sampled inducing points
/// (O(n m^2 + m^3) time, O(n m) memory).
FittedOperator nystrom_fit(Method inner, const KernelSpec& kernel, const SnapshotPair& pairs,
                           double gamma, Index r, Index m, std::uint64_t seed);

}  // namespace evolop
