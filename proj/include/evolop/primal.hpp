#pragma once

#include <cstdint>

#include "evolop/common.hpp"
#include "evolop/estimators.hpp"

namespace evolop {

/// Explicit feature map for the primal (closed-form) solvers: either the
/// identity on R^d or fixed random trigonometric features
/// sqrt(2/D) cos(W x + b) with W, b drawn once from a recorded seed.
class FeatureMap {
public:
    static FeatureMap identity(Index dim);
    static FeatureMap random_trig(Index in_dim, Index n_features, double lengthscale,
                                  std::uint64_t seed);

    Index in_dim() const { return in_dim_; }
    Index out_dim() const { return out_dim_; }

    Matrix apply(const Matrix& X) const;  // (n x d) -> (n x d_f)
    Vector apply(const Vector& x) const;

private:
    bool trig_ = false;
    Index in_dim_ = 0;
    Index out_dim_ = 0;
    Matrix weights_;  // d_f x d
    Vector phases_;   // d_f
};

/// Evolution operator in explicit feature coordinates: for an observable
/// f(y) = phi(y)^T w the one-step prediction is f_hat(x) = phi(x)^T G w.
/// Dense closed-form reference for the Gram-space solvers.
struct PrimalOperator {
    FeatureMap map;
    Matrix G;        // d_f x d_f
    Matrix G_left;   // G = G_left * G_right^T for PCR/RRR (d_f x r)
    Matrix G_right;
    Vector sigma2;   // RRR squared singular values, descending

    Matrix predict(const Matrix& X_query, const Matrix& obs_weights) const;
};

/// Closed-form primal solvers, with A = phi(X), B = phi(Y), C_X = A^T A / n,
/// C_XY = A^T B / n:
///   Ridge:  G = (C_X + gamma I)^{-1} C_XY
///   PCR:    G = W_r (W_r^T C_X W_r + gamma I)^{-1} W_r^T C_XY,
///           W_r = top-r eigenvectors of C_X
///   RRR:    G = (C_X + gamma I)^{-1/2} [ (C_X + gamma I)^{-1/2} C_XY ]_r,
///           [.]_r the best rank-r approximation (truncated SVD)
PrimalOperator fit_primal_oracle(const FeatureMap& map, const EstimatorConfig& config,
                                 const SnapshotPair& pairs);

/// Same solvers on already-materialized feature matrices (used by the
/// Nystrom estimators, which pass Nystrom feature coordinates).
PrimalOperator fit_primal_features(FeatureMap map, const Matrix& A, const Matrix& B,
                                   Method method, double gamma, Index r, bool pseudo_inverse);

/// Eigenpairs of G sorted by (|lambda| desc, Re desc, Im desc); eigenfunction
/// values at query points are phi(X) * (right eigenvectors).
struct PrimalEig {
    CVector values;
    CMatrix right_vectors;  // d_f x d_f
};
PrimalEig primal_eig(const PrimalOperator& op);

}  // namespace evolop
