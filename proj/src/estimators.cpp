#include "evolop/estimators.hpp"

#include <cmath>
#include <iostream>

#include "evolop/linalg.hpp"
#include "evolop/primal.hpp"
#include "evolop/rng.hpp"

namespace evolop {

SnapshotPair build_pairs(const Matrix& trajectory, int lag) {
    require(lag >= 1, "build_pairs: lag must be positive");
    const Index T = trajectory.rows();
    if (T <= lag) throw ConfigError("trajectory shorter than lag");
    const Index n = T - lag;
    require(n >= 2, "build_pairs: need at least 2 snapshot pairs");
    SnapshotPair p;
    p.X = trajectory.topRows(n);
    p.Y = trajectory.bottomRows(n);
    p.lag = lag;
    return p;
}

void EstimatorConfig::validate(Index n_samples) const {
    require(tikhonov >= 0.0 && std::isfinite(tikhonov), "estimator: tikhonov must be >= 0");
    if (has_rank())
        require(rank >= 1 && rank <= n_samples, "estimator: need 1 <= rank <= n");
    if (method == Method::RandRrr) {
        require(oversample >= 0, "estimator: oversample must be >= 0");
        require(power_iters >= 0, "estimator: power_iters must be >= 0");
        require(rank + oversample <= n_samples, "estimator: rank + oversample must be <= n");
    }
    if (is_nystrom()) {
        require(inducing >= 1 && inducing <= n_samples, "estimator: need 1 <= inducing <= n");
        require(rank <= inducing, "estimator: rank must be <= inducing");
    }
}

std::string EstimatorConfig::method_name() const {
    switch (method) {
        case Method::Ridge: return "ridge";
        case Method::Pcr: return "pcr";
        case Method::Rrr: return "rrr";
        case Method::RandRrr: return "rand_rrr";
        case Method::NystromPcr: return "nystrom_pcr";
        case Method::NystromRrr: return "nystrom_rrr";
    }
    return "unknown";
}

Matrix FittedOperator::predict_values(const Matrix& X_query, const Matrix& f_Y) const {
    require(f_Y.rows() == n_train(), "predict: observable values must match Y_train rows");
    require(X_query.cols() == state_dim(), "predict: query dimension mismatch");
    const Matrix K_q = gram_matrix(kernel, X_query, X_train);
    return K_q * (U * (V.transpose() * f_Y));
}

Vector FittedOperator::predict_state(const Vector& x) const {
    Matrix one = predict_values(Matrix(x.transpose()), Y_train);
    return one.transpose();
}

DualWeights ridge_dual_solve(const Matrix& K_X, double gamma, bool pseudo_inverse) {
    const Index n = K_X.rows();
    PsdSolver reg(K_X, static_cast<double>(n) * gamma, pseudo_inverse, "K_X");
    DualWeights w;
    w.U = reg.half_solve_t(Matrix::Identity(n, n));
    w.V = w.U;
    return w;
}

DualWeights pcr_dual_solve(const Matrix& K_X, double gamma, Index r) {
    const Index n = K_X.rows();
    require(r >= 1 && r <= n, "pcr_dual_solve: rank out of range");
    const double floor = 1e-12 * std::abs(K_X.trace());
    TopkResult top = topk_sym(K_X, r);
    if (top.values(r - 1) <= floor) throw NumericalError("rank exceeds data rank");

    const double dn = static_cast<double>(n);
    DualWeights w;
    w.U = Matrix(n, r);
    w.V = Matrix(n, r);
    for (Index j = 0; j < r; ++j) {
        const double lam = top.values(j);
        w.U.col(j) = top.vectors.col(j) * std::sqrt(dn / lam);
        w.V.col(j) = top.vectors.col(j) * (std::sqrt(lam) / ((lam + dn * gamma) * std::sqrt(dn)));
    }
    return w;
}

DualWeights rrr_dual_solve(const Matrix& K_X, const Matrix& K_Y, double gamma, Index r,
                           bool pseudo_inverse) {
    const Index n = K_X.rows();
    require(K_Y.rows() == n && K_Y.cols() == n, "rrr_dual_solve: Gram shape mismatch");
    require(r >= 1 && r <= n, "rrr_dual_solve: rank out of range");
    const double dn = static_cast<double>(n);

    PsdSolver reg(K_X, dn * gamma, pseudo_inverse, "K_X");
    const Matrix R = pivoted_cholesky(K_Y);  // n x k, R R^T == K_Y
    // Whitened symmetric form: S = (1/n) R^T K_X (K_X + n g I)^{-1} R is k x k
    // and shares its positive spectrum with the generalized problem.
    const Matrix D = reg.half_solve(R);
    const Matrix E = reg.half_solve(K_X * R);
    Matrix S = (E.transpose() * D) / dn;
    S = 0.5 * (S + S.transpose());

    const Index k = S.rows();
    if (r > k) throw NumericalError("rank exceeds data rank");
    TopkResult top = topk_sym(S, r);
    if (top.values(0) <= 0.0 || top.values(r - 1) <= 1e-14 * top.values(0))
        throw NumericalError("rank exceeds data rank");

    DualWeights w;
    w.sigma2 = top.values;
    // w_j = (K_X + n g I)^{-1} R z_j / sigma_j  normalizes
    // (1/n) w^T K_X (K_X + n g I) w to 1.
    Matrix W = reg.solve(Matrix(R * top.vectors));
    for (Index j = 0; j < r; ++j) W.col(j) /= std::sqrt(top.values(j));
    fix_column_signs(W);
    w.U = W;
    w.V = (K_X * W) / dn;
    return w;
}

DualWeights randomized_rrr_solve(const Matrix& K_X, const Matrix& K_Y, double gamma, Index r,
                                 Index oversample, Index power_iters, std::uint64_t seed,
                                 bool pseudo_inverse) {
    const Index n = K_X.rows();
    require(K_Y.rows() == n && K_Y.cols() == n, "randomized_rrr_solve: Gram shape mismatch");
    require(r >= 1, "randomized_rrr_solve: rank out of range");
    require(oversample >= 0 && power_iters >= 0, "randomized_rrr_solve: bad sketch parameters");
    if (r + oversample > n) throw ConfigError("randomized_rrr_solve: rank + oversample > n");
    const Index s = r + oversample;
    const double dn = static_cast<double>(n);

    PsdSolver reg(K_X, dn * gamma, pseudo_inverse, "K_X");
    const auto whitened_product = [&](const Matrix& M) -> Matrix {
        return reg.solve(Matrix(K_Y * (K_X * M))) / dn;
    };
    const auto orth = [&](const Matrix& M) -> Matrix {
        Eigen::HouseholderQR<Matrix> qr(M);
        return qr.householderQ() * Matrix::Identity(n, s);
    };

    SplitMix64 rng(seed);
    Matrix Q = orth(whitened_product(rng.normal_matrix(n, s)));
    for (Index it = 0; it < power_iters; ++it) Q = orth(whitened_product(Q));

    // RRR restricted to the captured subspace: the symmetric-definite pencil
    //   (1/n) Q^T K_X K_Y K_X Q  c = sigma^2  Q^T K_X (K_X + n g I) Q  c,
    // whitened through the eigendecomposition of the right-hand side.
    const Matrix KXQ = K_X * Q;
    Matrix lhs = (KXQ.transpose() * (K_Y * KXQ)) / dn;
    lhs = 0.5 * (lhs + lhs.transpose());
    Matrix rhs = KXQ.transpose() * KXQ + dn * gamma * (Q.transpose() * KXQ);
    rhs = 0.5 * (rhs + rhs.transpose());

    SymEig res = eig_sym_desc(rhs);
    const double cutoff = 1e-12 * std::abs(rhs.trace());
    Index kept = 0;
    while (kept < res.values.size() && res.values(kept) > cutoff) ++kept;
    if (kept < r) throw NumericalError("rank exceeds data rank");
    Matrix T = res.vectors.leftCols(kept);
    for (Index j = 0; j < kept; ++j) T.col(j) /= std::sqrt(res.values(j));

    Matrix small = T.transpose() * lhs * T;
    small = 0.5 * (small + small.transpose());
    TopkResult top = topk_sym(small, r);
    if (top.values(0) <= 0.0 || top.values(r - 1) <= 1e-14 * top.values(0))
        throw NumericalError("rank exceeds data rank");

    DualWeights w;
    w.sigma2 = top.values;
    // c^T rhs c = 1 means w = sqrt(n) Q T c satisfies the RRR normalization.
    Matrix W = std::sqrt(dn) * (Q * (T * top.vectors));
    fix_column_signs(W);
    w.U = W;
    w.V = (K_X * W) / dn;
    return w;
}

namespace {

Matrix inducing_inv_sqrt(const Matrix& K_mm, double gamma, const char* side) {
    const Index m = K_mm.rows();
    const double floor = 1e-12 * std::abs(K_mm.trace());
    SymEig es = eig_sym_desc(K_mm);
    if (es.values(m - 1) <= floor) {
        const double jitter = std::max(gamma, 1e-12) * std::abs(K_mm.trace()) / static_cast<double>(m);
        std::cerr << "[evolop] warning: singular " << side
                  << " inducing block; regularizing with jitter " << jitter << "\n";
        Matrix K = K_mm;
        K.diagonal().array() += jitter;
        return sym_inv_sqrt(K);
    }
    return sym_inv_sqrt(K_mm);
}

}  // namespace

FittedOperator nystrom_fit(Method inner, const KernelSpec& kernel, const SnapshotPair& pairs,
                           double gamma, Index r, Index m, std::uint64_t seed) {
    require(inner == Method::Pcr || inner == Method::Rrr,
            "nystrom_fit: inner method must be PCR or RRR");
    const Index n = pairs.X.rows();
    require(m >= 1 && m <= n, "nystrom_fit: need 1 <= m <= n");
    require(r >= 1 && r <= m, "nystrom_fit: need 1 <= rank <= m");

    SplitMix64 rng(seed);
    const std::vector<Index> idx = rng.sample_without_replacement(n, m);
    Matrix Xm(m, pairs.X.cols()), Ym(m, pairs.Y.cols());
    for (Index i = 0; i < m; ++i) {
        Xm.row(i) = pairs.X.row(idx[static_cast<std::size_t>(i)]);
        Ym.row(i) = pairs.Y.row(idx[static_cast<std::size_t>(i)]);
    }

    // Canonical Nystrom coordinates phi(x) = K_mm^{-1/2} k_m(x) on both the
    // input and the output side, then the primal solver in those coordinates.
    const Matrix Wx = inducing_inv_sqrt(gram_matrix(kernel, Xm, Xm), gamma, "X");
    const Matrix Wy = inducing_inv_sqrt(gram_matrix(kernel, Ym, Ym), gamma, "Y");
    const Matrix A = gram_matrix(kernel, pairs.X, Xm) * Wx;  // n x m
    const Matrix B = gram_matrix(kernel, pairs.Y, Ym) * Wy;

    PrimalOperator prim = fit_primal_features(FeatureMap::identity(m), A, B, inner, gamma, r,
                                              /*pseudo_inverse=*/false);

    FittedOperator op;
    op.kernel = kernel;
    op.X_train = std::move(Xm);
    op.Y_train = std::move(Ym);
    op.U = Wx * prim.G_left;
    op.V = Wy * prim.G_right;
    op.singular_values = prim.sigma2;
    op.inducing = idx;
    op.lag = pairs.lag;
    return op;
}

FittedOperator fit(const EstimatorConfig& config, const KernelSpec& kernel,
                   const SnapshotPair& pairs) {
    kernel.validate();
    require(pairs.X.rows() == pairs.Y.rows() && pairs.X.cols() == pairs.Y.cols(),
            "fit: X and Y must have identical shape");
    require(pairs.X.rows() >= 2, "fit: need at least 2 snapshot pairs");
    require(all_finite(pairs.X) && all_finite(pairs.Y), "fit: non-finite snapshot data");
    const Index n = pairs.X.rows();
    config.validate(n);

    if (config.is_nystrom()) {
        const Method inner = (config.method == Method::NystromPcr) ? Method::Pcr : Method::Rrr;
        FittedOperator op = nystrom_fit(inner, kernel, pairs, config.tikhonov, config.rank,
                                        config.inducing, config.seed);
        op.config = config;
        return op;
    }

    const Matrix K_X = gram_matrix(kernel, pairs.X, pairs.X);
    DualWeights w;
    switch (config.method) {
        case Method::Ridge:
            w = ridge_dual_solve(K_X, config.tikhonov, config.pseudo_inverse);
            break;
        case Method::Pcr:
            w = pcr_dual_solve(K_X, config.tikhonov, config.rank);
            break;
        case Method::Rrr: {
            const Matrix K_Y = gram_matrix(kernel, pairs.Y, pairs.Y);
            w = rrr_dual_solve(K_X, K_Y, config.tikhonov, config.rank, config.pseudo_inverse);
            break;
        }
        case Method::RandRrr: {
            const Matrix K_Y = gram_matrix(kernel, pairs.Y, pairs.Y);
            w = randomized_rrr_solve(K_X, K_Y, config.tikhonov, config.rank, config.oversample,
                                     config.power_iters, config.seed, config.pseudo_inverse);
            break;
        }
        default: throw ConfigError("fit: unknown method");
    }

    FittedOperator op;
    op.kernel = kernel;
    op.X_train = pairs.X;
    op.Y_train = pairs.Y;
    op.U = std::move(w.U);
    op.V = std::move(w.V);
    op.singular_values = std::move(w.sigma2);
    op.config = config;
    op.lag = pairs.lag;
    return op;
}

}  // namespace evolop
