#include "evolop/primal.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "evolop/linalg.hpp"
#include "evolop/rng.hpp"

namespace evolop {

FeatureMap FeatureMap::identity(Index dim) {
    FeatureMap m;
    m.in_dim_ = dim;
    m.out_dim_ = dim;
    return m;
}

FeatureMap FeatureMap::random_trig(Index in_dim, Index n_features, double lengthscale,
                                   std::uint64_t seed) {
    require(n_features >= 1 && in_dim >= 1, "random_trig: positive dimensions required");
    require(lengthscale > 0.0, "random_trig: lengthscale must be positive");
    FeatureMap m;
    m.trig_ = true;
    m.in_dim_ = in_dim;
    m.out_dim_ = n_features;
    SplitMix64 rng(seed);
    m.weights_ = rng.normal_matrix(n_features, in_dim) / lengthscale;
    m.phases_ = Vector(n_features);
    for (Index i = 0; i < n_features; ++i) m.phases_(i) = 2.0 * M_PI * rng.uniform();
    return m;
}

Matrix FeatureMap::apply(const Matrix& X) const {
    require(X.cols() == in_dim_, "feature map: dimension mismatch");
    if (!trig_) return X;
    Matrix Z = X * weights_.transpose();
    Z.rowwise() += phases_.transpose();
    return std::sqrt(2.0 / static_cast<double>(out_dim_)) * Z.array().cos();
}

Vector FeatureMap::apply(const Vector& x) const {
    Matrix row = apply(Matrix(x.transpose()));
    return row.transpose();
}

Matrix PrimalOperator::predict(const Matrix& X_query, const Matrix& obs_weights) const {
    require(obs_weights.rows() == G.cols(), "primal predict: weight dimension mismatch");
    return map.apply(X_query) * (G * obs_weights);
}

namespace {

PrimalOperator solve_ridge(FeatureMap map, const Matrix& C_X, const Matrix& C_XY, double gamma,
                           bool pseudo_inverse) {
    PsdSolver solver(C_X, gamma, pseudo_inverse, "C_X");
    PrimalOperator op;
    op.map = std::move(map);
    op.G = solver.solve(C_XY);
    return op;
}

PrimalOperator solve_pcr(FeatureMap map, const Matrix& C_X, const Matrix& C_XY, double gamma,
                         Index r) {
    SymEig es = eig_sym_desc(C_X);
    require(r >= 1 && r <= C_X.rows(), "PCR: rank out of range");
    const double floor = 1e-12 * std::abs(C_X.trace());
    if (es.values(r - 1) <= floor) throw NumericalError("rank exceeds data rank");
    const Matrix W_r = es.vectors.leftCols(r);
    Matrix mid = W_r.transpose() * C_X * W_r;
    mid.diagonal().array() += gamma;
    PrimalOperator op;
    op.map = std::move(map);
    op.G_left = W_r * mid.inverse();
    op.G_right = C_XY.transpose() * W_r;
    op.G = op.G_left * op.G_right.transpose();
    return op;
}

PrimalOperator solve_rrr(FeatureMap map, const Matrix& C_X, const Matrix& C_XY, double gamma,
                         Index r, bool pseudo_inverse) {
    require(r >= 1 && r <= C_X.rows(), "RRR: rank out of range");
    Matrix reg = C_X;
    reg.diagonal().array() += gamma;
    const double floor = 1e-12 * std::abs(reg.trace());
    SymEig es = eig_sym_desc(reg);
    if (!pseudo_inverse && es.values(es.values.size() - 1) <= floor)
        throw NumericalError("singular system; increase tikhonov (C_X)");
    Vector inv_sqrt = Vector::Zero(es.values.size());
    for (Index i = 0; i < es.values.size(); ++i)
        if (es.values(i) > floor) inv_sqrt(i) = 1.0 / std::sqrt(es.values(i));
    const Matrix whiten = es.vectors * inv_sqrt.asDiagonal() * es.vectors.transpose();
    const Matrix M = whiten * C_XY;
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Matrix Ur = svd.matrixU().leftCols(r);
    Matrix Vr = svd.matrixV().leftCols(r);
    const Vector sr = svd.singularValues().head(r);
    // Deterministic signs: align each left vector, flipping the pair.
    for (Index j = 0; j < r; ++j) {
        const double scale = Ur.col(j).cwiseAbs().maxCoeff();
        for (Index i = 0; i < Ur.rows(); ++i) {
            if (std::abs(Ur(i, j)) > 1e-14 * scale) {
                if (Ur(i, j) < 0.0) {
                    Ur.col(j) = -Ur.col(j);
                    Vr.col(j) = -Vr.col(j);
                }
                break;
            }
        }
    }
    PrimalOperator op;
    op.map = std::move(map);
    op.G_left = whiten * Ur * sr.asDiagonal();
    op.G_right = Vr;
    op.G = op.G_left * op.G_right.transpose();
    op.sigma2 = sr.array().square();
    return op;
}

}  // namespace

PrimalOperator fit_primal_features(FeatureMap map, const Matrix& A, const Matrix& B,
                                   Method method, double gamma, Index r, bool pseudo_inverse) {
    const auto n = static_cast<double>(A.rows());
    const Matrix C_X = A.transpose() * A / n;
    const Matrix C_XY = A.transpose() * B / n;
    switch (method) {
        case Method::Ridge: return solve_ridge(std::move(map), C_X, C_XY, gamma, pseudo_inverse);
        case Method::Pcr: return solve_pcr(std::move(map), C_X, C_XY, gamma, r);
        case Method::Rrr: return solve_rrr(std::move(map), C_X, C_XY, gamma, r, pseudo_inverse);
        default: throw ConfigError("fit_primal_features: method must be Ridge, PCR or RRR");
    }
}

PrimalOperator fit_primal_oracle(const FeatureMap& map, const EstimatorConfig& config,
                                 const SnapshotPair& pairs) {
    const Matrix A = map.apply(pairs.X);
    const Matrix B = map.apply(pairs.Y);
    return fit_primal_features(map, A, B, config.method, config.tikhonov, config.rank,
                               config.pseudo_inverse);
}

PrimalEig primal_eig(const PrimalOperator& op) {
    Eigen::EigenSolver<Matrix> es(op.G);
    if (es.info() != Eigen::Success) throw NumericalError("primal eigensolver failed");
    PrimalEig out;
    out.values = es.eigenvalues();
    out.right_vectors = es.eigenvectors();
    sort_eig_pairs(out.values, out.right_vectors);
    return out;
}

}  // namespace evolop
