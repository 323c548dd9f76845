#include "evolop/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>

#include "evolop/linalg.hpp"

namespace evolop {

SpectralDecomposition eig_decomposition(const FittedOperator& model) {
    require(model.rank() >= 1, "eig_decomposition: model has rank 0");
    const Index n = model.n_train();
    const Index r = model.rank();
    const double dn = static_cast<double>(n);

    const Matrix K_YX = gram_matrix(model.kernel, model.Y_train, model.X_train);
    const Matrix M = model.V.transpose() * K_YX * model.U;

    Eigen::EigenSolver<Matrix> es(M);
    if (es.info() != Eigen::Success) throw NumericalError("eig_decomposition: solver failed");
    CVector values = es.eigenvalues();
    CMatrix W = es.eigenvectors();
    sort_eig_pairs(values, W);

    SpectralDecomposition d;
    d.kernel = model.kernel;
    d.X_train = model.X_train;
    d.Y_train = model.Y_train;
    d.lag = model.lag;
    d.eigenvalues = values;

    // Defective within tolerance: eigenvector matrix numerically singular.
    Eigen::JacobiSVD<CMatrix> wsvd(W);
    const double cond = wsvd.singularValues()(0) /
                        std::max(wsvd.singularValues()(r - 1), 1e-300);
    d.non_diagonalizable = !(cond < 1e12);

    // Right eigenfunctions: dual coefficients C = U * W, scaled per column to
    // unit empirical norm with the largest training value made real-positive.
    CMatrix C = model.U.cast<Complex>() * W;
    const Matrix K_X = gram_matrix(model.kernel, model.X_train, model.X_train);
    CMatrix psi = K_X.cast<Complex>() * C;
    CVector right_scale(r);
    for (Index j = 0; j < r; ++j) {
        const double norm = std::max(psi.col(j).norm() / std::sqrt(dn), 1e-154);
        Index imax = 0;
        psi.col(j).cwiseAbs().maxCoeff(&imax);
        Complex phase = psi(imax, j) / std::max(std::abs(psi(imax, j)), 1e-154);
        const Complex t = std::conj(phase) / norm;
        C.col(j) *= t;
        right_scale(j) = t;
    }
    d.right_coeffs = C;

    // Left eigenfunctions from the transposed restriction problem,
    // biorthonormalized: with G = (W^H)^{-1} and the right column scalings t_j,
    // scaling column j of V*G by conj(n / (lambda_j t_j)) makes the empirical
    // pairing with the right set the identity.
    CMatrix G = W.inverse().adjoint();
    CMatrix left = model.V.cast<Complex>() * G;
    for (Index j = 0; j < r; ++j) {
        const Complex denom = values(j) * right_scale(j);
        left.col(j) *= (std::abs(denom) < 1e-300) ? Complex(0.0, 0.0)
                                                  : std::conj(dn / denom);
    }
    d.left_coeffs = left;
    return d;
}

CMatrix eval_eigenfunctions(const SpectralDecomposition& decomp, const Matrix& X_new, Side side) {
    const Matrix& anchors = (side == Side::Right) ? decomp.X_train : decomp.Y_train;
    require(X_new.cols() == anchors.cols(), "eval_eigenfunctions: dimension mismatch");
    const Matrix K = gram_matrix(decomp.kernel, X_new, anchors);
    const CMatrix& coeffs = (side == Side::Right) ? decomp.right_coeffs : decomp.left_coeffs;
    return K.cast<Complex>() * coeffs;
}

ModeSet compute_modes(const SpectralDecomposition& decomp, const Matrix& f_Y) {
    if (decomp.non_diagonalizable) throw NumericalError("modes undefined");
    require(f_Y.rows() == decomp.Y_train.rows(),
            "compute_modes: observable rows must match training samples");
    const double dn = static_cast<double>(decomp.Y_train.rows());
    ModeSet m;
    m.observable_values = f_Y;
    m.modes = decomp.left_coeffs.adjoint() * f_Y.cast<Complex>() / dn;
    return m;
}

Matrix predict(const FittedOperator& model, const Vector& x0, const Matrix& f_Y, int steps,
               PredictMethod method, double* imag_residual) {
    require(steps >= 1, "predict: steps must be >= 1");
    require(x0.size() == model.state_dim(), "predict: x0 dimension mismatch");
    const Index q = f_Y.cols();

    if (method == PredictMethod::Rollout) {
        require(q == model.state_dim(),
                "predict: rollout requires the identity observable (q = d)");
        Matrix out(steps, q);
        Vector x = x0;
        for (int k = 0; k < steps; ++k) {
            const Matrix row = model.predict_values(Matrix(x.transpose()), f_Y);
            out.row(k) = row.row(0);
            x = model.predict_state(x);
        }
        if (imag_residual) *imag_residual = 0.0;
        return out;
    }

    const SpectralDecomposition decomp = eig_decomposition(model);
    const ModeSet modes = compute_modes(decomp, f_Y);
    const CMatrix psi0 = eval_eigenfunctions(decomp, Matrix(x0.transpose()), Side::Right);
    const Index r = decomp.eigenvalues.size();

    CMatrix out_c(steps, q);
    CVector lam_pow = CVector::Ones(r);
    for (int k = 0; k < steps; ++k) {
        lam_pow.array() *= decomp.eigenvalues.array();
        out_c.row(k) = (psi0.row(0).array() * lam_pow.transpose().array()).matrix() * modes.modes;
    }
    const double scale = out_c.real().norm();
    const double resid = out_c.imag().norm();
    if (imag_residual) *imag_residual = resid;
    if (resid > 1e-6 * std::max(scale, 1e-12))
        throw NumericalError("predict: spectral forecast has non-negligible imaginary part");
    return out_c.real();
}

}  // namespace evolop
