#include "evolop/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace evolop {

Matrix pivoted_cholesky(const Matrix& K, double rel_tol) {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Index n = K.rows();
    require(K.cols() == n, "pivoted_cholesky: square matrix required");
    Vector diag = K.diagonal();
    const double trace = diag.sum();
    const double stop = std::max(rel_tol * std::abs(trace), 0.0);

    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    RowMajor L = RowMajor::Zero(n, n);  // rows contiguous for the update dots

    Index k = 0;
    double remaining = trace;
    while (k < n && remaining > stop) {
        // Pivot on the largest remaining diagonal entry.
        Index p = k;
        for (Index i = k + 1; i < n; ++i)
            if (diag(perm[i]) > diag(perm[p])) p = i;
        std::swap(perm[k], perm[p]);
        const Index piv = perm[k];
        const double dkk = diag(piv);
        if (dkk <= 0.0) break;
        const double lkk = std::sqrt(dkk);
        L(piv, k) = lkk;
        const auto lpiv = L.row(piv).head(k);
        for (Index i = k + 1; i < n; ++i) {
            const Index row = perm[i];
            const double v = K(row, piv) - L.row(row).head(k).dot(lpiv);
            const double lik = v / lkk;
            L(row, k) = lik;
            diag(row) -= lik * lik;
        }
        remaining -= dkk;
        if (remaining < 0.0) remaining = 0.0;
        ++k;
    }
    return Matrix(L.leftCols(std::max<Index>(k, 1)));
}

SymEig eig_sym_desc(const Matrix& S, bool clamp_to_zero) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(S);
    if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
    const Index n = S.rows();
    SymEig out;
    out.values = es.eigenvalues().reverse();
    out.vectors = es.eigenvectors().rowwise().reverse();
    if (clamp_to_zero) {
        const double floor = 1e-12 * std::abs(S.trace());
        for (Index i = 0; i < n; ++i)
            if (out.values(i) < 0.0 && out.values(i) >= -floor) out.values(i) = 0.0;
    }
    fix_column_signs(out.vectors);
    return out;
}

TopkResult topk_sym(const Matrix& S, Index k, Index dense_threshold) {
    require(k >= 1 && k <= S.rows(), "topk_sym: need 1 <= k <= n");
    if (S.rows() <= dense_threshold) {
        SymEig full = eig_sym_desc(S, false);
        TopkResult out;
        out.values = full.values.head(k);
        out.vectors = full.vectors.leftCols(k);
        return out;
    }
    return topk_sym(
        S.rows(), [&S](const Vector& v) -> Vector { return S.selfadjointView<Eigen::Lower>() * v; },
        k, dense_threshold);
}

TopkResult topk_sym(Index n, const std::function<Vector(const Vector&)>& matvec, Index k,
                    Index dense_threshold) {
    require(k >= 1 && k <= n, "topk_sym: need 1 <= k <= n");

    if (n <= dense_threshold) {
        Matrix S(n, n);
        for (Index j = 0; j < n; ++j) S.col(j) = matvec(Vector::Unit(n, j));
        S = 0.5 * (S + S.transpose());
        SymEig full = eig_sym_desc(S, false);
        TopkResult out;
        out.values = full.values.head(k);
        out.vectors = full.vectors.leftCols(k);
        return out;
    }

    // Lanczos with full reorthogonalization from a fixed deterministic start.
    const Index m = std::min<Index>(n, std::max<Index>(4 * k + 40, 80));
    Matrix Q(n, m + 1);
    Vector alpha(m), beta(m);
    Vector v = Vector::Ones(n);
    for (Index i = 0; i < n; ++i) v(i) += 1e-3 * std::sin(static_cast<double>(i + 1));
    v.normalize();
    Q.col(0) = v;

    Index steps = 0;
    for (Index j = 0; j < m; ++j) {
        Vector w = matvec(Q.col(j));
        const double a = Q.col(j).dot(w);
        alpha(j) = a;
        w -= a * Q.col(j);
        if (j > 0) w -= beta(j - 1) * Q.col(j - 1);
        // Full reorthogonalization, twice for safety.
        for (int pass = 0; pass < 2; ++pass)
            w -= Q.leftCols(j + 1) * (Q.leftCols(j + 1).transpose() * w);
        const double b = w.norm();
        steps = j + 1;
        if (b < 1e-14 * std::max(1.0, std::abs(a))) {
            beta(j) = 0.0;
            break;
        }
        beta(j) = b;
        Q.col(j + 1) = w / b;
    }

    Matrix T = Matrix::Zero(steps, steps);
    for (Index j = 0; j < steps; ++j) {
        T(j, j) = alpha(j);
        if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta(j);
    }
    SymEig te = eig_sym_desc(T, false);
    const Index kk = std::min<Index>(k, steps);
    TopkResult out;
    out.values = te.values.head(kk);
    out.vectors = Q.leftCols(steps) * te.vectors.leftCols(kk);
    for (Index j = 0; j < kk; ++j) out.vectors.col(j).normalize();
    fix_column_signs(out.vectors);
    if (kk < k) throw NumericalError("topk_sym: Krylov space exhausted before k eigenpairs");
    return out;
}

Matrix sym_inv_sqrt(const Matrix& S, double cutoff_rel) {
    SymEig es = eig_sym_desc(S, true);
    const double cutoff = cutoff_rel * std::abs(S.trace());
    const Index n = S.rows();
    Vector inv = Vector::Zero(n);
    for (Index i = 0; i < n; ++i)
        if (es.values(i) > cutoff) inv(i) = 1.0 / std::sqrt(es.values(i));
    return es.vectors * inv.asDiagonal() * es.vectors.transpose();
}

void sort_eig_pairs(CVector& values, CMatrix& vectors) {
    const Index n = values.size();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        const double ma = std::abs(values(a)), mb = std::abs(values(b));
        if (ma != mb) return ma > mb;
        if (values(a).real() != values(b).real()) return values(a).real() > values(b).real();
        return values(a).imag() > values(b).imag();
    });
    CVector sv(n);
    CMatrix svec(vectors.rows(), n);
    for (Index i = 0; i < n; ++i) {
        sv(i) = values(order[static_cast<std::size_t>(i)]);
        svec.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
    }
    values = std::move(sv);
    vectors = std::move(svec);
}

void fix_column_signs(Matrix& m) {
    for (Index j = 0; j < m.cols(); ++j) {
        const double scale = m.col(j).cwiseAbs().maxCoeff();
        if (scale == 0.0) continue;
        for (Index i = 0; i < m.rows(); ++i) {
            if (std::abs(m(i, j)) > 1e-14 * scale) {
                if (m(i, j) < 0.0) m.col(j) = -m.col(j);
                break;
            }
        }
    }
}

PsdSolver::PsdSolver(const Matrix& K, double shift, bool pseudo_inverse,
                     const std::string& label) {
    const Index n = K.rows();
    Matrix A = K;
    A.diagonal().array() += shift;
    const double floor = 1e-12 * std::abs(A.trace());

    if (!pseudo_inverse) {
        llt_.compute(A);
        bool ok = (llt_.info() == Eigen::Success);
        if (ok && shift <= 0.0) {
            // Cholesky can succeed on nearly singular matrices; enforce the
            // documented cutoff when no regularization was applied.
            const Vector d = llt_.matrixLLT().diagonal();
            ok = (d.array() * d.array() >= floor).all();
        }
        if (!ok)
            throw NumericalError("singular system; increase tikhonov (" + label + ")");
        return;
    }

    spectral_ = true;
    SymEig es = eig_sym_desc(A, true);
    Index kept = 0;
    for (Index i = 0; i < n; ++i)
        if (es.values(i) > floor) ++kept;
    if (kept == 0) throw NumericalError("matrix numerically zero: " + label);
    q_ = es.vectors.leftCols(kept);
    d_ = es.values.head(kept);
}

Vector PsdSolver::solve(const Vector& b) const {
    if (!spectral_) return llt_.solve(b);
    return q_ * (q_.transpose() * b).cwiseQuotient(d_);
}

Matrix PsdSolver::solve(const Matrix& B) const {
    if (!spectral_) return llt_.solve(B);
    Matrix t = q_.transpose() * B;
    t.array().colwise() /= d_.array();
    return q_ * t;
}

Matrix PsdSolver::half_solve(const Matrix& B) const {
    if (!spectral_) return llt_.matrixL().solve(B);
    Matrix t = q_.transpose() * B;
    t.array().colwise() /= d_.array().sqrt();
    return q_ * t;
}

Matrix PsdSolver::half_solve_t(const Matrix& B) const {
    if (!spectral_) return llt_.matrixU().solve(B);
    return half_solve(B);  // spectral factor is symmetric
}

}  // namespace evolop
