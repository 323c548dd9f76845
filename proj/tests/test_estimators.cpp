#include <cmath>

#include "doctest.h"
#include "evolop/estimators.hpp"
#include "evolop/linalg.hpp"
#include "evolop/primal.hpp"
#include "evolop/rng.hpp"
#include "evolop/spectral.hpp"

using namespace evolop;

namespace {

// Test-local one-sided Jacobi SVD, independent of Eigen's decompositions.
// A = U S V^T for square A; good to ~1e-12 on the small matrices used here.
void jacobi_svd(Matrix A, Matrix& U, Vector& S, Matrix& V) {
    const Index n = A.cols();
    V = Matrix::Identity(n, n);
    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (Index p = 0; p < n - 1; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const double alpha = A.col(p).squaredNorm();
                const double beta = A.col(q).squaredNorm();
                const double g = A.col(p).dot(A.col(q));
                off = std::max(off, std::abs(g) / std::sqrt(alpha * beta + 1e-300));
                if (std::abs(g) < 1e-15 * std::sqrt(alpha * beta)) continue;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = ((zeta >= 0) ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                const Vector ap = A.col(p);
                A.col(p) = c * ap - s * A.col(q);
                A.col(q) = s * ap + c * A.col(q);
                const Vector vp = V.col(p);
                V.col(p) = c * vp - s * V.col(q);
                V.col(q) = s * vp + c * V.col(q);
            }
        }
        if (off < 1e-15) break;
    }
    S = Vector(n);
    U = Matrix(A.rows(), n);
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) {
        S(j) = A.col(j).norm();
        order[static_cast<std::size_t>(j)] = j;
    }
    std::sort(order.begin(), order.end(), [&](Index a, Index b) { return S(a) > S(b); });
    Matrix A2(A.rows(), n), V2(n, n);
    Vector S2(n);
    for (Index j = 0; j < n; ++j) {
        A2.col(j) = A.col(order[static_cast<std::size_t>(j)]);
        V2.col(j) = V.col(order[static_cast<std::size_t>(j)]);
        S2(j) = S(order[static_cast<std::size_t>(j)]);
    }
    for (Index j = 0; j < n; ++j) U.col(j) = (S2(j) > 1e-300) ? Vector(A2.col(j) / S2(j))
                                                              : Vector::Zero(A.rows());
    S = S2;
    V = V2;
}

SnapshotPair linear_pairs(SplitMix64& rng, const Matrix& A, Index n, double noise) {
    const Index d = A.rows();
    Matrix traj(n + 1, d);
    traj.row(0) = rng.normal_matrix(d, 1).transpose();
    for (Index t = 0; t < n; ++t) {
        Vector x = traj.row(t).transpose();
        Vector y = A * x + noise * rng.normal_matrix(d, 1);
        traj.row(t + 1) = y.transpose();
    }
    return build_pairs(traj, 1);
}

// i.i.d. inputs, exact linear outputs: well-conditioned dual/primal testbed.
SnapshotPair iid_linear_pairs(SplitMix64& rng, const Matrix& A, Index n, double noise) {
    const Index d = A.rows();
    SnapshotPair p;
    p.X = rng.normal_matrix(n, d);
    p.Y = p.X * A.transpose();
    if (noise > 0.0) p.Y += noise * rng.normal_matrix(n, d);
    p.lag = 1;
    return p;
}

CVector sorted_moduli_eigs(const Matrix& M) {
    Eigen::EigenSolver<Matrix> es(M);
    CVector v = es.eigenvalues();
    CMatrix dummy = CMatrix::Zero(M.rows(), M.rows());
    sort_eig_pairs(v, dummy);
    return v;
}

// Largest relative deviation between dual predictions and the primal oracle
// on fresh probe points, over a set of random observables.
double dual_primal_prediction_gap(const FittedOperator& dual, const PrimalOperator& primal,
                                  const SnapshotPair& pairs, SplitMix64& rng) {
    const Index d = pairs.X.cols();
    const Matrix probes = rng.normal_matrix(12, d);
    const Matrix W = rng.normal_matrix(d, 3);  // observable weights, q = 3
    const Matrix f_Y = pairs.Y * W;            // identity features: phi(y)^T w = y^T w
    const Matrix pred_dual = dual.predict_values(probes, f_Y);
    const Matrix pred_primal = primal.predict(probes, W);
    return (pred_dual - pred_primal).norm() / std::max(pred_primal.norm(), 1e-12);
}

}  // namespace

TEST_CASE("build_pairs slices trajectories") {
    Matrix traj(5, 1);
    traj << 0, 1, 2, 3, 4;
    const auto p1 = build_pairs(traj, 1);
    CHECK(p1.X.rows() == 4);
    CHECK(p1.X(0, 0) == 0.0);
    CHECK(p1.X(3, 0) == 3.0);
    CHECK(p1.Y(0, 0) == 1.0);
    CHECK(p1.Y(3, 0) == 4.0);

    const auto p2 = build_pairs(traj, 2);
    CHECK(p2.X.rows() == 3);
    CHECK(p2.Y(0, 0) == 2.0);

    Matrix short_traj(3, 1);
    short_traj.setZero();
    CHECK_THROWS_WITH_AS(build_pairs(short_traj, 3), "trajectory shorter than lag", ConfigError);
}

TEST_CASE("ridge on identity dynamics has leading eigenvalue 1") {
    SplitMix64 rng(100);
    SnapshotPair p;
    p.X = rng.normal_matrix(40, 2);
    p.Y = p.X;
    p.lag = 1;
    EstimatorConfig cfg;
    cfg.method = Method::Ridge;
    cfg.tikhonov = 1e-12;
    const auto op = fit(cfg, KernelSpec::linear(), p);
    const Matrix K_YX = gram_matrix(op.kernel, op.Y_train, op.X_train);
    const CVector eigs = sorted_moduli_eigs(op.V.transpose() * K_YX * op.U);
    CHECK(std::abs(eigs(0) - Complex(1.0, 0.0)) < 1e-6);
}

TEST_CASE("ridge recovers the decay rate of 1-d contraction") {
    SplitMix64 rng(101);
    Matrix A(1, 1);
    A << 0.5;
    const auto p = linear_pairs(rng, A, 50, 0.0);
    EstimatorConfig cfg;
    cfg.method = Method::Ridge;
    cfg.tikhonov = 1e-10;
    const auto op = fit(cfg, KernelSpec::linear(), p);
    const Matrix K_YX = gram_matrix(op.kernel, op.Y_train, op.X_train);
    const CVector eigs = sorted_moduli_eigs(op.V.transpose() * K_YX * op.U);
    CHECK(std::abs(eigs(0) - Complex(0.5, 0.0)) < 1e-6);
}

TEST_CASE("primal oracle: ridge closed form on 1-d contraction") {
    SplitMix64 rng(102);
    Matrix A(1, 1);
    A << 0.5;
    const auto p = iid_linear_pairs(rng, A, 60, 0.0);
    EstimatorConfig cfg;
    cfg.method = Method::Ridge;
    cfg.tikhonov = 0.0;
    cfg.pseudo_inverse = false;  // C_X nonsingular here
    const auto oracle = fit_primal_oracle(FeatureMap::identity(1), cfg, p);
    CHECK(oracle.G(0, 0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("primal oracle: full-rank RRR with gamma=0 equals ridge") {
    SplitMix64 rng(103);
    Matrix A(3, 3);
    A.setZero();
    A.diagonal() << 0.9, 0.6, -0.3;
    const auto p = iid_linear_pairs(rng, A, 80, 0.02);
    EstimatorConfig ridge_cfg;
    ridge_cfg.method = Method::Ridge;
    ridge_cfg.tikhonov = 0.0;
    EstimatorConfig rrr_cfg = ridge_cfg;
    rrr_cfg.method = Method::Rrr;
    rrr_cfg.rank = 3;
    const auto map = FeatureMap::identity(3);
    const auto ridge = fit_primal_oracle(map, ridge_cfg, p);
    const auto rrr = fit_primal_oracle(map, rrr_cfg, p);
    CHECK((ridge.G - rrr.G).norm() < 1e-10 * ridge.G.norm());
}

TEST_CASE("primal oracle: rank-1 RRR matches a from-scratch SVD solution") {
    SplitMix64 rng(104);
    Matrix A(2, 2);
    A << 0.8, 0.3, 0.0, 0.4;
    const auto p = iid_linear_pairs(rng, A, 70, 0.05);
    EstimatorConfig cfg;
    cfg.method = Method::Rrr;
    cfg.rank = 1;
    cfg.tikhonov = 1e-6;
    const auto op = fit_primal_oracle(FeatureMap::identity(2), cfg, p);

    // Independent route: whiten, Jacobi-SVD, truncate, unwhiten.
    const double n = static_cast<double>(p.X.rows());
    const Matrix C_X = p.X.transpose() * p.X / n;
    const Matrix C_XY = p.X.transpose() * p.Y / n;
    Matrix reg = C_X;
    reg.diagonal().array() += cfg.tikhonov;
    Eigen::SelfAdjointEigenSolver<Matrix> es(reg);
    const Matrix whiten = es.operatorInverseSqrt();
    Matrix U, V;
    Vector S;
    jacobi_svd(whiten * C_XY, U, S, V);
    const Matrix G_ref = whiten * (S(0) * U.col(0) * V.col(0).transpose());
    CHECK((op.G - G_ref).norm() < 1e-8 * G_ref.norm());
}

TEST_CASE("dual/primal equivalence on 50 random small instances") {
    SplitMix64 rng(2025);
    int instances = 0;
    while (instances < 50) {
        const Index d = 1 + static_cast<Index>(rng.uniform_below(4));
        const Index n = 20 + static_cast<Index>(rng.uniform_below(81));
        Matrix A = 0.5 * rng.normal_matrix(d, d);
        const auto p = iid_linear_pairs(rng, A, n, 0.05);
        const double gamma = 1e-7 * (1.0 + rng.uniform());
        const Index r = 1 + static_cast<Index>(rng.uniform_below(static_cast<std::uint64_t>(d)));
        const auto map = FeatureMap::identity(d);

        for (const Method method : {Method::Ridge, Method::Pcr, Method::Rrr}) {
            EstimatorConfig cfg;
            cfg.method = method;
            cfg.rank = static_cast<int>(method == Method::Pcr || method == Method::Rrr ? r : d);
            cfg.tikhonov = gamma;
            const auto dual = fit(cfg, KernelSpec::linear(), p);
            const auto primal = fit_primal_oracle(map, cfg, p);

            CHECK(dual_primal_prediction_gap(dual, primal, p, rng) < 1e-8);

            // nonzero spectrum agreement
            const Matrix K_YX = gram_matrix(dual.kernel, dual.Y_train, dual.X_train);
            const CVector dual_eigs = sorted_moduli_eigs(dual.V.transpose() * K_YX * dual.U);
            const CVector primal_eigs = sorted_moduli_eigs(primal.G);
            const Index n_cmp = std::min<Index>(cfg.rank, primal_eigs.size());
            for (Index j = 0; j < n_cmp; ++j) {
                if (std::abs(primal_eigs(j)) < 1e-8) break;
                CHECK(std::abs(dual_eigs(j) - primal_eigs(j)) <
                      1e-8 * std::max(1.0, std::abs(primal_eigs(j))));
            }
        }
        ++instances;
    }
}

TEST_CASE("RRR recovers the spectrum of a noisy 2-d linear system") {
    SplitMix64 rng(404);
    Matrix A(2, 2);
    A << 0.9, 0.0, 0.0, 0.5;
    const auto p = linear_pairs(rng, A, 2000, 0.05);
    EstimatorConfig cfg;
    cfg.method = Method::Rrr;
    cfg.rank = 2;
    cfg.tikhonov = 1e-6;
    const auto op = fit(cfg, KernelSpec::linear(), p);
    const Matrix K_YX = gram_matrix(op.kernel, op.Y_train, op.X_train);
    const CVector eigs = sorted_moduli_eigs(op.V.transpose() * K_YX * op.U);
    CHECK(std::abs(eigs(0) - Complex(0.9, 0.0)) < 0.05);
    CHECK(std::abs(eigs(1) - Complex(0.5, 0.0)) < 0.05);
}

TEST_CASE("rrr_dual_solve interpolates in the ridgeless full-rank limit") {
    SplitMix64 rng(505);
    const Index n = 25;
    const Matrix X = rng.normal_matrix(n, 2);
    const Matrix Y = rng.normal_matrix(n, 2);
    const auto spec = KernelSpec::gaussian(1.5);
    const Matrix K_X = gram_matrix(spec, X, X);
    const Matrix K_Y = gram_matrix(spec, Y, Y);
    const auto w = rrr_dual_solve(K_X, K_Y, 0.0, n, false);
    // training predictions from X_i reproduce the targets f(y_i)
    const Vector f_Y = Y.col(0);
    const Vector pred = K_X * (w.U * (w.V.transpose() * f_Y));
    CHECK((pred - f_Y).norm() / std::sqrt(static_cast<double>(n)) < 1e-6);
    // sigma^2 sorted nonincreasing
    for (Index j = 1; j < w.sigma2.size(); ++j) CHECK(w.sigma2(j) <= w.sigma2(j - 1) + 1e-12);
}

TEST_CASE("pcr_dual_solve normalization and rank guard") {
    SplitMix64 rng(606);
    const Matrix X = rng.normal_matrix(30, 3);
    const auto spec = KernelSpec::gaussian(1.0);
    const Matrix K_X = gram_matrix(spec, X, X);
    const auto w = pcr_dual_solve(K_X, 1e-8, 5);
    const Matrix gram_u = w.U.transpose() * K_X * w.U;
    CHECK((gram_u - 30.0 * Matrix::Identity(5, 5)).norm() < 1e-8 * 30.0);

    // rank beyond the numerical rank of a linear-kernel Gram errors
    const Matrix K_lin = gram_matrix(KernelSpec::linear(), X, X);  // rank 3
    CHECK_THROWS_WITH_AS(pcr_dual_solve(K_lin, 1e-8, 10), "rank exceeds data rank",
                         NumericalError);
}

TEST_CASE("PCR with full rank and shared gamma equals kernel ridge") {
    SplitMix64 rng(707);
    const Index n = 40;
    Matrix A(2, 2);
    A << 0.7, 0.1, -0.2, 0.4;
    const auto p = iid_linear_pairs(rng, A, n, 0.1);
    const auto spec = KernelSpec::gaussian(2.0);
    const Matrix K_X = gram_matrix(spec, p.X, p.X);
    const double gamma = 1e-4;
    const auto ridge = ridge_dual_solve(K_X, gamma, false);
    const auto pcr = pcr_dual_solve(K_X, gamma, n);
    const Matrix probes = rng.normal_matrix(10, 2);
    const Matrix K_q = gram_matrix(spec, probes, p.X);
    const Matrix f_Y = p.Y;
    const Matrix pred_r = K_q * (ridge.U * (ridge.V.transpose() * f_Y));
    const Matrix pred_p = K_q * (pcr.U * (pcr.V.transpose() * f_Y));
    CHECK((pred_r - pred_p).norm() < 1e-6 * std::max(1.0, pred_r.norm()));
}

TEST_CASE("RRR with full rank and shared gamma equals kernel ridge") {
    SplitMix64 rng(708);
    const Index n = 35;
    Matrix A(2, 2);
    A << 0.6, 0.0, 0.1, 0.3;
    const auto p = iid_linear_pairs(rng, A, n, 0.1);
    const auto spec = KernelSpec::gaussian(1.2);
    const Matrix K_X = gram_matrix(spec, p.X, p.X);
    const Matrix K_Y = gram_matrix(spec, p.Y, p.Y);
    const double gamma = 1e-5;
    const auto ridge = ridge_dual_solve(K_X, gamma, false);
    const auto rrr = rrr_dual_solve(K_X, K_Y, gamma, n, false);
    const Matrix probes = rng.normal_matrix(10, 2);
    const Matrix K_q = gram_matrix(spec, probes, p.X);
    const Matrix pred_r = K_q * (ridge.U * (ridge.V.transpose() * p.Y));
    const Matrix pred_x = K_q * (rrr.U * (rrr.V.transpose() * p.Y));
    CHECK((pred_r - pred_x).norm() < 1e-6 * std::max(1.0, pred_r.norm()));
}

TEST_CASE("randomized RRR: determinism and exactness at r+p = n") {
    SplitMix64 rng(809);
    const Index n = 60;
    Matrix A(3, 3);
    A.setZero();
    A.diagonal() << 0.9, 0.5, 0.2;
    const auto p = iid_linear_pairs(rng, A, n, 0.05);
    const auto spec = KernelSpec::gaussian(1.5);
    const Matrix K_X = gram_matrix(spec, p.X, p.X);
    const Matrix K_Y = gram_matrix(spec, p.Y, p.Y);
    const double gamma = 1e-6;
    const Index r = 3;

    const auto exact = rrr_dual_solve(K_X, K_Y, gamma, r, false);
    const auto rand1 = randomized_rrr_solve(K_X, K_Y, gamma, r, n - r, 1, 42, false);
    const auto rand2 = randomized_rrr_solve(K_X, K_Y, gamma, r, n - r, 1, 42, false);

    CHECK(rand1.U == rand2.U);  // bit-identical under the same seed
    CHECK(rand1.V == rand2.V);
    CHECK(rand1.sigma2 == rand2.sigma2);

    for (Index j = 0; j < r; ++j)
        CHECK(rand1.sigma2(j) == doctest::Approx(exact.sigma2(j)).epsilon(1e-8));
    const Matrix probes = rng.normal_matrix(8, 3);
    const Matrix K_q = gram_matrix(spec, probes, p.X);
    const Matrix pe = K_q * (exact.U * (exact.V.transpose() * p.Y));
    const Matrix pr = K_q * (rand1.U * (rand1.V.transpose() * p.Y));
    CHECK((pe - pr).norm() < 1e-8 * std::max(1.0, pe.norm()));

    CHECK_THROWS_AS(randomized_rrr_solve(K_X, K_Y, gamma, r, n, 1, 0, false), ConfigError);
}

TEST_CASE("power iterations improve the sketched leading eigenvalue") {
    // Median (20 seeds) leading-eigenvalue error with q=3 must not exceed q=0.
    SplitMix64 rng(910);
    const Index n = 500;
    Matrix traj(n + 1, 1);
    traj(0, 0) = 0.1;
    // slow-mixing 1-d double-well surrogate of the quadwell Gram structure
    for (Index t = 0; t < n; ++t) {
        const double x = traj(t, 0);
        traj(t + 1, 0) = x - 0.05 * (4.0 * x * x * x - 4.0 * x) + 0.3 * rng.normal();
    }
    const auto p = build_pairs(traj, 1);
    const auto spec = KernelSpec::gaussian(0.5);
    const Matrix K_X = gram_matrix(spec, p.X, p.X);
    const Matrix K_Y = gram_matrix(spec, p.Y, p.Y);
    const double gamma = 1e-6;
    const Index r = 4;

    const auto exact = rrr_dual_solve(K_X, K_Y, gamma, r, false);
    const Matrix K_YX = gram_matrix(spec, p.Y, p.X);
    const auto lead_eig = [&](const DualWeights& w) {
        return std::abs(sorted_moduli_eigs(w.V.transpose() * K_YX * w.U)(0));
    };
    const double ref = lead_eig(exact);

    std::vector<double> err_q0, err_q3;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        err_q0.push_back(std::abs(
            lead_eig(randomized_rrr_solve(K_X, K_Y, gamma, r, 2, 0, seed, false)) - ref));
        err_q3.push_back(std::abs(
            lead_eig(randomized_rrr_solve(K_X, K_Y, gamma, r, 2, 3, seed, false)) - ref));
    }
    std::sort(err_q0.begin(), err_q0.end());
    std::sort(err_q3.begin(), err_q3.end());
    CHECK(err_q3[10] <= err_q0[10] + 1e-12);
}

TEST_CASE("nystrom with m = n matches the exact estimators") {
    SplitMix64 rng(111);
    const Index n = 80;
    Matrix A(2, 2);
    A << 0.8, 0.1, 0.0, 0.5;
    const auto p = iid_linear_pairs(rng, A, n, 0.05);
    const auto spec = KernelSpec::gaussian(1.0);
    const Matrix probes = rng.normal_matrix(10, 2);

    for (const Method inner : {Method::Pcr, Method::Rrr}) {
        EstimatorConfig cfg;
        cfg.method = inner;
        cfg.rank = 2;
        cfg.tikhonov = 1e-6;
        const auto exact = fit(cfg, spec, p);
        const auto nys = nystrom_fit(inner, spec, p, cfg.tikhonov, cfg.rank, n, 7);
        const Matrix pe = exact.predict_values(probes, exact.Y_train.col(0));
        const Matrix pn = nys.predict_values(probes, nys.Y_train.col(0));
        CHECK((pe - pn).norm() < 1e-6 * std::max(1.0, pe.norm()));
    }
}

TEST_CASE("nystrom with m = 1 is a rank-1 operator") {
    SplitMix64 rng(112);
    Matrix A(1, 1);
    A << 0.7;
    const auto p = iid_linear_pairs(rng, A, 50, 0.1);
    const auto op = nystrom_fit(Method::Pcr, KernelSpec::gaussian(1.0), p, 1e-8, 1, 1, 3);
    CHECK(op.n_train() == 1);
    CHECK(op.rank() == 1);
    const Matrix K_YX = gram_matrix(op.kernel, op.Y_train, op.X_train);
    const Matrix M = op.V.transpose() * K_YX * op.U;
    CHECK(M.rows() == 1);  // exactly one eigenvalue
}

TEST_CASE("permuting sample pairs leaves predictions and eigenvalues unchanged") {
    SplitMix64 rng(113);
    const Index n = 60;
    Matrix A(2, 2);
    A << 0.9, 0.05, 0.0, 0.4;
    const auto p = iid_linear_pairs(rng, A, n, 0.05);
    SnapshotPair shuffled = p;
    const auto perm = SplitMix64(5).sample_without_replacement(n, n);
    std::vector<Index> order(perm.size());
    SplitMix64 prng(5);
    // Fisher-Yates on indices for an actual permutation
    std::vector<Index> idx(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (Index i = n - 1; i > 0; --i) {
        const auto j = static_cast<Index>(prng.uniform_below(static_cast<std::uint64_t>(i + 1)));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
    }
    for (Index i = 0; i < n; ++i) {
        shuffled.X.row(i) = p.X.row(idx[static_cast<std::size_t>(i)]);
        shuffled.Y.row(i) = p.Y.row(idx[static_cast<std::size_t>(i)]);
    }

    EstimatorConfig cfg;
    cfg.method = Method::Rrr;
    cfg.rank = 2;
    cfg.tikhonov = 1e-6;
    const auto spec = KernelSpec::gaussian(1.0);
    const auto a = fit(cfg, spec, p);
    const auto b = fit(cfg, spec, shuffled);
    const Matrix probes = rng.normal_matrix(10, 2);
    const Matrix pa = a.predict_values(probes, a.Y_train.col(0));
    const Matrix pb = b.predict_values(probes, b.Y_train.col(0));
    CHECK((pa - pb).norm() < 1e-9 * std::max(1.0, pa.norm()));

    const Matrix Ka = gram_matrix(spec, a.Y_train, a.X_train);
    const Matrix Kb = gram_matrix(spec, b.Y_train, b.X_train);
    const CVector ea = sorted_moduli_eigs(a.V.transpose() * Ka * a.U);
    const CVector eb = sorted_moduli_eigs(b.V.transpose() * Kb * b.U);
    for (Index j = 0; j < 2; ++j) CHECK(std::abs(ea(j) - eb(j)) < 1e-9);
}

TEST_CASE("rank bound: modulus-significant eigenvalues never exceed r") {
    SplitMix64 rng(114);
    Matrix A(3, 3);
    A.setZero();
    A.diagonal() << 0.9, 0.6, 0.3;
    const auto p = iid_linear_pairs(rng, A, 70, 0.05);
    const auto spec = KernelSpec::gaussian(1.0);
    for (const Method m : {Method::Pcr, Method::Rrr, Method::RandRrr, Method::NystromRrr}) {
        EstimatorConfig cfg;
        cfg.method = m;
        cfg.rank = 2;
        cfg.tikhonov = 1e-6;
        cfg.inducing = 30;
        cfg.seed = 9;
        const auto op = fit(cfg, spec, p);
        const Matrix K_YX = gram_matrix(spec, op.Y_train, op.X_train);
        const CVector eigs = sorted_moduli_eigs(op.V.transpose() * K_YX * op.U);
        int significant = 0;
        for (Index j = 0; j < eigs.size(); ++j)
            if (std::abs(eigs(j)) > 1e-10 * std::abs(eigs(0))) ++significant;
        CHECK(significant <= 2);
    }
}

TEST_CASE("config validation errors") {
    SplitMix64 rng(115);
    const auto p = iid_linear_pairs(rng, Matrix::Identity(2, 2), 20, 0.0);
    EstimatorConfig cfg;
    cfg.method = Method::Rrr;
    cfg.rank = 25;  // > n
    CHECK_THROWS_AS(fit(cfg, KernelSpec::linear(), p), ConfigError);
    cfg.rank = 2;
    cfg.tikhonov = -1.0;
    CHECK_THROWS_AS(fit(cfg, KernelSpec::linear(), p), ConfigError);
    cfg.tikhonov = 0.0;
    cfg.method = Method::NystromRrr;
    cfg.inducing = 0;
    CHECK_THROWS_AS(fit(cfg, KernelSpec::linear(), p), ConfigError);
}

TEST_CASE("gamma = 0 on a singular Gram errors unless pseudo-inverse is enabled") {
    SplitMix64 rng(116);
    const auto p = iid_linear_pairs(rng, Matrix::Identity(2, 2), 30, 0.0);
    const Matrix K_lin = gram_matrix(KernelSpec::linear(), p.X, p.X);  // rank 2 < n
    CHECK_THROWS_AS(ridge_dual_solve(K_lin, 0.0, false), NumericalError);
    const auto w = ridge_dual_solve(K_lin, 0.0, true);
    CHECK(w.U.allFinite());
}
