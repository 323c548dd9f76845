#include "evolop/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <thread>

namespace evolop {
namespace {

// Scalar kernel on raw rows. Plain loops, no vectorized reductions: the
// Gram assembly and kernel_eval must agree bit-for-bit.
double eval_raw(const KernelSpec& s, const double* a, const double* b, Index d) {
    switch (s.family) {
        case KernelFamily::Gaussian: {
            double sq = 0.0;
            for (Index i = 0; i < d; ++i) {
                const double diff = a[i] - b[i];
                sq += diff * diff;
            }
            return std::exp(-sq / (2.0 * s.lengthscale * s.lengthscale));
        }
        case KernelFamily::Laplacian: {
            double l1 = 0.0;
            for (Index i = 0; i < d; ++i) l1 += std::abs(a[i] - b[i]);
            return std::exp(-l1 / s.lengthscale);
        }
        case KernelFamily::Linear: {
            double dot = 0.0;
            for (Index i = 0; i < d; ++i) dot += a[i] * b[i];
            return dot;
        }
        case KernelFamily::Polynomial: {
            double dot = 0.0;
            for (Index i = 0; i < d; ++i) dot += a[i] * b[i];
            return std::pow(dot + s.offset, static_cast<double>(s.degree));
        }
    }
    throw ConfigError("kernel_eval: unknown family");
}

void parallel_rows(Index n, const std::function<void(Index, Index)>& body) {
    const int threads = thread_budget();
    if (threads <= 1 || n < 256) {
        body(0, n);
        return;
    }
    const Index chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    for (Index lo = 0; lo < n; lo += chunk) {
        const Index hi = std::min(n, lo + chunk);
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

KernelSpec KernelSpec::gaussian(double lengthscale) {
    KernelSpec s;
    s.family = KernelFamily::Gaussian;
    s.lengthscale = lengthscale;
    s.validate();
    return s;
}

KernelSpec KernelSpec::laplacian(double lengthscale) {
    KernelSpec s;
    s.family = KernelFamily::Laplacian;
    s.lengthscale = lengthscale;
    s.validate();
    return s;
}

KernelSpec KernelSpec::linear() {
    KernelSpec s;
    s.family = KernelFamily::Linear;
    return s;
}

KernelSpec KernelSpec::polynomial(int degree, double offset) {
    KernelSpec s;
    s.family = KernelFamily::Polynomial;
    s.degree = degree;
    s.offset = offset;
    s.validate();
    return s;
}

void KernelSpec::validate() const {
    switch (family) {
        case KernelFamily::Gaussian:
        case KernelFamily::Laplacian:
            require(lengthscale > 0.0 && std::isfinite(lengthscale),
                    "kernel: lengthscale must be positive");
            break;
        case KernelFamily::Linear:
            break;
        case KernelFamily::Polynomial:
            require(degree >= 1, "kernel: polynomial degree must be >= 1");
            require(offset >= 0.0 && std::isfinite(offset),
                    "kernel: polynomial offset must be >= 0");
            break;
    }
}

std::string KernelSpec::family_name() const {
    switch (family) {
        case KernelFamily::Gaussian: return "gaussian";
        case KernelFamily::Laplacian: return "laplacian";
        case KernelFamily::Linear: return "linear";
        case KernelFamily::Polynomial: return "polynomial";
    }
    return "unknown";
}

double kernel_eval(const KernelSpec& spec, const Vector& x, const Vector& y) {
    spec.validate();
    require(x.size() == y.size(), "kernel_eval: dimension mismatch");
    require(x.allFinite() && y.allFinite(), "kernel_eval: non-finite input");
    return eval_raw(spec, x.data(), y.data(), x.size());
}

Matrix gram_matrix(const KernelSpec& spec, const Matrix& X, const Matrix& Z) {
    spec.validate();
    require(X.cols() == Z.cols(), "gram_matrix: dimension mismatch");
    require(X.rows() >= 1 && Z.rows() >= 1, "gram_matrix: empty input");
    require(X.allFinite() && Z.allFinite(), "gram_matrix: non-finite input");

    const Index n = X.rows(), m = Z.rows(), d = X.cols();
    // Row-major copies so each sample is contiguous for eval_raw.
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const RowMajor Xr = X;
    const bool symmetric = (&X == &Z) || (n == m && X == Z);

    Matrix K(n, m);
    if (symmetric) {
        parallel_rows(n, [&](Index lo, Index hi) {
            for (Index i = lo; i < hi; ++i)
                for (Index j = i; j < n; ++j)
                    K(i, j) = eval_raw(spec, Xr.data() + i * d, Xr.data() + j * d, d);
        });
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < i; ++j) K(i, j) = K(j, i);
        return K;
    }

    const RowMajor Zr = Z;
    parallel_rows(n, [&](Index lo, Index hi) {
        for (Index i = lo; i < hi; ++i)
            for (Index j = 0; j < m; ++j)
                K(i, j) = eval_raw(spec, Xr.data() + i * d, Zr.data() + j * d, d);
    });
    return K;
}

Vector kernel_row(const KernelSpec& spec, const Vector& x, const Matrix& Z) {
    spec.validate();
    require(x.size() == Z.cols(), "kernel_row: dimension mismatch");
    require(x.allFinite() && Z.allFinite(), "kernel_row: non-finite input");
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const RowMajor Zr = Z;
    const Index d = x.size();
    Vector out(Z.rows());
    for (Index j = 0; j < Z.rows(); ++j) out(j) = eval_raw(spec, x.data(), Zr.data() + j * d, d);
    return out;
}

}  // namespace evolop
