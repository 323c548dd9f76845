#pragma once

#include <string>

#include "evolop/common.hpp"

namespace evolop {

enum class KernelFamily { Gaussian, Laplacian, Linear, Polynomial };

/// A positive-definite kernel family with hyperparameters. The kernel fixes
/// the representation in which the evolution operator is learned.
///
/// Conventions:
///   Gaussian   k(x,y) = exp(-|x-y|^2 / (2 l^2))      (lengthscale l > 0)
///   Laplacian  k(x,y) = exp(-|x-y|_1 / l)
///   Linear     k(x,y) = <x,y>
///   Polynomial k(x,y) = (<x,y> + c)^p                (degree p >= 1, offset c >= 0)
struct KernelSpec {
    KernelFamily family = KernelFamily::Gaussian;
    double lengthscale = 1.0;
    int degree = 2;
    double offset = 0.0;

    static KernelSpec gaussian(double lengthscale);
    static KernelSpec laplacian(double lengthscale);
    static KernelSpec linear();
    static KernelSpec polynomial(int degree, double offset);

    void validate() const;
    std::string family_name() const;
};

/// k(x, y). Throws ConfigError on dimension mismatch or non-finite input.
double kernel_eval(const KernelSpec& spec, const Vector& x, const Vector& y);

/// Pairwise kernel matrix, entry (i,j) = k(X.row(i), Z.row(j)), bit-identical
/// to kernel_eval on the same rows. When Z is X (same object or equal values)
/// only the upper triangle is computed and mirrored, so the result is exactly
/// symmetric. Rows may be assembled in parallel; the result does not depend
/// on the thread count.
Matrix gram_matrix(const KernelSpec& spec, const Matrix& X, const Matrix& Z);

/// Kernel row [k(x, Z_0), ..., k(x, Z_{m-1})] for a single query point.
Vector kernel_row(const KernelSpec& spec, const Vector& x, const Matrix& Z);

}  // namespace evolop
