#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace evolop {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;
using Index = Eigen::Index;

/// Invalid configuration or precondition violation (bad shapes, bad
/// hyperparameters, malformed input). Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// A simulation left the representable domain (blow-up). CLI exit code 3.
class SimulationError : public std::runtime_error {
public:
    explicit SimulationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure inside a solver (singular system, failed
/// factorization, defective decomposition). CLI exit code 4.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A persisted artifact failed validation (bad magic, version, checksum).
/// CLI exit code 5.
class ArtifactError : public std::runtime_error {
public:
    explicit ArtifactError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A ground-truth oracle did not converge at the requested resolution.
/// CLI exit code 6.
class OracleError : public std::runtime_error {
public:
    explicit OracleError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Number of worker threads for internal parallel loops. Reads
/// EVOLOP_THREADS once; defaults to the hardware concurrency.
int thread_budget();

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ConfigError(msg);
}

bool all_finite(const Matrix& m);

}  // namespace evolop
