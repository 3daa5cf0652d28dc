#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "gpucb/point.hpp"

namespace gpucb {

enum class KernelFamily { Linear, SquaredExponential, Matern };

/// Matérn smoothness; only the closed-form half-integer orders are supported.
enum class MaternNu { Half, ThreeHalves, FiveHalves };

/// Covariance function with its hyperparameters. Immutable.
///
///   Linear       k = s² <x, y>
///   SE           k = s² exp(-r² / 2l²)
///   Matérn 1/2   k = s² exp(-r/l)
///   Matérn 3/2   k = s² (1 + √3 r/l) exp(-√3 r/l)
///   Matérn 5/2   k = s² (1 + √5 r/l + 5r²/3l²) exp(-√5 r/l)
class Kernel {
public:
    static Kernel linear(double signal_variance = 1.0);
    static Kernel squared_exponential(double lengthscale, double signal_variance = 1.0);
    static Kernel matern(MaternNu nu, double lengthscale, double signal_variance = 1.0);

    [[nodiscard]] KernelFamily family() const noexcept { return family_; }
    [[nodiscard]] double lengthscale() const noexcept { return lengthscale_; }
    [[nodiscard]] double signal_variance() const noexcept { return signal_variance_; }
    [[nodiscard]] MaternNu nu() const noexcept { return nu_; }

    /// Throws InputError on dimension mismatch.
    [[nodiscard]] double operator()(const Point& x, const Point& y) const;

    /// Short human-readable name, e.g. "se(l=0.2,s2=1)".
    [[nodiscard]] std::string describe() const;

private:
    Kernel(KernelFamily family, MaternNu nu, double lengthscale, double signal_variance);

    KernelFamily family_;
    MaternNu nu_;
    double lengthscale_;
    double signal_variance_;
};

[[nodiscard]] inline double eval(const Kernel& kernel, const Point& x, const Point& y) { return kernel(x, y); }

/// Symmetric kernel matrix over an ordered pool of points.
class GramMatrix {
public:
    GramMatrix(Eigen::MatrixXd entries, Pool pool);

    [[nodiscard]] const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    [[nodiscard]] const Pool& pool() const noexcept { return pool_; }
    [[nodiscard]] std::size_t size() const noexcept { return pool_.size(); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return entries_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)); }

private:
    Eigen::MatrixXd entries_;
    Pool pool_;
};

/// Builds K[i][j] = k(pool[i], pool[j]). Throws InputError on an empty pool or mixed dimensions.
GramMatrix gram(const Kernel& kernel, const Pool& pool);

struct Spectrum {
    std::vector<double> eigenvalues;  // descending, clamped at zero
    double trace = 0.0;
    std::size_t effective_rank = 0;   // eigenvalues >= 1e-10 * lambda_max
    /// Least-squares slope of log(lambda_i) against log(i) over the effective rank.
    /// Empty when fewer than two eigenvalues are significant.
    std::optional<double> decay_exponent;
};

/// Eigenspectrum of a Gram matrix. Throws InputError on non-finite entries.
Spectrum spectrum(const GramMatrix& g);

}  // namespace gpucb
