#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>

namespace gpucb {

/// Lower-triangular factor L with L Lᵀ = A, grown one row/column at a time.
///
/// Appending a point to a positive-definite system costs O(t²) instead of the
/// O(t³) of refactorizing.
class CholeskyFactor {
public:
    CholeskyFactor() = default;

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    /// The leading size() x size() block is the factor; the remainder is spare capacity.
    [[nodiscard]] auto matrix() const { return lower_.topLeftCorner(idx(n_), idx(n_)); }

    /// Appends a row given A's new column `cross` (length size()) and diagonal entry.
    /// Throws NumericalError carrying the pivot index when the new pivot is not positive.
    void extend(std::span<const double> cross, double diagonal);

    /// Same as extend, but takes a precomputed l = L⁻¹ cross.
    void extend_solved(std::span<const double> solved_cross, double diagonal);

    /// Solves L x = b in place (b has length size()).
    void solve_lower_in_place(std::span<double> b) const;
    /// Solves Lᵀ x = b in place.
    void solve_upper_in_place(std::span<double> b) const;

    [[nodiscard]] double diagonal(std::size_t i) const { return lower_(idx(i), idx(i)); }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const { return lower_(idx(i), idx(j)); }

    /// log det(A) = 2 Σ log L_ii.
    [[nodiscard]] double log_determinant() const;

    /// Factorizes a full symmetric positive-definite matrix.
    static CholeskyFactor factorize(const Eigen::MatrixXd& a);

private:
    static Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }
    void reserve(std::size_t n);

    Eigen::MatrixXd lower_;
    std::size_t n_ = 0;
};

/// Outcome of factorizing a positive-semidefinite matrix with the escalating jitter ladder.
struct JitteredFactor {
    Eigen::MatrixXd lower;
    double jitter = 0.0;  // diagonal term added before the successful factorization
};

/// Cholesky of a PSD matrix tolerant of exact rank deficiency.
///
/// Pivots within round-off of zero (|p| <= n·eps·max diag) produce zero columns, so
/// duplicated points factor exactly. On a genuinely negative pivot, retries with
/// jitter 1e-10·trace/n, multiplied by 10 up to 1e-4·trace/n, then throws NumericalError.
JitteredFactor psd_cholesky(const Eigen::MatrixXd& a);

}  // namespace gpucb
