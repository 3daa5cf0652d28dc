#include "gpucb/cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "gpucb/error.hpp"

namespace gpucb {

void CholeskyFactor::reserve(std::size_t n) {
    const auto current = static_cast<std::size_t>(lower_.rows());
    if (n <= current) { return; }
    const std::size_t capacity = std::max({n, 2 * current, std::size_t{8}});
    const auto old = idx(current);
    lower_.conservativeResize(idx(capacity), idx(capacity));
    lower_.rightCols(idx(capacity) - old).setZero();
    lower_.bottomRows(idx(capacity) - old).setZero();
}

void CholeskyFactor::extend(std::span<const double> cross, double diagonal) {
    if (cross.size() != n_) { throw InputError("CholeskyFactor::extend: cross-covariance has wrong length"); }
    std::vector<double> solved(cross.begin(), cross.end());
    solve_lower_in_place(solved);
    extend_solved(solved, diagonal);
}

void CholeskyFactor::extend_solved(std::span<const double> solved_cross, double diagonal) {
    if (solved_cross.size() != n_) { throw InputError("CholeskyFactor::extend: cross-covariance has wrong length"); }
    double pivot = diagonal;
    for (double v : solved_cross) { pivot -= v * v; }
    if (!(pivot > 0.0) || !std::isfinite(pivot)) {
        throw NumericalError("Cholesky breakdown at pivot " + std::to_string(n_) + " (value " + std::to_string(pivot) + ")",
                             n_);
    }
    reserve(n_ + 1);
    const auto row = idx(n_);
    for (std::size_t j = 0; j < n_; ++j) { lower_(row, idx(j)) = solved_cross[j]; }
    lower_(row, row) = std::sqrt(pivot);
    ++n_;
}

void CholeskyFactor::solve_lower_in_place(std::span<double> b) const {
    for (std::size_t i = 0; i < n_; ++i) {
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k) { sum -= lower_(idx(i), idx(k)) * b[k]; }
        b[i] = sum / lower_(idx(i), idx(i));
    }
}

void CholeskyFactor::solve_upper_in_place(std::span<double> b) const {
    for (std::size_t i = n_; i-- > 0;) {
        double sum = b[i];
        for (std::size_t k = i + 1; k < n_; ++k) { sum -= lower_(idx(k), idx(i)) * b[k]; }
        b[i] = sum / lower_(idx(i), idx(i));
    }
}

double CholeskyFactor::log_determinant() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) { sum += std::log(lower_(idx(i), idx(i))); }
    return 2.0 * sum;
}

CholeskyFactor CholeskyFactor::factorize(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols()) { throw InputError("CholeskyFactor::factorize: matrix is not square"); }
    CholeskyFactor f;
    const auto n = static_cast<std::size_t>(a.rows());
    f.reserve(n);
    std::vector<double> column;
    for (std::size_t i = 0; i < n; ++i) {
        column.assign(i, 0.0);
        for (std::size_t j = 0; j < i; ++j) { column[j] = a(idx(j), idx(i)); }
        f.extend(column, a(idx(i), idx(i)));
    }
    return f;
}

namespace {

// Semidefinite Cholesky: pivots within `tolerance` of zero become zero columns.
std::optional<Eigen::MatrixXd> try_psd_cholesky(const Eigen::MatrixXd& a, double jitter, double tolerance) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double pivot = a(j, j) + jitter;
        for (Eigen::Index k = 0; k < j; ++k) { pivot -= lower(j, k) * lower(j, k); }
        if (!std::isfinite(pivot) || pivot < -tolerance) { return std::nullopt; }
        if (pivot <= tolerance) { continue; }  // rank-deficient direction
        const double d = std::sqrt(pivot);
        lower(j, j) = d;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            double sum = a(i, j);
            for (Eigen::Index k = 0; k < j; ++k) { sum -= lower(i, k) * lower(j, k); }
            lower(i, j) = sum / d;
        }
    }
    return lower;
}

}  // namespace

JitteredFactor psd_cholesky(const Eigen::MatrixXd& a) {
    if (a.rows() != a.cols() || a.rows() == 0) { throw InputError("psd_cholesky: matrix must be square and nonempty"); }
    const auto n = static_cast<double>(a.rows());
    const double max_diag = a.diagonal().cwiseAbs().maxCoeff();
    const double tolerance = n * std::numeric_limits<double>::epsilon() * std::max(max_diag, 1e-300);

    if (auto lower = try_psd_cholesky(a, 0.0, tolerance)) { return {std::move(*lower), 0.0}; }

    const double scale = a.trace() / n;
    for (double jitter = 1e-10 * scale; jitter <= 1e-4 * scale * (1.0 + 1e-9); jitter *= 10.0) {
        if (auto lower = try_psd_cholesky(a, jitter, tolerance)) { return {std::move(*lower), jitter}; }
    }
    throw NumericalError("psd_cholesky: factorization failed after maximum jitter");
}

}  // namespace gpucb
