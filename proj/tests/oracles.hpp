#pragma once

// Independent reference computations for the tests. Nothing here calls into the
// factorization, posterior or information-gain code under test.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "gpucb/kernel.hpp"
#include "gpucb/point.hpp"

namespace gpucb::oracle {

/// Cyclic Jacobi eigenvalues of a symmetric matrix, sorted descending.
inline std::vector<double> jacobi_eigenvalues(Eigen::MatrixXd a, int max_sweeps = 100) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) { off += a(p, q) * a(p, q); }
        }
        if (off < 1e-30 * std::max(1.0, a.cwiseAbs2().sum())) { break; }
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) { continue; }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) { ev[static_cast<std::size_t>(i)] = a(i, i); }
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

/// Kernel matrix built with direct calls, no GramMatrix.
inline Eigen::MatrixXd kernel_matrix(const Kernel& k, const std::vector<Point>& a, const std::vector<Point>& b) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(a.size()), static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) { m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k(a[i], b[j]); }
    }
    return m;
}

struct DensePrediction {
    double mean;
    double variance;
};

/// μ = kᵀ (K + σ²I)⁻¹ y, σ² = k(x,x) − kᵀ (K + σ²I)⁻¹ k with an explicit inverse via full-pivot LU.
inline DensePrediction dense_posterior(const Kernel& k, const std::vector<Point>& xs, const std::vector<double>& ys,
                                       double noise, const Point& x) {
    const double prior = k(x, x);
    if (xs.empty()) { return {0.0, prior}; }
    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd kk = kernel_matrix(k, xs, xs) + noise * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd inv = kk.fullPivLu().inverse();
    const Eigen::VectorXd kx = kernel_matrix(k, xs, {x}).col(0);
    const Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(ys.data(), n);
    return {kx.dot(inv * y), prior - kx.dot(inv * kx)};
}

/// dense_posterior at many query points, sharing one inverse.
inline std::vector<DensePrediction> dense_posterior(const Kernel& k, const std::vector<Point>& xs,
                                                    const std::vector<double>& ys, double noise,
                                                    const std::vector<Point>& queries) {
    std::vector<DensePrediction> out;
    out.reserve(queries.size());
    if (xs.empty()) {
        for (const auto& q : queries) { out.push_back({0.0, k(q, q)}); }
        return out;
    }
    const auto n = static_cast<Eigen::Index>(xs.size());
    const Eigen::MatrixXd kk = kernel_matrix(k, xs, xs) + noise * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd inv = kk.fullPivLu().inverse();
    const Eigen::VectorXd weights = inv * Eigen::Map<const Eigen::VectorXd>(ys.data(), n);
    const Eigen::MatrixXd cross = kernel_matrix(k, xs, queries);
    for (std::size_t j = 0; j < queries.size(); ++j) {
        const Eigen::VectorXd kx = cross.col(static_cast<Eigen::Index>(j));
        out.push_back({kx.dot(weights), k(queries[j], queries[j]) - kx.dot(inv * kx)});
    }
    return out;
}

/// ½ log det(I + σ⁻² K) via full-pivot LU determinant.
inline double dense_info_gain(const Eigen::MatrixXd& k, double noise) {
    if (k.rows() == 0) { return 0.0; }
    const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(k.rows(), k.cols()) + k / noise;
    return 0.5 * std::log(m.fullPivLu().determinant());
}

inline Eigen::MatrixXd submatrix(const Eigen::MatrixXd& k, const std::vector<std::size_t>& idx) {
    Eigen::MatrixXd s(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < idx.size(); ++j) {
            s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                k(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
        }
    }
    return s;
}

/// max over all T-subsets of ½ log det(I + σ⁻² K_A), by recursive enumeration.
inline double exhaustive_max_gain(const Eigen::MatrixXd& k, std::size_t steps, double noise) {
    const auto n = static_cast<std::size_t>(k.rows());
    double best = -1.0;
    std::vector<std::size_t> chosen;
    std::function<void(std::size_t)> recurse = [&](std::size_t start) {
        if (chosen.size() == steps) {
            best = std::max(best, dense_info_gain(submatrix(k, chosen), noise));
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            chosen.push_back(i);
            recurse(i + 1);
            chosen.pop_back();
        }
    };
    recurse(0);
    return best;
}

/// Composite Simpson integration of f over [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
    const double h = (b - a) / n;
    double sum = f(a) + f(b);
    for (int i = 1; i < n; ++i) { sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0); }
    return sum * h / 3.0;
}

/// E[max(Y − y⁺ − ξ, 0)] for Y ~ N(μ, σ²) by quadrature.
inline double expected_improvement_quadrature(double mean, double sd, double incumbent, double xi) {
    auto integrand = [&](double y) {
        const double z = (y - mean) / sd;
        return std::max(y - incumbent - xi, 0.0) * std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
    };
    return simpson(integrand, mean - 12.0 * sd, mean + 12.0 * sd, 20000);
}

inline std::vector<Point> random_points(std::mt19937_64& rng, std::size_t count, std::size_t dim) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> pts;
    for (std::size_t i = 0; i < count; ++i) {
        std::vector<double> c(dim);
        for (auto& v : c) { v = u(rng); }
        pts.emplace_back(std::move(c));
    }
    return pts;
}

inline Kernel random_kernel(std::mt19937_64& rng, int family) {
    std::uniform_real_distribution<double> l(0.1, 0.8);
    std::uniform_real_distribution<double> s(0.5, 2.0);
    switch (family % 5) {
        case 0: return Kernel::linear(s(rng));
        case 1: return Kernel::squared_exponential(l(rng), s(rng));
        case 2: return Kernel::matern(MaternNu::Half, l(rng), s(rng));
        case 3: return Kernel::matern(MaternNu::ThreeHalves, l(rng), s(rng));
        default: return Kernel::matern(MaternNu::FiveHalves, l(rng), s(rng));
    }
}

}  // namespace gpucb::oracle
