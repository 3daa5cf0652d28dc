#include "gpucb/kernel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "gpucb/error.hpp"
#include "gpucb/format.hpp"

namespace gpucb {

namespace {

double squared_distance(const Point& x, const Point& y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.dimension(); ++i) {
        const double diff = x[i] - y[i];
        sum += diff * diff;
    }
    return sum;
}

double dot(const Point& x, const Point& y) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.dimension(); ++i) { sum += x[i] * y[i]; }
    return sum;
}

}  // namespace

Kernel::Kernel(KernelFamily family, MaternNu nu, double lengthscale, double signal_variance)
    : family_(family), nu_(nu), lengthscale_(lengthscale), signal_variance_(signal_variance) {
    if (!(signal_variance_ > 0.0) || !std::isfinite(signal_variance_)) {
        throw ConfigError("kernel signal_variance must be positive and finite");
    }
    if (family_ != KernelFamily::Linear && (!(lengthscale_ > 0.0) || !std::isfinite(lengthscale_))) {
        throw ConfigError("kernel lengthscale must be positive and finite");
    }
}

Kernel Kernel::linear(double signal_variance) {
    return {KernelFamily::Linear, MaternNu::Half, 1.0, signal_variance};
}

Kernel Kernel::squared_exponential(double lengthscale, double signal_variance) {
    return {KernelFamily::SquaredExponential, MaternNu::Half, lengthscale, signal_variance};
}

Kernel Kernel::matern(MaternNu nu, double lengthscale, double signal_variance) {
    return {KernelFamily::Matern, nu, lengthscale, signal_variance};
}

double Kernel::operator()(const Point& x, const Point& y) const {
    if (x.dimension() != y.dimension()) {
        throw InputError("kernel arguments differ in dimension: " + std::to_string(x.dimension()) + " vs " +
                         std::to_string(y.dimension()));
    }
    const double s2 = signal_variance_;
    switch (family_) {
        case KernelFamily::Linear:
            return s2 * dot(x, y);
        case KernelFamily::SquaredExponential:
            return s2 * std::exp(-squared_distance(x, y) / (2.0 * lengthscale_ * lengthscale_));
        case KernelFamily::Matern: {
            const double r = std::sqrt(squared_distance(x, y)) / lengthscale_;
            switch (nu_) {
                case MaternNu::Half:
                    return s2 * std::exp(-r);
                case MaternNu::ThreeHalves: {
                    const double a = std::sqrt(3.0) * r;
                    return s2 * (1.0 + a) * std::exp(-a);
                }
                case MaternNu::FiveHalves: {
                    const double a = std::sqrt(5.0) * r;
                    return s2 * (1.0 + a + 5.0 * r * r / 3.0) * std::exp(-a);
                }
            }
        }
    }
    return 0.0;  // unreachable
}

std::string Kernel::describe() const {
    std::ostringstream out;
    switch (family_) {
        case KernelFamily::Linear:
            out << "linear(s2=" << format_double(signal_variance_) << ")";
            return out.str();
        case KernelFamily::SquaredExponential:
            out << "se(";
            break;
        case KernelFamily::Matern:
            out << (nu_ == MaternNu::Half ? "matern12(" : nu_ == MaternNu::ThreeHalves ? "matern32(" : "matern52(");
            break;
    }
    out << "l=" << format_double(lengthscale_) << ";s2=" << format_double(signal_variance_) << ")";
    return out.str();
}

GramMatrix::GramMatrix(Eigen::MatrixXd entries, Pool pool) : entries_(std::move(entries)), pool_(std::move(pool)) {
    if (entries_.rows() != entries_.cols() || static_cast<std::size_t>(entries_.rows()) != pool_.size()) {
        throw InputError("Gram matrix shape does not match its pool");
    }
}

GramMatrix gram(const Kernel& kernel, const Pool& pool) {
    if (pool.empty()) { throw InputError("gram: empty pool"); }
    require_dimension(pool, pool.front().dimension());

    const auto n = static_cast<Eigen::Index>(pool.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = j; i < n; ++i) {
            const double v = kernel(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
            k(i, j) = v;
            k(j, i) = v;
        }
    }
    return {std::move(k), pool};
}

Spectrum spectrum(const GramMatrix& g) {
    const Eigen::MatrixXd& k = g.entries();
    if (!k.allFinite()) { throw InputError("spectrum: Gram matrix has non-finite entries"); }

    const Eigen::MatrixXd sym = 0.5 * (k + k.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) { throw NumericalError("spectrum: eigensolver did not converge"); }

    Spectrum out;
    const Eigen::VectorXd& ev = solver.eigenvalues();  // ascending
    out.eigenvalues.reserve(static_cast<std::size_t>(ev.size()));
    for (Eigen::Index i = ev.size(); i-- > 0;) { out.eigenvalues.push_back(std::max(ev(i), 0.0)); }
    out.trace = k.trace();

    const double lambda_max = out.eigenvalues.front();
    const double cutoff = 1e-10 * lambda_max;
    out.effective_rank = static_cast<std::size_t>(
        std::count_if(out.eigenvalues.begin(), out.eigenvalues.end(), [&](double v) { return lambda_max > 0.0 && v >= cutoff; }));

    if (out.effective_rank >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const auto m = static_cast<double>(out.effective_rank);
        for (std::size_t i = 0; i < out.effective_rank; ++i) {
            const double x = std::log(static_cast<double>(i + 1));
            const double y = std::log(out.eigenvalues[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        out.decay_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return out;
}

}  // namespace gpucb
