#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace gpucb {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: dimension mismatch, empty pools, bad indices.
class InputError : public Error {
public:
    using Error::Error;
};

/// Invalid hyperparameters or experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Failure to read a tabular dataset. Carries the 1-based line (and column, if known).
class IngestionError : public Error {
public:
    IngestionError(const std::string& what, std::size_t line, std::optional<std::size_t> column = std::nullopt)
        : Error(what), line_(line), column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::optional<std::size_t> column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::optional<std::size_t> column_;
};

/// Factorization breakdown or out-of-tolerance round-off.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what, std::optional<std::size_t> pivot = std::nullopt)
        : Error(what), pivot_(pivot) {}

    /// Index of the failing Cholesky pivot, when the failure came from a factorization.
    [[nodiscard]] std::optional<std::size_t> pivot() const noexcept { return pivot_; }

private:
    std::optional<std::size_t> pivot_;
};

}  // namespace gpucb
