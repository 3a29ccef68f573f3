#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pmme {

/// Base class for every error raised by the library. `kind()` is a stable
/// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    [[nodiscard]] const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class CatalogError : public Error {
public:
    explicit CatalogError(const std::string& msg) : Error("catalog", msg) {}
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error("validation", msg) {}
};

class ConfigurationError : public Error {
public:
    explicit ConfigurationError(const std::string& msg) : Error("configuration", msg) {}
};

class ArgumentError : public Error {
public:
    explicit ArgumentError(const std::string& msg) : Error("argument", msg) {}
};

/// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& msg, double estimate, double error_bound)
        : Error("quadrature", msg), estimate_(estimate), error_bound_(error_bound) {}

    [[nodiscard]] double estimate() const noexcept { return estimate_; }
    [[nodiscard]] double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

class NonMonotoneError : public Error {
public:
    explicit NonMonotoneError(const std::string& msg) : Error("non_monotone", msg) {}
};

class OutOfRangeError : public Error {
public:
    explicit OutOfRangeError(const std::string& msg) : Error("out_of_range", msg) {}
};

class SingularMapError : public Error {
public:
    explicit SingularMapError(const std::string& msg) : Error("singular_map", msg) {}
};

class DegenerateWeightError : public Error {
public:
    explicit DegenerateWeightError(const std::string& msg) : Error("degenerate_weight", msg) {}
};

class BoundViolationError : public Error {
public:
    explicit BoundViolationError(const std::string& msg) : Error("bound_violation", msg) {}
};

class FormulaDomainError : public Error {
public:
    explicit FormulaDomainError(const std::string& msg) : Error("formula_domain", msg) {}
};

/// An error raised inside one Monte Carlo replication, tagged with its index.
class ReplicationError : public Error {
public:
    ReplicationError(const std::string& msg, std::uint64_t replication, std::string cause_kind)
        : Error("replication", msg), replication_(replication), cause_kind_(std::move(cause_kind)) {}

    [[nodiscard]] std::uint64_t replication() const noexcept { return replication_; }
    [[nodiscard]] const std::string& cause_kind() const noexcept { return cause_kind_; }

private:
    std::uint64_t replication_;
    std::string cause_kind_;
};

} // namespace pmme
