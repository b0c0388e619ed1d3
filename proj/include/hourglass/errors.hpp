// Error types shared across the library.

#ifndef HOURGLASS_ERRORS_HPP
#define HOURGLASS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hourglass {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input outside the mathematical domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// Metric evaluation requested at a pole without an ambient representation.
struct PoleChartError : Error {
    explicit PoleChartError(const std::string& what) : Error(what) {}
};

/// The (E,P,L) triple is not attainable at the requested height.
struct InconsistentInvariantsError : Error {
    explicit InconsistentInvariantsError(const std::string& what) : Error(what) {}
};

/// Integrator failures: step-size underflow, chart-switch failure.
struct IntegrationError : Error {
    explicit IntegrationError(const std::string& what) : Error(what) {}
};

/// An iterative solver exhausted its budget without meeting its tolerance.
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& what) : Error(what) {}
};

}  // namespace hourglass

#endif
