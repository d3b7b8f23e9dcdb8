#pragma once

#include <stdexcept>
#include <string>

namespace rydeo {

// Base class for everything thrown on purpose. The CLI maps these onto exit
// codes: ValidationError (and subclasses) -> 2, NumericalError -> 3.

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Bad inputs: out-of-range parameters, malformed configs, infeasible settings.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// Settings that are individually valid but jointly infeasible
// (e.g. a time step violating the integrator bound).
class ConfigurationError : public ValidationError {
public:
    explicit ConfigurationError(const std::string& what) : ValidationError(what) {}
};

// Runtime numerical failure.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

// Iterative scheme exhausted its budget without meeting tolerance.
class ConvergenceError : public NumericalError {
public:
    explicit ConvergenceError(const std::string& what) : NumericalError(what) {}
};

// Nonlinear fit did not converge or is degenerate.
class FitError : public NumericalError {
public:
    explicit FitError(const std::string& what) : NumericalError(what) {}
};

// Result left the validity domain of the thin-medium model.
class ModelValidityError : public NumericalError {
public:
    explicit ModelValidityError(const std::string& what) : NumericalError(what) {}
};

// A singular linear system where a unique solution was expected.
class DegeneracyError : public NumericalError {
public:
    explicit DegeneracyError(const std::string& what) : NumericalError(what) {}
};

// A feature search (resonance peak, fit window) found nothing usable.
class NotFoundError : public NumericalError {
public:
    explicit NotFoundError(const std::string& what) : NumericalError(what) {}
};

}  // namespace rydeo
