#pragma once

#include <stdexcept>
#include <string>

namespace dksphere {

/// Argument outside the mathematical domain of a function (x outside [0,1), pole hit, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Parameters sit on a degenerate configuration that the chosen algorithm cannot handle.
class DegenerateParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A series or iteration did not reach its stopping criterion within the cap.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Energy (or p^2) not on the requested discrete spectrum.
class OffSpectrumError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// ODE integration failed (step-size underflow, non-finite state).
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dksphere
