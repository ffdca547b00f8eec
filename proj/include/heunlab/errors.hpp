#pragma once

#include <stdexcept>
#include <string>

namespace heunlab {

/// Polynomials combined over different variable lists, or a binding that
/// refers to a variable the polynomial does not have.
class VariableMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UnknownVariable : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A postcondition that follows from the mathematics failed. Seeing one of
/// these means a bug (or a wrong formula), never bad user input.
class InternalInconsistency : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Numerical integration could not continue (step underflow, blow-up).
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string &what, double last_param)
        : std::runtime_error(what), last_param_(last_param) {}
    double last_param() const noexcept { return last_param_; }

private:
    double last_param_;
};

} // namespace heunlab
