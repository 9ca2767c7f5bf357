#ifndef ROOTFLOW_ERRORS_HPP
#define ROOTFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rootflow {

// Argument outside the domain of a mathematical operation (alpha <= alpha_min,
// z on a branch cut, etc).
class DomainError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

// Profile violates the assumptions needed by an operation, e.g. g'(1) = -inf.
class InvalidProfile : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// Flow parameters outside the supported range (t >= t_max, a = b with b <= 0).
class FlowError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// A measure fails a precondition (atom at origin, discontinuous cdf).
class PreconditionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

// Iterative solver did not converge. Carries a human-readable state dump.
class ConvergenceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

}  // namespace rootflow

#endif  // ROOTFLOW_ERRORS_HPP
