#pragma once

#include <stdexcept>
#include <string>

namespace consensus {

/// Input violates a documented precondition (shape, symmetry, definiteness, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative kernel did not converge within its sweep budget.
class NumericalBreakdown : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Eigenvector matrix too ill-conditioned to treat the input as diagonalizable.
class NotDiagonalizable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear system (LU, Kronecker-vectorized Lyapunov) is singular to working precision.
class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bounded search for a witness (observer gain, Lyapunov matrix) found no valid candidate.
class InfeasibleDesign : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace consensus
