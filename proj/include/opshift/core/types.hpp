#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace opshift {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Dense bounded operator between two finite-dimensional Hilbert spaces.
/// Carries no invariant beyond its shape, so it is the Eigen type itself.
using GeneralOperator = ComplexMatrix;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand dimensions do not conform.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A resolvent or linear solve was requested at (or numerically on) the spectrum.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside the hypotheses it is valid under.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// An iterative or adaptive procedure exhausted its budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Malformed matrix text or config input.
class ParseError : public Error {
public:
    using Error::Error;
};

inline void require_shape(bool ok, const std::string& what)
{
    if (!ok) {
        throw ShapeError(what);
    }
}

}  // namespace opshift
