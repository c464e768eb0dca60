#pragma once

#include <stdexcept>
#include <string>

namespace dsm {

/// Input rejected by a precondition (dimension mismatch, bad parameter).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// F produced non-finite values where finite ones were required.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// LU factorization met a pivot too small to continue. For A + aI with a > 0
/// this only happens when F' has a strongly negative symmetric part, i.e. the
/// operator is not monotone near the evaluation point.
class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(std::size_t column, double pivot)
        : std::runtime_error("singular system: pivot " + std::to_string(pivot) +
                             " in column " + std::to_string(column)),
          column_(column), pivot_(pivot) {}

    std::size_t column() const noexcept { return column_; }
    double pivot() const noexcept { return pivot_; }

private:
    std::size_t column_;
    double pivot_;
};

}  // namespace dsm
