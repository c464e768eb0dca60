#pragma once

// Reference solvers for F(u) = h used to cross-check the flow/continuation
// results. They share no code with the solver path: no LU from linalg, no
// flow, no continuation. Linear algebra comes from Eigen.

#include "dsm/hvector.hpp"
#include "dsm/operator.hpp"

#include <functional>

namespace dsm::oracle {

struct OracleResult {
    HVector u{0.0};
    double residual = 0.0;  // |F(u) - h|
    std::size_t iterations = 0;
    bool converged = false;
};

/// Root of a continuous f on [lo, hi] with f(lo) <= 0 <= f(hi), to width tol.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-12);

/// Scalar operators: bracket by doubling, then bisection.
OracleResult solve_scalar(const OperatorSpec& op, const HVector& h, double tol = 1e-12);

/// Newton on F(u) - h with Armijo backtracking on |F(u) - h|.
OracleResult damped_newton(const OperatorSpec& op, const HVector& h, double tol = 1e-12,
                           std::size_t max_iter = 200);

/// Bisection in 1D, damped Newton otherwise.
OracleResult solve(const OperatorSpec& op, const HVector& h, double tol = 1e-12);

}  // namespace dsm::oracle
