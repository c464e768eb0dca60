#include "dsm/oracle.hpp"

#include "dsm/errors.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace dsm::oracle {

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    double flo = f(lo);
    if (flo > 0.0 || f(hi) < 0.0) throw InvalidInput("bisect: root is not bracketed");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

OracleResult solve_scalar(const OperatorSpec& op, const HVector& h, double tol) {
    if (op.dim != 1) throw InvalidInput("solve_scalar: operator is not scalar");
    require_dim(h, 1, "solve_scalar");
    auto f = [&](double x) { return evaluate(op, HVector{x})[0] - h[0]; };
    double lo = -1.0;
    double hi = 1.0;
    std::size_t expansions = 0;
    while ((f(lo) > 0.0 || f(hi) < 0.0) && expansions < 200) {
        lo *= 2.0;
        hi *= 2.0;
        ++expansions;
    }
    OracleResult out;
    out.u = HVector{bisect(f, lo, hi, tol)};
    out.residual = std::abs(f(out.u[0]));
    out.iterations = expansions;
    out.converged = true;
    return out;
}

namespace {

Eigen::VectorXd to_eigen(const HVector& v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.dim()));
    for (std::size_t i = 0; i < v.dim(); ++i) x(static_cast<Eigen::Index>(i)) = v[i];
    return x;
}

}  // namespace

OracleResult damped_newton(const OperatorSpec& op, const HVector& h, double tol,
                           std::size_t max_iter) {
    require_dim(h, op.dim, "damped_newton");
    const auto n = static_cast<Eigen::Index>(op.dim);
    HVector u(op.dim);
    HVector r = evaluate(op, u) - h;
    double rn = norm(r);
    OracleResult out;
    for (std::size_t it = 0; it < max_iter && rn > tol; ++it) {
        const DenseMatrix j = jacobian(op, u, 1e-7, Exec::serial);
        Eigen::MatrixXd jm(n, n);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b)
                jm(a, b) = j(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
        const Eigen::VectorXd step = jm.fullPivLu().solve(-to_eigen(r));
        double lambda = 1.0;
        bool accepted = false;
        for (int k = 0; k < 60; ++k) {
            HVector trial = u;
            for (std::size_t i = 0; i < op.dim; ++i) trial[i] += lambda * step(static_cast<Eigen::Index>(i));
            HVector tr = evaluate(op, trial) - h;
            const double tn = norm(tr);
            if (tn <= (1.0 - 1e-4 * lambda) * rn) {
                u = std::move(trial);
                r = std::move(tr);
                rn = tn;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        out.iterations = it + 1;
        if (!accepted) break;
    }
    out.u = u;
    out.residual = rn;
    out.converged = rn <= tol;
    return out;
}

OracleResult solve(const OperatorSpec& op, const HVector& h, double tol) {
    if (op.dim == 1) return solve_scalar(op, h, tol);
    return damped_newton(op, h, tol);
}

}  // namespace dsm::oracle
