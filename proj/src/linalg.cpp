#include "dsm/linalg.hpp"

#include "dsm/errors.hpp"
#include "dsm/sampling.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

namespace dsm {

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)), perm_(lu_.rows()) {
    if (!lu_.square()) throw InvalidInput("LU: matrix is not square");
    if (!lu_.all_finite()) throw NumericalError("LU: non-finite matrix entries");
    const std::size_t n = lu_.rows();
    std::iota(perm_.begin(), perm_.end(), std::size_t{0});
    const double scale = std::max(lu_.max_abs(), std::numeric_limits<double>::min());
    const double threshold = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;

    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
        const double pivot = lu_(p, k);
        if (!(std::abs(pivot) > threshold)) throw SingularSystemError(k, pivot);
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
            std::swap(perm_[k], perm_[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = lu_(i, k) / pivot;
            lu_(i, k) = m;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
        }
    }
}

HVector LuFactorization::solve(const HVector& rhs) const {
    const std::size_t n = dim();
    require_dim(rhs, n, "LU solve");
    HVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = rhs[perm_[i]];
        for (std::size_t j = 0; j < i; ++j) s -= lu_(i, j) * x[j];
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= lu_(i, j) * x[j];
        x[i] = s / lu_(i, i);
    }
    return x;
}

DenseMatrix regularize(const DenseMatrix& a, double shift) {
    if (!a.square()) throw InvalidInput("regularize: matrix is not square");
    DenseMatrix out = a;
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, i) += shift;
    return out;
}

HVector solve_regularized(const RegularizedSystem& sys) {
    if (!(sys.a > 0.0)) throw InvalidInput("solve_regularized: a must be positive");
    if (!sys.jac.square()) throw InvalidInput("solve_regularized: matrix is not square");
    require_dim(sys.rhs, sys.jac.rows(), "solve_regularized");
    return LuFactorization(regularize(sys.jac, sys.a)).solve(sys.rhs);
}

double min_sym_eig(const DenseMatrix& a) {
    if (!a.square()) throw InvalidInput("min_sym_eig: matrix is not square");
    if (!a.all_finite()) throw NumericalError("min_sym_eig: non-finite entries");
    const auto n = static_cast<Eigen::Index>(a.rows());
    const DenseMatrix s = a.symmetric_part();
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = s(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("min_sym_eig: eigensolver did not converge");
    return solver.eigenvalues().minCoeff();
}

ValidatorReport inv_norm_bound_check(const DenseMatrix& a, double shift, std::size_t n_probes,
                                     std::uint64_t seed, Exec exec) {
    if (!(shift > 0.0)) throw InvalidInput("inv_norm_bound_check: a must be positive");
    if (n_probes < 1) throw InvalidInput("inv_norm_bound_check: need at least one probe");
    const LuFactorization lu(regularize(a, shift));

    Rng rng(seed);
    std::vector<HVector> probes;
    probes.reserve(n_probes);
    for (std::size_t k = 0; k < n_probes; ++k) probes.push_back(unit_direction(rng, a.rows()));

    const auto solutions = kernels::map_indexed(n_probes, exec,
                                                [&](std::size_t k) { return lu.solve(probes[k]); });

    ValidatorReport report;
    report.samples_checked = n_probes;
    report.passed = true;
    std::size_t worst = 0;
    double worst_ratio = -1.0;
    for (std::size_t k = 0; k < n_probes; ++k) {
        const double len = norm(solutions[k]);
        if (!(len <= 1.0 / shift + 1e-10)) report.passed = false;
        if (shift * len > worst_ratio) {
            worst_ratio = shift * len;
            worst = k;
        }
    }
    report.worst_value = worst_ratio;
    if (!report.passed) report.witness = std::make_pair(probes[worst], solutions[worst]);
    return report;
}

}  // namespace dsm
