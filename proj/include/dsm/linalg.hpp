#pragma once

#include "dsm/hvector.hpp"
#include "dsm/parallel.hpp"
#include "dsm/validators.hpp"

#include <cstdint>
#include <vector>

namespace dsm {

/// A x = rhs with A := jac + a I, a > 0. A_a is generally non-symmetric.
struct RegularizedSystem {
    DenseMatrix jac;
    double a;
    HVector rhs;
};

/// LU factorization with partial pivoting (P A = L U), computed once per call
/// site and reused for several right-hand sides.
class LuFactorization {
public:
    /// Throws SingularSystemError when a pivot falls below n * eps * max|A|.
    explicit LuFactorization(DenseMatrix a);

    HVector solve(const HVector& rhs) const;
    std::size_t dim() const noexcept { return lu_.rows(); }

private:
    DenseMatrix lu_;
    std::vector<std::size_t> perm_;
};

/// A + aI
DenseMatrix regularize(const DenseMatrix& a, double shift);

/// Solves (jac + aI) x = rhs.
HVector solve_regularized(const RegularizedSystem& sys);

/// Minimum eigenvalue of (A + A^T)/2.
double min_sym_eig(const DenseMatrix& a);

/// Probe check of |(A + aI)^{-1}| <= 1/a: solves against n_probes seeded unit
/// vectors w and checks |x| <= 1/a + 1e-10. worst_value = max a |x|; on failure
/// the witness is (w, x) for the worst probe.
ValidatorReport inv_norm_bound_check(const DenseMatrix& a, double shift, std::size_t n_probes,
                                     std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace dsm
