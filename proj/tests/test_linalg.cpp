#include "dsm/errors.hpp"
#include "dsm/linalg.hpp"
#include "dsm/operator.hpp"
#include "dsm/sampling.hpp"
#include "dsm/validators.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace dsm {
namespace {

TEST(SolveRegularized, Examples) {
    EXPECT_EQ(solve_regularized({DenseMatrix(1, 1, {0.0}), 0.25, HVector{1.0}}), HVector{4.0});
    EXPECT_EQ(solve_regularized({DenseMatrix::identity(2), 1.0, HVector{2.0, 4.0}}), (HVector{1.0, 2.0}));
}

// Hand solve of [[0.5, 1], [-1, 0.5]] x = [1, 0]: det = 1.25, x = [0.5, 1] / 1.25.
TEST(SolveRegularized, SkewTwoByTwo) {
    const HVector x = solve_regularized({DenseMatrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}}), 0.5, HVector{1.0, 0.0}});
    EXPECT_NEAR(x[0], 0.4, 1e-15);
    EXPECT_NEAR(x[1], 0.8, 1e-15);
    EXPECT_LE(norm(x), 1.0 / 0.5);
}

TEST(SolveRegularized, RelativeResidualOnSeededSystems) {
    Rng rng(sub_seed(2024, "lu"));
    std::uniform_int_distribution<std::size_t> dim_dist(1, 50);
    for (int k = 0; k < 100; ++k) {
        const std::size_t n = dim_dist(rng);
        DenseMatrix a(n, n);
        const HVector entries = uniform_in_ball(rng, n * n, 10.0 * static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = std::clamp(entries[i * n + j], -10.0, 10.0);
        // Symmetric part made PSD so that A + aI is well conditioned, as for a monotone F'.
        const double shift = std::max(0.0, -min_sym_eig(a));
        for (std::size_t i = 0; i < n; ++i) a(i, i) += shift;
        const double reg = 0.01 + 0.5 * (k % 5);
        const HVector rhs = uniform_in_ball(rng, n, 10.0);
        const HVector x = solve_regularized({a, reg, rhs});
        const HVector back = regularize(a, reg) * x;
        EXPECT_LE(norm(back - rhs) / std::max(norm(rhs), 1e-300), 1e-10) << "system " << k;
    }
}

TEST(SolveRegularized, Errors) {
    EXPECT_THROW(solve_regularized({DenseMatrix::identity(2), 0.0, HVector{1.0, 1.0}}), InvalidInput);
    EXPECT_THROW(solve_regularized({DenseMatrix::identity(2), 1.0, HVector{1.0}}), InvalidInput);
    try {
        solve_regularized({DenseMatrix(1, 1, {-1.0}), 1.0, HVector{1.0}});
        FAIL() << "expected a singular-system error";
    } catch (const SingularSystemError& e) {
        EXPECT_EQ(e.column(), 0u);
        EXPECT_EQ(e.pivot(), 0.0);
    }
    EXPECT_THROW(LuFactorization(DenseMatrix(2, 2, {1.0, NAN, 0.0, 1.0})), NumericalError);
}

TEST(MinSymEig, Examples) {
    EXPECT_NEAR(min_sym_eig(DenseMatrix::from_rows({{0.0, 1.0}, {-1.0, 0.0}})), 0.0, 1e-15);
    EXPECT_NEAR(min_sym_eig(DenseMatrix::identity(3)), 1.0, 1e-14);
    EXPECT_NEAR(min_sym_eig(jacobian(make_operator("scalar_negation", 1), HVector{4.2})), -1.0, 1e-15);
    EXPECT_THROW(min_sym_eig(DenseMatrix(1, 1, {INFINITY})), NumericalError);
}

// tridiag(-1,2,-1) of size n has eigenvalues 2 - 2 cos(k pi / (n+1)).
TEST(MinSymEig, SecondDifferenceSpectrum) {
    for (std::size_t n : {2u, 5u, 20u}) {
        const DenseMatrix m = jacobian(make_operator("spd_tridiag", n), HVector(n));
        EXPECT_NEAR(min_sym_eig(m), 2.0 - 2.0 * std::cos(M_PI / static_cast<double>(n + 1)), 1e-12);
    }
}

TEST(MinSymEig, SymmetrizationIsIdempotent) {
    Rng rng(77);
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 1 + static_cast<std::size_t>(k);
        const HVector e = uniform_in_ball(rng, n * n, 10.0);
        const DenseMatrix a(n, n, e.entries());
        EXPECT_NEAR(min_sym_eig(a), min_sym_eig(a.symmetric_part()), 1e-12);
    }
}

TEST(InvNormBound, Examples) {
    const auto zero = inv_norm_bound_check(DenseMatrix(1, 1, {0.0}), 0.1, 10, 1);
    EXPECT_TRUE(zero.passed);
    EXPECT_NEAR(zero.worst_value, 1.0, 1e-15);

    const auto ident = inv_norm_bound_check(DenseMatrix::identity(2), 1.0, 10, 1);
    EXPECT_TRUE(ident.passed);
    EXPECT_NEAR(ident.worst_value, 0.5, 1e-15);

    const auto op = make_operator("skew_plus_cubic", 8);
    const DenseMatrix j = jacobian(op, seeded_points(13, 1, 8, 5.0).front());
    const auto skew = inv_norm_bound_check(j, 0.01, 50, 3);
    EXPECT_TRUE(skew.passed);
    EXPECT_LE(skew.worst_value, 1.0 + 1e-10);
    EXPECT_EQ(skew.samples_checked, 50u);
}

TEST(InvNormBound, FailsForNegativeJacobian) {
    // -0.5 + 1 = 0.5 so |x| = 2 > 1/a = 1.
    const auto r = inv_norm_bound_check(DenseMatrix(1, 1, {-0.5}), 1.0, 4, 1);
    EXPECT_FALSE(r.passed);
    EXPECT_NEAR(r.worst_value, 2.0, 1e-15);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_NEAR(norm(r.witness->second), 2.0, 1e-15);
}

TEST(InvNormBound, HoldsAcrossGallery) {
    for (std::size_t dim : {1u, 6u}) {
        for (const auto& op : make_gallery(dim)) {
            if (!check_monotone(op, 1, 200, 5.0, 1e-10).passed) continue;
            for (const auto& u : seeded_points(sub_seed(dim, op.name), 20, op.dim, 5.0)) {
                const DenseMatrix j = jacobian(op, u);
                for (double a : {1.0, 0.1, 0.01}) {
                    EXPECT_TRUE(inv_norm_bound_check(j, a, 50, 9).passed) << op.name << " a=" << a;
                }
            }
        }
    }
}

}  // namespace
}  // namespace dsm
