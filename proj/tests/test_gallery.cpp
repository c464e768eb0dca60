#include "dsm/errors.hpp"
#include "dsm/linalg.hpp"
#include "dsm/operator.hpp"
#include "dsm/sampling.hpp"
#include "dsm/validators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace dsm {
namespace {

TEST(Evaluate, Examples) {
    EXPECT_EQ(evaluate(make_operator("scalar_cubic", 1), HVector{2.0}), HVector{8.0});
    EXPECT_EQ(evaluate(make_operator("identity", 2), HVector{3.0, -1.0}), (HVector{3.0, -1.0}));
    EXPECT_EQ(evaluate(make_operator("convex_gradient", 3), HVector{1.0, 0.0, -1.0}),
              (HVector{2.0, 0.0, -2.0}));
}

TEST(Evaluate, DimensionMismatchRejected) {
    EXPECT_THROW(evaluate(make_operator("identity", 2), HVector{1.0}), InvalidInput);
}

TEST(Evaluate, Deterministic) {
    const auto op = make_operator("skew_plus_cubic", 6);
    const auto u = seeded_points(5, 1, 6, 3.0).front();
    EXPECT_EQ(evaluate(op, u), evaluate(op, u));
}

TEST(Jacobian, Examples) {
    EXPECT_EQ(jacobian(make_operator("scalar_cubic", 1), HVector{2.0}), DenseMatrix(1, 1, {12.0}));
    EXPECT_EQ(jacobian(make_operator("identity", 3), HVector{1.0, 2.0, 3.0}), DenseMatrix::identity(3));
    EXPECT_EQ(jacobian(make_operator("scalar_affine_sin", 1), HVector{0.0}), DenseMatrix(1, 1, {3.0}));
}

TEST(Jacobian, FallsBackToFiniteDifferences) {
    auto op = make_operator("scalar_cubic", 1);
    op.jac = nullptr;
    const DenseMatrix j = jacobian(op, HVector{2.0}, 1e-6);
    EXPECT_NEAR(j(0, 0), 12.0, 1e-6);
}

TEST(Jacobian, RejectsBadStepAndNonFiniteValues) {
    const auto op = make_operator("identity", 2);
    EXPECT_THROW(jacobian(op, HVector{0.0, 0.0}, 0.0), InvalidInput);

    OperatorSpec blowup;
    blowup.name = "blowup";
    blowup.dim = 1;
    blowup.eval = [](const HVector& u) { return HVector{1.0 / (u[0] - 1e-7)}; };
    EXPECT_THROW(jacobian(blowup, HVector{0.0}, 1e-7), NumericalError);
    blowup.eval = [](const HVector& u) { return HVector{std::log(u[0])}; };
    EXPECT_THROW(fd_jacobian(blowup, HVector{0.0}, 1e-6), NumericalError);
}

// Every analytic Jacobian agrees with central differences at 20 seeded points.
TEST(Jacobian, AnalyticMatchesFiniteDifferences) {
    for (std::size_t dim : {1u, 4u, 12u}) {
        for (const auto& op : make_gallery(dim)) {
            ASSERT_TRUE(op.has_jacobian()) << op.name;
            for (const auto& u : seeded_points(sub_seed(dim, op.name), 20, op.dim, 5.0)) {
                const DenseMatrix exact = op.jac(u);
                const DenseMatrix fd = fd_jacobian(op, u, 1e-6);
                for (std::size_t i = 0; i < op.dim; ++i) {
                    for (std::size_t j = 0; j < op.dim; ++j) {
                        EXPECT_LE(std::abs(exact(i, j) - fd(i, j)), 1e-5 + 1e-5 * std::abs(exact(i, j)))
                            << op.name << " (" << i << "," << j << ")";
                    }
                }
            }
        }
    }
}

TEST(ShiftTarget, Examples) {
    const auto cubic = make_operator("scalar_cubic", 1);
    const auto shifted = shift_target(cubic, HVector{8.0});
    EXPECT_EQ(evaluate(shifted, HVector{2.0}), HVector{0.0});
    EXPECT_EQ(jacobian(shifted, HVector{2.0}), jacobian(cubic, HVector{2.0}));
    EXPECT_TRUE(shifted.declared_monotone);
    EXPECT_TRUE(shifted.declared_coercive);
    EXPECT_TRUE(check_monotone(shifted, 3, 200, 5.0, 1e-10).passed);

    const auto id = make_operator("identity", 2);
    EXPECT_EQ(evaluate(shift_target(id, HVector{0.0, 0.0}), HVector{1.0, 2.0}), (HVector{1.0, 2.0}));
    EXPECT_THROW(shift_target(id, HVector{1.0}), InvalidInput);
}

TEST(ShiftTarget, ShiftThenUnshiftIsIdentity) {
    for (const auto& op : make_gallery(5)) {
        const HVector y = seeded_points(sub_seed(1, op.name), 1, op.dim, 10.0).front();
        const auto round_trip = shift_target(shift_target(op, y), -y);
        for (const auto& u : seeded_points(sub_seed(2, op.name), 10, op.dim, 5.0)) {
            const HVector a = evaluate(op, u);
            const HVector b = evaluate(round_trip, u);
            for (std::size_t i = 0; i < op.dim; ++i) EXPECT_LE(std::abs(a[i] - b[i]), 1e-14) << op.name;
        }
    }
}

TEST(Gallery, ContainsRequiredMembersWithFlags) {
    const auto gallery = make_gallery(4);
    EXPECT_GE(gallery.size(), 8u);
    auto find = [&](const std::string& name) {
        auto it = std::find_if(gallery.begin(), gallery.end(), [&](const auto& op) { return op.name == name; });
        EXPECT_NE(it, gallery.end()) << name;
        return *it;
    };
    EXPECT_TRUE(find("scalar_cubic").declared_strictly_monotone);
    EXPECT_FALSE(find("rank_one_projector").declared_coercive);
    EXPECT_TRUE(find("rank_one_projector").declared_monotone);
    EXPECT_FALSE(find("scalar_negation").declared_monotone);
    EXPECT_EQ(find("scalar_cubic").dim, 1u);
    EXPECT_EQ(find("spd_tridiag").dim, 4u);
    for (const auto& op : gallery) EXPECT_TRUE(op.has_jacobian()) << op.name;
}

TEST(Gallery, DimensionPolicy) {
    EXPECT_EQ(resolve_dim("scalar_cubic", 7), 1u);
    EXPECT_EQ(resolve_dim("identity", 7), 7u);
    EXPECT_THROW(resolve_dim("rank_one_projector", 1), InvalidInput);
    EXPECT_THROW(resolve_dim("no_such_operator", 3), InvalidInput);
    EXPECT_EQ(make_gallery(1).back().dim, 1u);
    for (const auto& op : make_gallery(1))
        if (op.name == "rank_one_projector") EXPECT_EQ(op.dim, 2u);
}

TEST(Gallery, SpdTridiagIsTheSecondDifferenceMatrix) {
    const auto op = make_operator("spd_tridiag", 4);
    const DenseMatrix m = jacobian(op, HVector(4));
    EXPECT_EQ(m, DenseMatrix::from_rows({{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -1, 2, -1}, {0, 0, -1, 2}}));
}

TEST(Gallery, SkewPartContributesNothingToThePairing) {
    const auto op = make_operator("skew_plus_cubic", 5);
    const DenseMatrix j0 = jacobian(op, HVector(5));
    const DenseMatrix tri = jacobian(make_operator("spd_tridiag", 5), HVector(5));
    const DenseMatrix sym = j0.symmetric_part();
    EXPECT_EQ(sym, tri);
    bool has_skew = false;
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) has_skew = has_skew || j0(i, j) != j0(j, i);
    EXPECT_TRUE(has_skew);
}

// F' >= 0 for every member that passes the sampled monotonicity check.
TEST(Gallery, MonotoneMembersHavePsdJacobians) {
    for (std::size_t dim : {1u, 5u, 20u}) {
        for (const auto& op : make_gallery(dim)) {
            if (!check_monotone(op, 1, 500, 5.0, 1e-10).passed) continue;
            for (const auto& u : seeded_points(sub_seed(dim, "psd"), 20, op.dim, 5.0)) {
                EXPECT_GE(min_sym_eig(jacobian(op, u)), -1e-8) << op.name;
            }
        }
    }
}

}  // namespace
}  // namespace dsm
