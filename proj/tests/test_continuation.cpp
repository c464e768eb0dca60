#include "dsm/continuation.hpp"
#include "dsm/errors.hpp"
#include "dsm/operator.hpp"
#include "dsm/oracle.hpp"
#include "dsm/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace dsm {
namespace {

StageResult stage_of(double a, HVector u) {
    StageResult s;
    s.a = a;
    s.norm_u = norm(u);
    s.u_a = std::move(u);
    return s;
}

TEST(Schedule, GeometricWithClamp) {
    ContinuationSchedule s{1.0, 0.1, 1e-6};
    const auto v = s.values();
    ASSERT_EQ(v.size(), 7u);
    EXPECT_EQ(v.front(), 1.0);
    EXPECT_EQ(v.back(), 1e-6);
    for (std::size_t i = 1; i < v.size(); ++i) EXPECT_LT(v[i], v[i - 1]);

    const auto c = ContinuationSchedule{1.0, 0.3, 0.05}.values();
    ASSERT_EQ(c.size(), 4u);  // 1, .3, .09, then .027 clamped
    EXPECT_EQ(c.back(), 0.05);
}

TEST(Schedule, RejectsInvalid) {
    EXPECT_THROW((ContinuationSchedule{1.0, 1.0, 1e-6}.values()), InvalidInput);
    EXPECT_THROW((ContinuationSchedule{1.0, 0.0, 1e-6}.values()), InvalidInput);
    EXPECT_THROW((ContinuationSchedule{1e-6, 0.1, 1e-6}.values()), InvalidInput);
    EXPECT_THROW((ContinuationSchedule{1.0, 0.1, 0.0}.values()), InvalidInput);
}

TEST(RunContinuation, ConvexGradientOnes) {
    const auto op = make_operator("convex_gradient", 3);
    const HVector h{2.0, 2.0, 2.0};
    const auto rep = run_continuation(op, h, {1.0, 0.1, 1e-6}, FlowConfig{});
    ASSERT_TRUE(rep.completed);
    for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(rep.final_u[i], 1.0, 1e-5);
    EXPECT_LE(rep.final_residual_eq5, 1e-5);
    EXPECT_TRUE(rep.bound_report.passed);
    EXPECT_TRUE(rep.minty_report.passed);
    EXPECT_TRUE(rep.cauchy_report.passed);
    EXPECT_EQ(rep.final_u, rep.stages.back().u_a);
    for (std::size_t i = 1; i < rep.stages.size(); ++i) EXPECT_LT(rep.stages[i].a, rep.stages[i - 1].a);
    EXPECT_NEAR(rep.final_residual_eq5, norm(evaluate(op, rep.final_u) - h),
                1e-12 * rep.final_residual_eq5);
}

TEST(RunContinuation, ScalarCubic) {
    const auto rep = run_continuation(make_operator("scalar_cubic", 1), HVector{8.0}, {}, FlowConfig{});
    ASSERT_TRUE(rep.completed);
    EXPECT_NEAR(rep.final_u[0], 2.0, 1e-5);
}

TEST(RunContinuation, AffineSinMatchesBisection) {
    const auto op = make_operator("scalar_affine_sin", 1);
    const double root = oracle::bisect([](double x) { return 2.0 * x + std::sin(x) - 3.0; }, 0.0, 3.0);
    const auto rep = run_continuation(op, HVector{3.0}, {}, FlowConfig{});
    ASSERT_TRUE(rep.completed);
    EXPECT_NEAR(rep.final_u[0], root, 1e-6);
}

TEST(RunContinuation, StagesAreConvergedRegularizedSolves) {
    const auto op = make_operator("skew_plus_cubic", 5);
    const HVector h = seeded_points(11, 1, 5, 10.0).front();
    const auto rep = run_continuation(op, h, {}, FlowConfig{});
    ASSERT_TRUE(rep.completed);
    for (const auto& s : rep.stages) {
        EXPECT_EQ(s.terminated_by, Termination::residual_tol_reached);
        EXPECT_LE(s.residual_eq6, 1e-10);
        EXPECT_LE(residual(op, s.a, h, s.u_a), 1e-10);
        EXPECT_EQ(s.norm_u, norm(s.u_a));
    }
}

TEST(RunContinuation, ResidualOfEquationNonincreasingAcrossStages) {
    for (const char* name : {"convex_gradient", "spd_tridiag", "skew_plus_cubic"}) {
        const auto op = make_operator(name, 5);
        const HVector h = seeded_points(3, 1, 5, 10.0).front();
        const auto rep = run_continuation(op, h, {}, FlowConfig{});
        ASSERT_TRUE(rep.completed) << name;
        double prev = INFINITY;
        for (const auto& s : rep.stages) {
            const double r = norm(evaluate(op, s.u_a) - h);
            EXPECT_LE(r, prev + 1e-8) << name << " a=" << s.a;
            prev = r;
        }
    }
}

TEST(RunContinuation, ScheduleIndependentLimit) {
    for (const char* name : {"convex_gradient", "spd_tridiag", "skew_plus_cubic", "identity"}) {
        const auto op = make_operator(name, 5);
        const HVector h = seeded_points(5, 1, 5, 10.0).front();
        const auto fast = run_continuation(op, h, {1.0, 0.1, 1e-10}, FlowConfig{});
        const auto slow = run_continuation(op, h, {1.0, 0.5, 1e-10}, FlowConfig{});
        ASSERT_TRUE(fast.completed && slow.completed) << name;
        EXPECT_LE(norm(fast.final_u - slow.final_u), 1e-5) << name;
    }
}

TEST(RunContinuation, NonCoerciveNegativeControl) {
    const auto op = make_operator("rank_one_projector", 3);
    const HVector h{1.0, 2.0, -1.0};  // has a component off the range span{e1}
    const auto rep = run_continuation(op, h, {1.0, 0.1, 1e-6}, FlowConfig{});
    ASSERT_TRUE(rep.completed);
    for (const auto& s : rep.stages) EXPECT_LE(s.residual_eq6, 1e-10);
    EXPECT_FALSE(rep.bound_report.passed);
    EXPECT_TRUE(rep.bound_report.witness.has_value());
    EXPECT_GE(rep.stages.back().norm_u, 10.0 * rep.stages.front().norm_u);
    // closed form: u_a = h_perp / a + (e.h)/(1+a) e
    const auto& last = rep.stages.back();
    EXPECT_NEAR(last.u_a[0], 1.0 / (1.0 + last.a), 1e-6);
    EXPECT_NEAR(last.u_a[1] * last.a, 2.0, 1e-6);
}

TEST(RunContinuation, FailedStageGivesPartialReport) {
    FlowConfig cfg;
    cfg.max_time = 0.5;
    const auto rep = run_continuation(make_operator("scalar_cubic", 1), HVector{8.0}, {}, cfg);
    EXPECT_FALSE(rep.completed);
    ASSERT_TRUE(rep.failed_stage.has_value());
    EXPECT_EQ(*rep.failed_stage, 0u);
    EXPECT_EQ(rep.stages.size(), 1u);
    EXPECT_FALSE(rep.bound_report.passed);
    EXPECT_FALSE(rep.minty_report.passed);
    EXPECT_FALSE(rep.cauchy_report.passed);
    EXPECT_TRUE(std::isnan(rep.bound_report.worst_value));
}

TEST(RunContinuation, DimensionMismatch) {
    EXPECT_THROW(run_continuation(make_operator("identity", 3), HVector{1.0}, {}, FlowConfig{}),
                 InvalidInput);
}

TEST(UniformBound, IdentityClosedForm) {
    const HVector h{4.0};
    std::vector<StageResult> st;
    for (double a : {1.0, 0.1, 0.01}) st.push_back(stage_of(a, HVector{4.0 / (1.0 + a)}));
    const auto r = uniform_bound_check(make_operator("identity", 1), h, st);
    EXPECT_TRUE(r.passed);
    EXPECT_LE(r.worst_value, 1.0);
}

TEST(UniformBound, IdentityAtAEqualsOne) {
    // (u,u)/|u| + |u| = (h,u)/|u| with u = 2, h = 4
    const auto r = uniform_bound_check(make_operator("identity", 1), HVector{4.0},
                                       {stage_of(1.0, HVector{2.0}), stage_of(1.0, HVector{2.0})});
    EXPECT_TRUE(r.passed);
    EXPECT_DOUBLE_EQ(r.worst_value, 0.1);  // growth ratio 1/10 dominates; identity gap is 0
}

TEST(UniformBound, WrongStageBreaksIdentity) {
    const auto r = uniform_bound_check(make_operator("identity", 1), HVector{4.0},
                                       {stage_of(1.0, HVector{2.0}), stage_of(0.1, HVector{2.0})});
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.worst_value, 1e6);
    EXPECT_TRUE(r.witness.has_value());
}

TEST(UniformBound, DegenerateStagesSkipped) {
    const auto r = uniform_bound_check(make_operator("identity", 2), HVector(2),
                                       {stage_of(1.0, HVector(2)), stage_of(0.1, HVector(2))});
    EXPECT_TRUE(r.passed);
}

TEST(UniformBound, GrowthFailsRankOne) {
    const auto op = make_operator("rank_one_projector", 2);
    const HVector h{1.0, 1.0};
    std::vector<StageResult> st;
    for (double a : {1.0, 0.1, 0.01, 1e-3, 1e-4}) st.push_back(stage_of(a, HVector{1.0 / (1.0 + a), 1.0 / a}));
    const auto r = uniform_bound_check(op, h, st);
    EXPECT_FALSE(r.passed);
    EXPECT_GT(r.worst_value, 1.0);
}

TEST(UniformBound, NeedsTwoStages) {
    EXPECT_THROW(uniform_bound_check(make_operator("identity", 1), HVector{1.0}, {stage_of(1.0, HVector{0.5})}),
                 InvalidInput);
}

TEST(Cauchy, ShrinkingDifferencesPass) {
    const auto r = cauchy_check({stage_of(1, HVector{1.0}), stage_of(0.1, HVector{1.5}), stage_of(0.01, HVector{1.6})});
    EXPECT_TRUE(r.passed);
    EXPECT_NEAR(r.worst_value, 0.2, 1e-12);
}

TEST(Cauchy, GrowingDifferencesFail) {
    const auto r = cauchy_check({stage_of(1, HVector{1.0}), stage_of(0.1, HVector{1.1}), stage_of(0.01, HVector{2.0})});
    EXPECT_FALSE(r.passed);
    EXPECT_TRUE(r.witness.has_value());
}

TEST(Cauchy, TooFewStages) {
    EXPECT_FALSE(cauchy_check({stage_of(1, HVector{1.0}), stage_of(0.1, HVector{1.1})}).passed);
}

TEST(Minty, ExactIdentitySolution) {
    const auto r = minty_diagnostic(make_operator("identity", 1), HVector{4.0}, HVector{4.0},
                                    {1e-1, 1e-2, 1e-3}, 100, 0);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.closing_residual, 0.0);
    EXPECT_GE(r.worst_value, 0.0);
    EXPECT_NEAR(r.tolerance, 5e-6, 1e-18);
}

TEST(Minty, FarFromSolutionFailsOnResidualGate) {
    const auto r = minty_diagnostic(make_operator("identity", 1), HVector{0.0}, HVector{4.0},
                                    {1e-1, 1e-2, 1e-3}, 100, 0);
    EXPECT_FALSE(r.passed);
    EXPECT_EQ(r.closing_residual, 4.0);
}

TEST(Minty, NegativePairingCaught) {
    // u = 5 overshoots h = 4, so the pairing along +1 is about -1.
    const auto r = minty_diagnostic(make_operator("identity", 1), HVector{5.0}, HVector{4.0},
                                    {1e-1, 1e-2, 1e-3}, 10, 0);
    EXPECT_FALSE(r.passed);
    EXPECT_LT(r.worst_value, -0.8);
    EXPECT_TRUE(r.witness.has_value());
}

TEST(Minty, ConvexGradientComputedSolution) {
    const auto op = make_operator("convex_gradient", 3);
    const HVector h{2.0, 2.0, 2.0};
    const auto rep = run_continuation(op, h, {}, FlowConfig{});
    const auto r = minty_diagnostic(op, rep.final_u, h, {1e-1, 1e-2, 1e-3}, 100, 42);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.samples_checked, 3u * 101u);
}

TEST(Minty, SerialAndParallelAgree) {
    const auto op = make_operator("skew_plus_cubic", 4);
    const HVector u{0.3, -0.2, 0.1, 0.5};
    const HVector h = evaluate(op, u);
    const auto s = minty_diagnostic(op, u, h, {1e-1, 1e-2}, 50, 9, Exec::serial);
    const auto p = minty_diagnostic(op, u, h, {1e-1, 1e-2}, 50, 9, Exec::parallel);
    EXPECT_EQ(s.worst_value, p.worst_value);
    EXPECT_EQ(s.passed, p.passed);
}

TEST(VerifySolution, Examples) {
    const auto cubic = make_operator("scalar_cubic", 1);
    EXPECT_TRUE(verify_solution(cubic, HVector{2.0}, HVector{8.0}, 1e-12));
    EXPECT_FALSE(verify_solution(cubic, HVector{1.0}, HVector{8.0}, 1e-3));
    const auto sin_op = make_operator("scalar_affine_sin", 1);
    const auto root = oracle::solve_scalar(sin_op, HVector{3.0});
    EXPECT_TRUE(verify_solution(sin_op, root.u, HVector{3.0}, 1e-9));
}

}  // namespace
}  // namespace dsm
