#pragma once

#include "dsm/flow.hpp"
#include "dsm/hvector.hpp"
#include "dsm/operator.hpp"
#include "dsm/validators.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dsm {

/// Geometric regularization sequence a0, q a0, q^2 a0, ... The first term at
/// or below a_min is clamped to a_min and ends the sequence.
struct ContinuationSchedule {
    double a0 = 1.0;
    double decay_factor = 0.1;
    double a_min = 1e-10;

    void validate() const;
    std::vector<double> values() const;
};

struct StageResult {
    double a = 0.0;
    HVector u_a{0.0};
    double residual_eq6 = 0.0;  // |F(u_a) + a u_a - h|
    double norm_u = 0.0;
    double g0 = 0.0;
    double t_end = 0.0;
    std::size_t steps = 0;
    Termination terminated_by = Termination::solver_error;
    FlowTrace trace;
};

/// Minty-type certificate. closing_residual is |h - F(u)|, the value of the
/// pairing at the direction eta = (h - F(u)) / |h - F(u)| with s -> 0.
struct MintyReport : ValidatorReport {
    double closing_residual = 0.0;
    double tolerance = 0.0;
};

struct SolveReport {
    std::string operator_name;
    std::size_t dim = 0;
    HVector h{0.0};
    std::vector<StageResult> stages;
    HVector final_u{0.0};
    double final_residual_eq5 = 0.0;  // |F(final_u) - h|
    ValidatorReport bound_report;
    MintyReport minty_report;
    ValidatorReport cauchy_report;
    bool completed = false;
    std::optional<std::size_t> failed_stage;
};

struct ContinuationOptions {
    std::vector<double> minty_s_values{1e-1, 1e-2, 1e-3};
    std::size_t minty_dirs = 100;
    std::uint64_t minty_seed = 0;
};

/// Solves F(u) = h by sweeping the schedule, each stage integrating the
/// regularized flow warm-started from the previous stage (the first from 0).
/// A stage that does not reach residual_tol ends the sweep; the report then
/// has completed == false and failed_stage set.
SolveReport run_continuation(const OperatorSpec& op, const HVector& h,
                             const ContinuationSchedule& sched, const FlowConfig& cfg,
                             const ContinuationOptions& opts = {});

/// Uniform bound on stage solutions:
///  (i)  max |u_a| <= 10 * median |u_a|;
///  (ii) for |u_a| > 1e-8, the identity (F(u_a),u_a)/|u_a| + a|u_a| = (h,u_a)/|u_a|
///       within 1e-8, and (F(u_a),u_a)/|u_a| <= |h| + 1e-8.
/// worst_value is the largest violation divided by its allowance (pass iff <= 1).
ValidatorReport uniform_bound_check(const OperatorSpec& op, const HVector& h,
                                    const std::vector<StageResult>& stages);

/// Successive differences |u_{a_{n+1}} - u_{a_n}| over the last three stages
/// must not increase. worst_value is last difference / previous difference.
ValidatorReport cauchy_check(const std::vector<StageResult>& stages);

/// Checks (h - F(u - s eta), eta) >= -tol for n_dirs seeded unit eta, the
/// closing direction eta = (h - F(u))/|h - F(u)|, and every s; and requires
/// |h - F(u)| <= tol, where tol = 1e-6 (1 + |h|). worst_value is the minimum pairing.
MintyReport minty_diagnostic(const OperatorSpec& op, const HVector& u, const HVector& h,
                             const std::vector<double>& s_values, std::size_t n_dirs,
                             std::uint64_t seed, Exec exec = Exec::parallel);

/// |F(u) - h| <= tol
bool verify_solution(const OperatorSpec& op, const HVector& u, const HVector& h, double tol);

}  // namespace dsm
