#pragma once

#include "dsm/hvector.hpp"
#include "dsm/operator.hpp"
#include "dsm/validators.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dsm {

/// Discretization controls for the regularized flow
///   v' = -(F'(v) + aI)^{-1} [F(v) + a v - h].
struct FlowConfig {
    double ode_rel_tol = 1e-8;           // local error per step, relative to max(|v|, 1)
    std::optional<double> max_time;      // default: ln(g0 / residual_tol) + 5
    double residual_tol = 1e-10;         // stop once g(t) <= residual_tol
    double initial_step = 1e-3;
    double min_step = 1e-12;
    double max_step = 0.1;
    std::vector<double> checkpoints{1.0};  // times the integrator lands on exactly
    double fd_step = 1e-6;               // used only for operators without analytic jac

    /// Throws InvalidInput if any invariant is violated.
    void validate() const;
};

enum class Termination { residual_tol_reached, max_time_reached, step_underflow, solver_error };

std::string_view to_string(Termination t);

struct FlowRecord {
    double t;
    double g;
    double g_theory;    // g0 e^{-t}
    double vdot_norm;
    double vdot_bound;  // (g0 / a) e^{-t}
    double step_size;   // step that produced this record; 0 for t = 0
};

struct FlowTrace {
    double a = 0.0;
    double g0 = 0.0;
    double ode_rel_tol = 0.0;
    double residual_tol = 0.0;
    std::vector<FlowRecord> records;
    std::vector<HVector> states;  // v(t) for each record
    Termination terminated_by = Termination::solver_error;
    std::string message;          // detail for step_underflow / solver_error
    std::size_t rejected_steps = 0;

    double t_end() const { return records.empty() ? 0.0 : records.back().t; }
    std::size_t steps() const { return records.empty() ? 0 : records.size() - 1; }
};

struct RegularizedSolution {
    double a = 0.0;
    HVector u_a{0.0};
    double residual = 0.0;  // |F(u_a) + a u_a - h|
    FlowTrace trace;

    bool converged() const { return trace.terminated_by == Termination::residual_tol_reached; }
};

/// |F(v) + a v - h|
double residual(const OperatorSpec& op, double a, const HVector& h, const HVector& v);

/// -(F'(v) + aI)^{-1} [F(v) + a v - h]. Throws NumericalError if the result
/// exceeds g(v)/a beyond rounding, which can only happen when F'(v) has a
/// negative symmetric part.
HVector dsm_rhs(const OperatorSpec& op, double a, const HVector& h, const HVector& v,
                double fd_step = 1e-6);

/// Integrates the flow from v0 with an adaptive Dormand-Prince 5(4) pair and
/// PI step control until g(t) <= cfg.residual_tol or the horizon is reached.
/// The Jacobian is re-evaluated at every stage. Failures are reported through
/// trace.terminated_by, not thrown.
RegularizedSolution integrate_flow(const OperatorSpec& op, double a, const HVector& h,
                                   const HVector& v0, const FlowConfig& cfg);

/// |g - g0 e^{-t}| <= tol_factor * ode_rel_tol * g0 at every record.
/// worst_value is the largest deviation divided by that allowance (pass iff <= 1).
ValidatorReport verify_decay(const FlowTrace& trace, double tol_factor = 100.0);

/// vdot_norm <= (g0/a) e^{-t} (1 + slack) at every record. worst_value is the
/// largest ratio vdot_norm / bound.
ValidatorReport verify_vdot_bound(const FlowTrace& trace, double slack = 1e-6);

/// |v(t) - u_a| <= (g0/a) e^{-t} (1 + slack) at every recorded state, with u_a
/// standing in for v(infinity). Also confirms that the first state reproduces g0.
ValidatorReport verify_tail_bound(const OperatorSpec& op, double a, const HVector& h,
                                  const FlowTrace& trace, const HVector& u_a, double slack = 1e-3);

/// Runs the flow from every start; passes iff all limits agree pairwise within
/// 10 * residual_tol / a. worst_value is the largest pairwise distance.
ValidatorReport check_uniqueness(const OperatorSpec& op, double a, const HVector& h,
                                 const std::vector<HVector>& starts, const FlowConfig& cfg);

}  // namespace dsm
