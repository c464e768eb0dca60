#include "dsm/continuation.hpp"

#include "dsm/errors.hpp"
#include "dsm/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dsm {

void ContinuationSchedule::validate() const {
    if (!(a_min > 0.0)) throw InvalidInput("schedule: a_min must be positive");
    if (!(a0 > a_min)) throw InvalidInput("schedule: a0 must exceed a_min");
    if (!(decay_factor > 0.0 && decay_factor < 1.0)) {
        throw InvalidInput("schedule: decay_factor must lie in (0, 1)");
    }
}

std::vector<double> ContinuationSchedule::values() const {
    validate();
    std::vector<double> out{a0};
    double a = a0;
    while (true) {
        a *= decay_factor;
        // Rounding in repeated products (0.1^6 != 1e-6) must not spawn an extra,
        // nearly duplicate stage just above a_min.
        if (a <= a_min * (1.0 + 1e-9)) {
            out.push_back(a_min);
            return out;
        }
        out.push_back(a);
    }
}

namespace {

ValidatorReport not_run(const HVector& u, const HVector& start) {
    ValidatorReport r;
    r.passed = false;
    r.worst_value = std::numeric_limits<double>::quiet_NaN();
    r.witness = std::make_pair(u, start);
    return r;
}

}  // namespace

SolveReport run_continuation(const OperatorSpec& op, const HVector& h,
                             const ContinuationSchedule& sched, const FlowConfig& cfg,
                             const ContinuationOptions& opts) {
    require_dim(h, op.dim, "run_continuation");
    cfg.validate();
    const std::vector<double> as = sched.values();

    SolveReport report;
    report.operator_name = op.name;
    report.dim = op.dim;
    report.h = h;

    HVector warm(op.dim);
    for (std::size_t i = 0; i < as.size(); ++i) {
        RegularizedSolution sol = integrate_flow(op, as[i], h, warm, cfg);
        StageResult stage;
        stage.a = as[i];
        stage.u_a = sol.u_a;
        stage.residual_eq6 = sol.residual;
        stage.norm_u = norm(sol.u_a);
        stage.g0 = sol.trace.g0;
        stage.t_end = sol.trace.t_end();
        stage.steps = sol.trace.steps();
        stage.terminated_by = sol.trace.terminated_by;
        stage.trace = std::move(sol.trace);
        const bool ok = sol.converged();
        report.stages.push_back(std::move(stage));
        if (!ok) {
            report.failed_stage = i;
            report.final_u = sol.u_a;
            report.final_residual_eq5 = norm(evaluate(op, sol.u_a) - h);
            report.bound_report = not_run(sol.u_a, warm);
            static_cast<ValidatorReport&>(report.minty_report) = not_run(sol.u_a, warm);
            report.minty_report.closing_residual = report.final_residual_eq5;
            report.cauchy_report = not_run(sol.u_a, warm);
            return report;
        }
        warm = sol.u_a;
    }

    report.completed = true;
    report.final_u = report.stages.back().u_a;
    report.final_residual_eq5 = norm(evaluate(op, report.final_u) - h);
    report.bound_report = uniform_bound_check(op, h, report.stages);
    report.cauchy_report = cauchy_check(report.stages);
    report.minty_report = minty_diagnostic(op, report.final_u, h, opts.minty_s_values,
                                           opts.minty_dirs, opts.minty_seed);
    return report;
}

ValidatorReport uniform_bound_check(const OperatorSpec& op, const HVector& h,
                                    const std::vector<StageResult>& stages) {
    if (stages.size() < 2) throw InvalidInput("uniform_bound_check: need at least two stages");
    constexpr double kIdentityTol = 1e-8;
    constexpr double kDegenerate = 1e-8;

    std::vector<double> norms;
    norms.reserve(stages.size());
    for (const auto& s : stages) norms.push_back(norm(s.u_a));
    std::vector<double> sorted = norms;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t m = sorted.size() / 2;
    const double median = sorted.size() % 2 ? sorted[m] : 0.5 * (sorted[m - 1] + sorted[m]);
    const auto max_it = std::max_element(norms.begin(), norms.end());
    const std::size_t max_i = static_cast<std::size_t>(max_it - norms.begin());

    ValidatorReport report;
    report.samples_checked = stages.size();
    double worst = median > 0.0 ? *max_it / (10.0 * median) : (*max_it > 0.0 ? INFINITY : 0.0);
    std::optional<std::pair<HVector, HVector>> witness;
    if (worst > 1.0) witness = std::make_pair(stages[max_i].u_a, stages.front().u_a);

    const double h_norm = norm(h);
    for (const auto& s : stages) {
        const double un = norm(s.u_a);
        if (un <= kDegenerate) continue;
        const HVector fu = evaluate(op, s.u_a);
        const double lhs = inner(fu, s.u_a) / un;
        const double identity_gap = std::abs(lhs + s.a * un - inner(h, s.u_a) / un);
        const double bound_excess = lhs - h_norm;
        const double v = std::max(identity_gap / kIdentityTol, bound_excess / kIdentityTol);
        if (v > worst) {
            worst = v;
            if (v > 1.0) witness = std::make_pair(s.u_a, fu);
        }
    }
    report.worst_value = worst;
    report.passed = worst <= 1.0;
    if (!report.passed) report.witness = std::move(witness);
    return report;
}

ValidatorReport cauchy_check(const std::vector<StageResult>& stages) {
    ValidatorReport report;
    const std::size_t n = stages.size();
    if (n < 3) {
        report.passed = false;
        report.worst_value = std::numeric_limits<double>::quiet_NaN();
        if (n > 0) report.witness = std::make_pair(stages.front().u_a, stages.back().u_a);
        return report;
    }
    const double prev = norm(stages[n - 2].u_a - stages[n - 3].u_a);
    const double last = norm(stages[n - 1].u_a - stages[n - 2].u_a);
    const double slack = 1e-12 * (1.0 + norm(stages[n - 1].u_a));
    report.samples_checked = 2;
    report.worst_value = prev > 0.0 ? last / prev : (last > 0.0 ? INFINITY : 0.0);
    report.passed = last <= prev + slack;
    if (!report.passed) report.witness = std::make_pair(stages[n - 2].u_a, stages[n - 1].u_a);
    return report;
}

MintyReport minty_diagnostic(const OperatorSpec& op, const HVector& u, const HVector& h,
                             const std::vector<double>& s_values, std::size_t n_dirs,
                             std::uint64_t seed, Exec exec) {
    require_dim(u, op.dim, "minty_diagnostic");
    require_dim(h, op.dim, "minty_diagnostic");
    if (s_values.empty()) throw InvalidInput("minty_diagnostic: need at least one s value");
    for (double s : s_values)
        if (!(s > 0.0)) throw InvalidInput("minty_diagnostic: s values must be positive");

    const HVector gap = h - evaluate(op, u);
    const double gap_norm = norm(gap);

    std::vector<HVector> dirs;
    Rng rng(seed);
    for (std::size_t k = 0; k < n_dirs; ++k) dirs.push_back(unit_direction(rng, op.dim));
    if (gap_norm > 0.0) dirs.push_back((1.0 / gap_norm) * gap);

    const std::size_t nd = dirs.size();
    const auto values = kernels::map_indexed(s_values.size() * nd, exec, [&](std::size_t k) {
        const HVector& eta = dirs[k % nd];
        HVector shifted = u;
        shifted.axpy(-s_values[k / nd], eta);
        return inner(h - evaluate(op, shifted), eta);
    });

    MintyReport report;
    report.tolerance = 1e-6 * (1.0 + norm(h));
    report.closing_residual = gap_norm;
    report.samples_checked = values.size();
    if (values.empty()) {
        report.worst_value = 0.0;
        report.passed = gap_norm <= report.tolerance;
        if (!report.passed) report.witness = std::make_pair(u, gap);
        return report;
    }
    const auto worst = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    report.worst_value = values[worst];
    report.passed = values[worst] >= -report.tolerance && gap_norm <= report.tolerance;
    if (!report.passed) {
        if (values[worst] < -report.tolerance) {
            report.witness = std::make_pair(u, dirs[worst % nd]);
        } else {
            report.witness = std::make_pair(u, gap);
        }
    }
    return report;
}

bool verify_solution(const OperatorSpec& op, const HVector& u, const HVector& h, double tol) {
    require_dim(h, op.dim, "verify_solution");
    return norm(evaluate(op, u) - h) <= tol;
}

}  // namespace dsm
