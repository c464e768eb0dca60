#include "dsm/flow.hpp"

#include "dsm/errors.hpp"
#include "dsm/linalg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace dsm {

void FlowConfig::validate() const {
    if (!(ode_rel_tol > 0.0)) throw InvalidInput("FlowConfig: ode_rel_tol must be positive");
    if (!(residual_tol > 0.0)) throw InvalidInput("FlowConfig: residual_tol must be positive");
    if (max_time && !(*max_time > 0.0)) throw InvalidInput("FlowConfig: max_time must be positive");
    if (!(min_step > 0.0 && min_step <= initial_step && initial_step <= max_step)) {
        throw InvalidInput("FlowConfig: need 0 < min_step <= initial_step <= max_step");
    }
    if (!(fd_step > 0.0)) throw InvalidInput("FlowConfig: fd_step must be positive");
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::residual_tol_reached: return "residual_tol_reached";
        case Termination::max_time_reached: return "max_time_reached";
        case Termination::step_underflow: return "step_underflow";
        case Termination::solver_error: return "solver_error";
    }
    return "?";
}

namespace {

void require_positive_a(double a, const char* what) {
    if (!(a > 0.0)) throw InvalidInput(std::string(what) + ": a must be positive");
}

HVector regularized_residual(const OperatorSpec& op, double a, const HVector& h, const HVector& v) {
    HVector r = evaluate(op, v);
    r.axpy(a, v);
    r -= h;
    return r;
}

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
// 5th-order minus embedded 4th-order weights.
constexpr std::array<double, 7> kE{71.0 / 57600,  0.0,          -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

constexpr double kSafety = 0.9;
constexpr double kAlpha = 0.7 / 5.0;
constexpr double kBeta = 0.4 / 5.0;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;
// Landing margin past the predicted tolerance-crossing time.
constexpr double kLandingMargin = 1e-3;

}  // namespace

double residual(const OperatorSpec& op, double a, const HVector& h, const HVector& v) {
    require_positive_a(a, "residual");
    require_dim(h, op.dim, "residual");
    require_dim(v, op.dim, "residual");
    return norm(regularized_residual(op, a, h, v));
}

namespace {

// -(J + aI)^{-1} r, checked against |r|/a.
HVector flow_direction(const OperatorSpec& op, double a, const HVector& v, const HVector& r,
                       double fd_step) {
    if (!all_finite(r)) throw NumericalError("dsm_rhs: non-finite residual");
    HVector x = solve_regularized({jacobian(op, v, fd_step, Exec::serial), a, r});
    x *= -1.0;
    const double g = norm(r);
    const double len = norm(x);
    if (len > (g / a) * (1.0 + 1e-6)) {
        throw NumericalError("dsm_rhs: |v'| = " + std::to_string(len) + " exceeds g/a = " +
                             std::to_string(g / a) + "; F' has a negative symmetric part here");
    }
    return x;
}

// The integrator carries its state in extended precision. Near the stopping
// tolerance g is ~1e-10 while |v| can be large, and rounding v to double
// alone perturbs the residual by eps |a v|, which is comparable to g.
using ExtVec = std::vector<long double>;

HVector to_double(const ExtVec& x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = static_cast<double>(x[i]);
    return HVector(std::move(out));
}

ExtVec to_ext(const HVector& x) { return ExtVec(x.begin(), x.end()); }

// F(v) + a v - h with v in extended precision; F itself is evaluated at the
// nearest double point.
HVector ext_residual(const OperatorSpec& op, double a, const HVector& h, const ExtVec& v) {
    const HVector f = evaluate(op, to_double(v));
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        r[i] = static_cast<double>(static_cast<long double>(f[i]) + static_cast<long double>(a) * v[i] -
                                   static_cast<long double>(h[i]));
    }
    return HVector(std::move(r));
}

}  // namespace

HVector dsm_rhs(const OperatorSpec& op, double a, const HVector& h, const HVector& v,
                double fd_step) {
    require_positive_a(a, "dsm_rhs");
    require_dim(h, op.dim, "dsm_rhs");
    require_dim(v, op.dim, "dsm_rhs");
    return flow_direction(op, a, v, regularized_residual(op, a, h, v), fd_step);
}

RegularizedSolution integrate_flow(const OperatorSpec& op, double a, const HVector& h,
                                   const HVector& v0, const FlowConfig& cfg) {
    require_positive_a(a, "integrate_flow");
    require_dim(h, op.dim, "integrate_flow");
    require_dim(v0, op.dim, "integrate_flow");
    cfg.validate();

    const std::size_t n = op.dim;
    RegularizedSolution sol;
    sol.a = a;
    sol.u_a = v0;
    FlowTrace& trace = sol.trace;
    trace.a = a;
    trace.ode_rel_tol = cfg.ode_rel_tol;
    trace.residual_tol = cfg.residual_tol;

    auto rhs = [&](const ExtVec& v) {
        return flow_direction(op, a, to_double(v), ext_residual(op, a, h, v), cfg.fd_step);
    };

    const double g0 = residual(op, a, h, v0);
    trace.g0 = g0;
    sol.residual = g0;
    if (!std::isfinite(g0)) {
        trace.terminated_by = Termination::solver_error;
        trace.message = "non-finite initial residual";
        return sol;
    }

    ExtVec v = to_ext(v0);
    std::array<HVector, 7> k{HVector(n), HVector(n), HVector(n), HVector(n),
                             HVector(n), HVector(n), HVector(n)};
    try {
        k[0] = rhs(v);
    } catch (const std::exception& e) {
        trace.records.push_back({0.0, g0, g0, std::numeric_limits<double>::quiet_NaN(), g0 / a, 0.0});
        trace.states.push_back(v0);
        trace.terminated_by = Termination::solver_error;
        trace.message = e.what();
        return sol;
    }

    trace.records.push_back({0.0, g0, g0, norm(k[0]), g0 / a, 0.0});
    trace.states.push_back(v0);

    double t = 0.0;
    double g = g0;
    const double horizon = cfg.max_time.value_or(
        std::max(std::log(g0 / cfg.residual_tol), 0.0) + 5.0);

    auto next_checkpoint = [&](double now) {
        double best = std::numeric_limits<double>::infinity();
        for (double cp : cfg.checkpoints)
            if (cp > now && cp < best) best = cp;
        return best;
    };

    double step = cfg.initial_step;
    double err_prev = 1.0;
    bool last_rejected = false;
    ExtVec v_new(n);
    ExtVec stage(n);

    while (true) {
        if (g <= cfg.residual_tol) {
            trace.terminated_by = Termination::residual_tol_reached;
            break;
        }
        if (t >= horizon) {
            trace.terminated_by = Termination::max_time_reached;
            break;
        }
        if (step < cfg.min_step) {
            trace.terminated_by = Termination::step_underflow;
            trace.message = "step size " + std::to_string(step) + " below min_step at t = " +
                            std::to_string(t);
            break;
        }

        // Land exactly on checkpoints and the horizon; stop just past the
        // predicted crossing of residual_tol instead of overshooting it.
        double target_t = t + std::min(step, cfg.max_step);
        const double predicted = t + std::log(g / cfg.residual_tol) + kLandingMargin;
        target_t = std::min({target_t, predicted, next_checkpoint(t), horizon});
        const double h_try = target_t - t;

        try {
            for (std::size_t s = 1; s < 7; ++s) {
                for (std::size_t i = 0; i < n; ++i) {
                    long double acc = 0.0L;
                    for (std::size_t j = 0; j < s; ++j) acc += static_cast<long double>(kA[s][j]) * k[j][i];
                    stage[i] = v[i] + static_cast<long double>(h_try) * acc;
                }
                if (s == 6) v_new = stage;
                k[s] = rhs(stage);
            }
        } catch (const std::exception& e) {
            trace.terminated_by = Termination::solver_error;
            trace.message = e.what();
            break;
        }
        HVector err_vec(n);
        for (std::size_t j = 0; j < 7; ++j)
            if (kE[j] != 0.0) err_vec.axpy(h_try * kE[j], k[j]);
        const double err = norm(err_vec) / (cfg.ode_rel_tol * std::max(norm(to_double(v)), 1.0));

        if (!(err <= 1.0)) {
            ++trace.rejected_steps;
            const double factor = std::isfinite(err)
                                      ? std::max(kMinFactor, kSafety * std::pow(err, -0.2))
                                      : kMinFactor;
            step = h_try * factor;
            last_rejected = true;
            continue;
        }

        t = target_t;
        v.swap(v_new);
        k[0] = k[6];
        const HVector v_rounded = to_double(v);
        g = residual(op, a, h, v_rounded);
        const double decay = std::exp(-t);
        trace.records.push_back({t, g, g0 * decay, norm(k[0]), (g0 / a) * decay, h_try});
        trace.states.push_back(v_rounded);

        const double err_floor = std::max(err, 1e-10);
        double factor = kSafety * std::pow(err_floor, -kAlpha) * std::pow(err_prev, kBeta);
        factor = std::clamp(factor, kMinFactor, kMaxFactor);
        if (last_rejected) factor = std::min(factor, 1.0);
        // A step shortened to hit a checkpoint does not shrink the next proposal.
        step = std::max(h_try, std::min(step, cfg.max_step)) * factor;
        err_prev = err_floor;
        last_rejected = false;
    }

    sol.u_a = trace.states.back();
    sol.residual = g;
    return sol;
}

ValidatorReport verify_decay(const FlowTrace& trace, double tol_factor) {
    if (trace.records.empty()) throw InvalidInput("verify_decay: empty trace");
    if (!(tol_factor > 0.0)) throw InvalidInput("verify_decay: tol_factor must be positive");
    const double allowance = tol_factor * trace.ode_rel_tol * trace.g0;
    ValidatorReport report;
    report.samples_checked = trace.records.size();
    report.passed = true;
    double worst = 0.0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto& r = trace.records[i];
        const double deviation = std::abs(r.g - trace.g0 * std::exp(-r.t));
        const double normalized = allowance > 0.0 ? deviation / allowance
                                                  : (deviation > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (!(normalized <= 1.0)) report.passed = false;
        if (normalized > worst) {
            worst = normalized;
            worst_i = i;
        }
    }
    report.worst_value = worst;
    if (!report.passed) {
        const auto& r = trace.records[worst_i];
        report.witness = std::make_pair(HVector{r.t, r.g}, HVector{r.t, trace.g0 * std::exp(-r.t)});
    }
    return report;
}

ValidatorReport verify_vdot_bound(const FlowTrace& trace, double slack) {
    if (trace.records.empty()) throw InvalidInput("verify_vdot_bound: empty trace");
    ValidatorReport report;
    report.samples_checked = trace.records.size();
    report.passed = true;
    double worst = 0.0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const auto& r = trace.records[i];
        const double bound = (trace.g0 / trace.a) * std::exp(-r.t);
        const double ratio = bound > 0.0 ? r.vdot_norm / bound
                                         : (r.vdot_norm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (!(ratio <= 1.0 + slack)) report.passed = false;
        if (ratio > worst || std::isnan(ratio)) {
            worst = std::isnan(ratio) ? std::numeric_limits<double>::infinity() : ratio;
            worst_i = i;
        }
    }
    report.worst_value = worst;
    if (!report.passed) {
        const auto& r = trace.records[worst_i];
        report.witness = std::make_pair(HVector{r.t, r.vdot_norm},
                                        HVector{r.t, (trace.g0 / trace.a) * std::exp(-r.t)});
    }
    return report;
}

ValidatorReport verify_tail_bound(const OperatorSpec& op, double a, const HVector& h,
                                  const FlowTrace& trace, const HVector& u_a, double slack) {
    if (trace.records.empty()) throw InvalidInput("verify_tail_bound: empty trace");
    if (trace.states.size() != trace.records.size()) {
        throw InvalidInput("verify_tail_bound: trace carries no states");
    }
    require_dim(u_a, op.dim, "verify_tail_bound");
    ValidatorReport report;
    report.samples_checked = trace.records.size();

    const double g_first = residual(op, a, h, trace.states.front());
    const bool consistent = std::abs(g_first - trace.g0) <= 1e-12 * std::max(trace.g0, 1.0) &&
                            trace.a == a &&
                            trace.terminated_by == Termination::residual_tol_reached;
    report.passed = consistent;

    double worst = 0.0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < trace.records.size(); ++i) {
        const double bound = (trace.g0 / a) * std::exp(-trace.records[i].t);
        const double dist = norm(trace.states[i] - u_a);
        const double ratio = bound > 0.0 ? dist / bound
                                         : (dist > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        if (!(ratio <= 1.0 + slack)) report.passed = false;
        if (ratio > worst) {
            worst = ratio;
            worst_i = i;
        }
    }
    report.worst_value = worst;
    if (!report.passed) report.witness = std::make_pair(trace.states[worst_i], u_a);
    return report;
}

ValidatorReport check_uniqueness(const OperatorSpec& op, double a, const HVector& h,
                                 const std::vector<HVector>& starts, const FlowConfig& cfg) {
    require_positive_a(a, "check_uniqueness");
    if (starts.size() < 2) throw InvalidInput("check_uniqueness: need at least two starts");
    ValidatorReport report;
    report.passed = true;
    std::vector<HVector> limits;
    limits.reserve(starts.size());
    for (const auto& start : starts) {
        RegularizedSolution sol = integrate_flow(op, a, h, start, cfg);
        if (!sol.converged()) {
            report.passed = false;
            report.samples_checked = limits.size() + 1;
            report.worst_value = std::numeric_limits<double>::infinity();
            report.witness = std::make_pair(start, sol.u_a);
            return report;
        }
        limits.push_back(std::move(sol.u_a));
    }
    const double allowed = 10.0 * cfg.residual_tol / a;
    double worst = 0.0;
    std::pair<std::size_t, std::size_t> worst_pair{0, 1};
    for (std::size_t i = 0; i < limits.size(); ++i) {
        for (std::size_t j = i + 1; j < limits.size(); ++j) {
            const double d = norm(limits[i] - limits[j]);
            if (d > worst) {
                worst = d;
                worst_pair = {i, j};
            }
        }
    }
    report.samples_checked = limits.size();
    report.worst_value = worst;
    report.passed = worst <= allowed;
    if (!report.passed) {
        report.witness = std::make_pair(limits[worst_pair.first], limits[worst_pair.second]);
    }
    return report;
}

}  // namespace dsm
