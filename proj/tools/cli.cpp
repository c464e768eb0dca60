#include "cli.hpp"

#include "dsm/errors.hpp"
#include "dsm/io.hpp"
#include "dsm/linalg.hpp"
#include "dsm/operator.hpp"
#include "dsm/oracle.hpp"
#include "dsm/sampling.hpp"
#include "dsm/validators.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace dsm::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(trim(text), &used);
        if (used != trim(text).size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw InvalidInput("bad number '" + text + "' in " + context);
    }
}

std::string vec_str(const HVector& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i) s += ", ";
        s += io::format_double(v[i]);
    }
    return s + "]";
}

const char* verdict(bool ok) { return ok ? "PASS" : "FAIL"; }

void print_report(std::ostream& out, const std::string& label, const ValidatorReport& r) {
    out << label << ": " << verdict(r.passed) << " (samples=" << r.samples_checked
        << ", worst=" << io::format_double(r.worst_value) << ")\n";
    if (!r.passed && r.witness) {
        out << "  witness: " << vec_str(r.witness->first) << " , " << vec_str(r.witness->second) << '\n';
    }
}

OperatorSpec build_operator(const ExperimentConfig& cfg) {
    return make_operator(cfg.op_name, resolve_dim(cfg.op_name, cfg.dim));
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << content;
}

}  // namespace

TargetSpec parse_target(const std::string& raw) {
    const std::string text = trim(raw);
    TargetSpec spec;
    if (text == "ones") return spec;
    if (text == "zeros") {
        spec.kind = TargetSpec::Kind::zeros;
        return spec;
    }
    if (text.rfind("ones*", 0) == 0 || text.rfind("ones:", 0) == 0) {
        spec.scale = parse_number(text.substr(5), "target");
        return spec;
    }
    if (text.rfind("ones\u00b7", 0) == 0) {  // ones·2
        spec.scale = parse_number(text.substr(6), "target");
        return spec;
    }
    if (text.rfind("seeded_random(", 0) == 0 && text.back() == ')') {
        const std::string body = text.substr(14, text.size() - 15);
        const auto comma = body.find(',');
        if (comma == std::string::npos) throw InvalidInput("target: seeded_random(<seed>,<norm_cap>)");
        spec.kind = TargetSpec::Kind::seeded_random;
        const double seed = parse_number(body.substr(0, comma), "target seed");
        if (seed < 0 || seed != std::floor(seed)) throw InvalidInput("target: seed must be a nonnegative integer");
        spec.seed = static_cast<std::uint64_t>(seed);
        spec.norm_cap = parse_number(body.substr(comma + 1), "target norm cap");
        if (!(spec.norm_cap > 0.0)) throw InvalidInput("target: norm cap must be positive");
        return spec;
    }
    if (text.rfind("explicit:", 0) == 0) {
        std::string body = trim(text.substr(9));
        if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
            throw InvalidInput("target: explicit:[x,y,...]");
        }
        body = body.substr(1, body.size() - 2);
        spec.kind = TargetSpec::Kind::explicit_values;
        std::istringstream parts(body);
        std::string cell;
        while (std::getline(parts, cell, ',')) spec.values.push_back(parse_number(cell, "explicit target"));
        if (spec.values.empty()) throw InvalidInput("target: explicit list is empty");
        return spec;
    }
    throw InvalidInput("unrecognized target '" + text + "'");
}

HVector build_target(const TargetSpec& spec, std::size_t dim) {
    switch (spec.kind) {
        case TargetSpec::Kind::ones: return HVector(dim, spec.scale);
        case TargetSpec::Kind::zeros: return HVector(dim, 0.0);
        case TargetSpec::Kind::seeded_random: {
            Rng rng(sub_seed(spec.seed, "target"));
            return uniform_in_ball(rng, dim, spec.norm_cap);
        }
        case TargetSpec::Kind::explicit_values: {
            HVector h(spec.values);
            require_dim(h, dim, "explicit target");
            return h;
        }
    }
    throw InvalidInput("bad target kind");
}

void apply_json(ExperimentConfig& cfg, const nlohmann::json& doc) {
    if (!doc.is_object()) throw InvalidInput("config: top level must be an object");
    for (const auto& [key, value] : doc.items()) {
        if (key == "operator") cfg.op_name = value.get<std::string>();
        else if (key == "dim") cfg.dim = value.get<std::size_t>();
        else if (key == "a") cfg.a = value.get<double>();
        else if (key == "a0") cfg.schedule.a0 = value.get<double>();
        else if (key == "decay_factor") cfg.schedule.decay_factor = value.get<double>();
        else if (key == "a_min") cfg.schedule.a_min = value.get<double>();
        else if (key == "tol") cfg.tol = value.get<double>();
        else if (key == "ode_tol") cfg.flow.ode_rel_tol = value.get<double>();
        else if (key == "residual_tol") cfg.flow.residual_tol = value.get<double>();
        else if (key == "max_t") cfg.flow.max_time = value.get<double>();
        else if (key == "target") {
            cfg.target_text = value.get<std::string>();
            cfg.target = parse_target(cfg.target_text);
        } else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "trace_dir") cfg.trace_dir = value.get<std::string>();
        else if (key == "report") cfg.report_path = value.get<std::string>();
        else if (key == "oracle") cfg.oracle = value.get<bool>();
        else throw InvalidInput("config: unknown key '" + key + "'");
    }
}

int cmd_gallery(std::ostream& out) {
    for (const auto& info : gallery_catalog()) {
        const OperatorSpec op = make_operator(info.name, info.dim_policy == DimPolicy::at_least_two ? 2 : 1);
        out << info.name << "  dim: " << to_string(info.dim_policy)
            << "  monotone=" << (op.declared_monotone ? "true" : "false")
            << " strictly_monotone=" << (op.declared_strictly_monotone ? "true" : "false")
            << " coercive=" << (op.declared_coercive ? "true" : "false") << "  # "
            << info.description << '\n';
    }
    return 0;
}

int cmd_verify(const ExperimentConfig& cfg, std::ostream& out) {
    const OperatorSpec op = build_operator(cfg);
    out << "operator " << op.name << " (dim " << op.dim << ")\n";

    const ValidatorReport mono = check_monotone(op, sub_seed(cfg.seed, "monotone"), 1000, 10.0, 1e-10);
    const std::array<double, 3> radii{1.0, 10.0, 100.0};
    const ValidatorReport coer = check_coercive(op, radii, sub_seed(cfg.seed, "coercive"), 64);

    ValidatorReport psd;
    psd.passed = true;
    psd.worst_value = std::numeric_limits<double>::infinity();
    for (const HVector& u : seeded_points(sub_seed(cfg.seed, "jacobian"), 20, op.dim, 5.0)) {
        const double lam = min_sym_eig(jacobian(op, u, cfg.flow.fd_step));
        ++psd.samples_checked;
        if (lam < psd.worst_value) {
            psd.worst_value = lam;
            if (lam < -1e-8) psd.witness = std::make_pair(u, HVector{lam});
        }
    }
    psd.passed = psd.worst_value >= -1e-8;
    if (psd.passed) psd.witness.reset();

    auto declared = [](bool flag, bool observed) {
        return std::string(" [declared ") + (flag ? "true" : "false") +
               (flag == observed ? ", confirmed]" : ", CONTRADICTED]");
    };
    print_report(out, "monotone" + declared(op.declared_monotone, mono.passed), mono);
    print_report(out, "coercive (finite-radius proxy)" + declared(op.declared_coercive, coer.passed), coer);
    print_report(out, "jacobian symmetric part >= 0", psd);

    const bool ok = mono.passed && coer.passed && psd.passed;
    out << (ok ? "all certificates passed\n" : "certificate failure\n");
    return ok ? 0 : 1;
}

int cmd_flow(const ExperimentConfig& cfg, std::ostream& out) {
    if (!cfg.a) throw InvalidInput("flow: --a is required");
    const double a = *cfg.a;

    if (!cfg.replay.empty()) {
        std::ifstream in(cfg.replay);
        if (!in) throw InvalidInput("flow: cannot open " + cfg.replay);
        const FlowTrace trace = io::read_trace_csv(in, a, cfg.flow.ode_rel_tol);
        const ValidatorReport decay = verify_decay(trace);
        const ValidatorReport vdot = verify_vdot_bound(trace);
        out << "replay " << cfg.replay << " (" << trace.records.size() << " records)\n";
        print_report(out, "verify_decay", decay);
        print_report(out, "verify_vdot_bound", vdot);
        if (!decay.passed) out << "FAILED: verify_decay\n";
        else if (!vdot.passed) out << "FAILED: verify_vdot_bound\n";
        return decay.passed && vdot.passed ? 0 : 1;
    }

    const OperatorSpec op = build_operator(cfg);
    const HVector h = build_target(cfg.target, op.dim);
    const RegularizedSolution sol = integrate_flow(op, a, h, HVector(op.dim), cfg.flow);
    const FlowTrace& trace = sol.trace;

    const fs::path csv = fs::path(cfg.trace_dir) / ("flow_" + op.name + ".csv");
    write_file(csv, io::trace_to_csv(trace));

    out << "operator " << op.name << " (dim " << op.dim << "), a = " << io::format_double(a) << '\n';
    out << "h = " << vec_str(h) << '\n';
    out << "terminated_by = " << to_string(trace.terminated_by);
    if (!trace.message.empty()) out << " (" << trace.message << ")";
    out << "\nt_end = " << io::format_double(trace.t_end()) << ", steps = " << trace.steps()
        << ", rejected = " << trace.rejected_steps << '\n';
    out << "g0 = " << io::format_double(trace.g0) << ", g(t_end) = " << io::format_double(sol.residual)
        << ", predicted t_end = ln(g0/residual_tol) = "
        << io::format_double(std::log(trace.g0 / cfg.flow.residual_tol)) << '\n';
    out << "u_a = " << vec_str(sol.u_a) << '\n';
    out << "trace: " << csv.string() << '\n';

    const ValidatorReport decay = verify_decay(trace);
    const ValidatorReport vdot = verify_vdot_bound(trace);
    const ValidatorReport tail = verify_tail_bound(op, a, h, trace, sol.u_a);
    print_report(out, "verify_decay", decay);
    print_report(out, "verify_vdot_bound", vdot);
    print_report(out, "verify_tail_bound", tail);

    if (!sol.converged()) {
        out << "FAILED: flow (" << to_string(trace.terminated_by) << ")\n";
        return 1;
    }
    if (!decay.passed) out << "FAILED: verify_decay\n";
    else if (!vdot.passed) out << "FAILED: verify_vdot_bound\n";
    else if (!tail.passed) out << "FAILED: verify_tail_bound\n";
    return decay.passed && vdot.passed && tail.passed ? 0 : 1;
}

int cmd_solve(const ExperimentConfig& cfg, std::ostream& out) {
    const OperatorSpec op = build_operator(cfg);
    const HVector h = build_target(cfg.target, op.dim);
    ContinuationOptions opts;
    opts.minty_seed = sub_seed(cfg.seed, "minty");
    const SolveReport report = run_continuation(op, h, cfg.schedule, cfg.flow, opts);

    const fs::path report_path(cfg.report_path);
    const fs::path report_dir = report_path.has_parent_path() ? report_path.parent_path() : fs::path(".");
    std::vector<std::string> trace_paths;
    for (std::size_t i = 0; i < report.stages.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "stage_%02zu.csv", i);
        const fs::path csv = fs::path(cfg.trace_dir) / name;
        write_file(csv, io::trace_to_csv(report.stages[i].trace));
        trace_paths.push_back(fs::proximate(csv, report_dir).generic_string());
    }

    auto doc = io::to_json(report, trace_paths);
    doc["requested_tol"] = cfg.tol;
    bool oracle_ok = true;
    if (cfg.oracle) {
        const oracle::OracleResult ref = oracle::solve(op, h);
        const double dist = norm(ref.u - report.final_u);
        oracle_ok = ref.converged && dist <= 1e-5;
        doc["oracle_check"] = {{"u_oracle", io::to_json(ref.u)},
                               {"oracle_residual", ref.residual},
                               {"distance", dist},
                               {"passed", oracle_ok}};
        out << "oracle: " << verdict(oracle_ok) << " (|u - u_oracle| = " << io::format_double(dist) << ")\n";
    }
    write_file(report_path, doc.dump(2) + "\n");

    out << "operator " << op.name << " (dim " << op.dim << "), " << report.stages.size() << " stages\n";
    for (const auto& s : report.stages) {
        out << "  a = " << io::format_double(s.a) << "  |u_a| = " << io::format_double(s.norm_u)
            << "  residual_eq6 = " << io::format_double(s.residual_eq6)
            << "  t_end = " << io::format_double(s.t_end) << "  " << to_string(s.terminated_by) << '\n';
    }
    out << "final_u = " << vec_str(report.final_u) << '\n';
    out << "final_residual_eq5 = " << io::format_double(report.final_residual_eq5) << '\n';
    print_report(out, "bound_report", report.bound_report);
    print_report(out, "cauchy_report", report.cauchy_report);
    print_report(out, "minty_report", report.minty_report);
    out << "report: " << report_path.string() << '\n';

    std::string failure;
    if (!report.completed) failure = "stage " + std::to_string(*report.failed_stage) + " flow";
    else if (!(report.final_residual_eq5 <= cfg.tol)) failure = "final_residual_eq5";
    else if (!report.bound_report.passed) failure = "bound_report";
    else if (!report.cauchy_report.passed) failure = "cauchy_report";
    else if (!report.minty_report.passed) failure = "minty_report";
    else if (!oracle_ok) failure = "oracle_check";
    if (!failure.empty()) {
        out << "FAILED: " << failure << '\n';
        return 1;
    }
    return 0;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Solve monotone operator equations F(u) = h by regularized DSM flows"};
    app.require_subcommand(1);

    std::string config_path, op_name, target, trace_dir, report, replay;
    std::size_t dim = 0;
    double a = 0, a0 = 0, decay = 0, a_min = 0, tol = 0, ode_tol = 0, max_t = 0, residual_tol = 0;
    std::uint64_t seed = 0;
    bool oracle_flag = false;

    struct Opts {
        CLI::Option *config, *op, *dim, *a, *a0, *decay, *a_min, *tol, *ode_tol, *max_t, *residual_tol,
            *target, *seed, *trace_dir, *report, *oracle, *replay;
    };
    auto add_common = [&](CLI::App* sub, Opts& o) {
        o.config = sub->add_option("--config", config_path, "JSON config file; flags override it");
        o.op = sub->add_option("--operator", op_name, "gallery operator name");
        o.dim = sub->add_option("--dim", dim, "dimension (scalar operators force 1)");
        o.a = sub->add_option("--a", a, "regularization parameter for a single flow");
        o.a0 = sub->add_option("--a0", a0, "first regularization parameter");
        o.decay = sub->add_option("--decay-factor", decay, "geometric schedule ratio in (0,1)");
        o.a_min = sub->add_option("--a-min", a_min, "last regularization parameter");
        o.tol = sub->add_option("--tol", tol, "required |F(u) - h| for solve");
        o.ode_tol = sub->add_option("--ode-tol", ode_tol, "local error tolerance of the integrator");
        o.max_t = sub->add_option("--max-t", max_t, "flow time horizon");
        o.residual_tol = sub->add_option("--residual-tol", residual_tol, "flow stop tolerance on g(t)");
        o.target = sub->add_option("--target", target,
                                   "ones | ones*<s> | ones:<s> | zeros | seeded_random(<seed>,<cap>) | explicit:[...]");
        o.seed = sub->add_option("--seed", seed, "master seed");
        o.trace_dir = sub->add_option("--trace-dir", trace_dir, "directory for trace CSV files");
        o.report = sub->add_option("--report", report, "path of the JSON solve report");
        o.oracle = sub->add_flag("--oracle", oracle_flag, "cross-check against Newton/bisection");
        o.replay = nullptr;
    };

    CLI::App* gallery = app.add_subcommand("gallery", "list gallery operators");
    Opts verify_o{}, flow_o{}, solve_o{};
    CLI::App* verify = app.add_subcommand("verify", "check monotonicity, coercivity and F' >= 0");
    add_common(verify, verify_o);
    CLI::App* flow = app.add_subcommand("flow", "integrate one regularized flow at fixed a");
    add_common(flow, flow_o);
    flow_o.replay = flow->add_option("--replay", replay, "verify an existing trace CSV");
    CLI::App* solve = app.add_subcommand("solve", "run the a -> 0 continuation");
    add_common(solve, solve_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    try {
        if (gallery->parsed()) return cmd_gallery(out);

        Opts& o = verify->parsed() ? verify_o : flow->parsed() ? flow_o : solve_o;
        ExperimentConfig cfg;
        if (o.config->count()) {
            std::ifstream in(config_path);
            if (!in) throw InvalidInput("cannot open config " + config_path);
            apply_json(cfg, nlohmann::json::parse(in));
        }
        if (o.op->count()) cfg.op_name = op_name;
        if (o.dim->count()) cfg.dim = dim;
        if (o.a->count()) cfg.a = a;
        if (o.a0->count()) cfg.schedule.a0 = a0;
        if (o.decay->count()) cfg.schedule.decay_factor = decay;
        if (o.a_min->count()) cfg.schedule.a_min = a_min;
        if (o.tol->count()) cfg.tol = tol;
        if (o.ode_tol->count()) cfg.flow.ode_rel_tol = ode_tol;
        if (o.max_t->count()) cfg.flow.max_time = max_t;
        if (o.residual_tol->count()) cfg.flow.residual_tol = residual_tol;
        if (o.target->count()) {
            cfg.target_text = target;
            cfg.target = parse_target(target);
        }
        if (o.seed->count()) cfg.seed = seed;
        if (o.trace_dir->count()) cfg.trace_dir = trace_dir;
        if (o.report->count()) cfg.report_path = report;
        if (o.oracle->count()) cfg.oracle = oracle_flag;
        if (o.replay && o.replay->count()) cfg.replay = replay;

        if (verify->parsed()) return cmd_verify(cfg, out);
        if (flow->parsed()) return cmd_flow(cfg, out);
        return cmd_solve(cfg, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace dsm::cli
