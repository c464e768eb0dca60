#include "dsm/io.hpp"

#include "dsm/errors.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace dsm::io {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trace_csv(std::ostream& out, const FlowTrace& trace) {
    out << kTraceHeader << '\n';
    for (const auto& r : trace.records) {
        out << format_double(r.t) << ',' << format_double(r.g) << ',' << format_double(r.g_theory)
            << ',' << format_double(r.vdot_norm) << ',' << format_double(r.vdot_bound) << ','
            << format_double(r.step_size) << '\n';
    }
}

std::string trace_to_csv(const FlowTrace& trace) {
    std::ostringstream os;
    write_trace_csv(os, trace);
    return os.str();
}

FlowTrace read_trace_csv(std::istream& in, double a, double ode_rel_tol) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("trace csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kTraceHeader) throw InvalidInput("trace csv: unexpected header '" + line + "'");

    FlowTrace trace;
    trace.a = a;
    trace.ode_rel_tol = ode_rel_tol;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream row(line);
        double values[6];
        for (int i = 0; i < 6; ++i) {
            std::string cell;
            if (!std::getline(row, cell, ',')) {
                throw InvalidInput("trace csv: too few fields on line " + std::to_string(lineno));
            }
            try {
                std::size_t used = 0;
                values[i] = std::stod(cell, &used);
                if (used != cell.size() && cell.substr(used) != "\r") throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw InvalidInput("trace csv: bad number '" + cell + "' on line " + std::to_string(lineno));
            }
        }
        trace.records.push_back({values[0], values[1], values[2], values[3], values[4], values[5]});
    }
    if (trace.records.empty()) throw InvalidInput("trace csv: no records");
    for (std::size_t i = 1; i < trace.records.size(); ++i) {
        if (!(trace.records[i].t > trace.records[i - 1].t)) {
            throw InvalidInput("trace csv: times are not strictly increasing");
        }
    }
    trace.g0 = trace.records.front().g;
    trace.terminated_by = Termination::residual_tol_reached;
    return trace;
}

nlohmann::ordered_json to_json(const HVector& v) { return nlohmann::ordered_json(v.entries()); }

nlohmann::ordered_json to_json(const ValidatorReport& r) {
    nlohmann::ordered_json j;
    j["passed"] = r.passed;
    j["samples_checked"] = r.samples_checked;
    // JSON has no NaN/inf; those become null.
    if (std::isfinite(r.worst_value)) j["worst_value"] = r.worst_value;
    else j["worst_value"] = nullptr;
    if (r.witness) j["witness"] = {to_json(r.witness->first), to_json(r.witness->second)};
    else j["witness"] = nullptr;
    return j;
}

nlohmann::ordered_json to_json(const MintyReport& r) {
    auto j = to_json(static_cast<const ValidatorReport&>(r));
    j["closing_residual"] = r.closing_residual;
    j["tolerance"] = r.tolerance;
    return j;
}

nlohmann::ordered_json to_json(const SolveReport& report, const std::vector<std::string>& trace_paths) {
    nlohmann::ordered_json j;
    j["operator_name"] = report.operator_name;
    j["dim"] = report.dim;
    j["h"] = to_json(report.h);
    auto stages = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < report.stages.size(); ++i) {
        const auto& s = report.stages[i];
        nlohmann::ordered_json st;
        st["a"] = s.a;
        st["u_a"] = to_json(s.u_a);
        st["residual_eq6"] = s.residual_eq6;
        st["norm_u"] = s.norm_u;
        st["flow_summary"] = {{"t_end", s.t_end},
                              {"steps", s.steps},
                              {"g0", s.g0},
                              {"terminated_by", std::string(to_string(s.terminated_by))}};
        if (i < trace_paths.size() && !trace_paths[i].empty()) st["trace_csv"] = trace_paths[i];
        stages.push_back(std::move(st));
    }
    j["stages"] = std::move(stages);
    j["final_u"] = to_json(report.final_u);
    j["final_residual_eq5"] = report.final_residual_eq5;
    j["bound_report"] = to_json(report.bound_report);
    j["minty_report"] = to_json(report.minty_report);
    j["cauchy_report"] = to_json(report.cauchy_report);
    j["completed"] = report.completed;
    if (report.failed_stage) j["failed_stage"] = *report.failed_stage;
    else j["failed_stage"] = nullptr;
    return j;
}

}  // namespace dsm::io
