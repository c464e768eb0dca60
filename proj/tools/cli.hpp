#pragma once

#include "dsm/continuation.hpp"
#include "dsm/flow.hpp"
#include "dsm/hvector.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dsm::cli {

struct TargetSpec {
    enum class Kind { ones, zeros, seeded_random, explicit_values };
    Kind kind = Kind::ones;
    double scale = 1.0;          // ones
    std::uint64_t seed = 0;      // seeded_random
    double norm_cap = 1.0;       // seeded_random
    std::vector<double> values;  // explicit_values
};

/// Accepts: ones | ones*<s> | ones:<s> | zeros | seeded_random(<seed>,<cap>) |
/// explicit:[x,y,...]
TargetSpec parse_target(const std::string& text);

/// Builds h of the given dimension. Explicit targets must match dim.
HVector build_target(const TargetSpec& spec, std::size_t dim);

struct ExperimentConfig {
    std::string op_name = "convex_gradient";
    std::size_t dim = 3;
    std::optional<double> a;
    TargetSpec target;
    std::string target_text = "ones";
    ContinuationSchedule schedule;
    FlowConfig flow;
    double tol = 1e-5;
    std::uint64_t seed = 0;
    std::string trace_dir = "traces";
    std::string report_path = "report.json";
    bool oracle = false;
    std::string replay;  // flow: verify an existing trace CSV instead of integrating
};

/// Overlays the keys present in a JSON config document onto cfg.
void apply_json(ExperimentConfig& cfg, const nlohmann::json& doc);

int cmd_gallery(std::ostream& out);
int cmd_verify(const ExperimentConfig& cfg, std::ostream& out);
int cmd_flow(const ExperimentConfig& cfg, std::ostream& out);
int cmd_solve(const ExperimentConfig& cfg, std::ostream& out);

/// Full command line entry point; returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace dsm::cli
