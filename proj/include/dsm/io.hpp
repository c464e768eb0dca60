#pragma once

#include "dsm/continuation.hpp"
#include "dsm/flow.hpp"
#include "dsm/validators.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace dsm::io {

inline constexpr const char* kTraceHeader = "t,g,g_theory,vdot_norm,vdot_bound,step_size";

/// Decimal with 17 significant digits.
std::string format_double(double x);

void write_trace_csv(std::ostream& out, const FlowTrace& trace);
std::string trace_to_csv(const FlowTrace& trace);

/// Parses a trace CSV. The file does not carry a or ode_rel_tol, so the caller
/// supplies them; g0 is taken from the first record. Throws InvalidInput on a
/// bad header or malformed row.
FlowTrace read_trace_csv(std::istream& in, double a, double ode_rel_tol);

nlohmann::ordered_json to_json(const HVector& v);
nlohmann::ordered_json to_json(const ValidatorReport& r);
nlohmann::ordered_json to_json(const MintyReport& r);

/// SolveReport as a JSON document. trace_paths[i], when non-empty, is the
/// relative path of stage i's trace CSV.
nlohmann::ordered_json to_json(const SolveReport& report,
                               const std::vector<std::string>& trace_paths = {});

}  // namespace dsm::io
