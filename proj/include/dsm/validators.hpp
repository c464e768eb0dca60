#pragma once

#include "dsm/hvector.hpp"
#include "dsm/operator.hpp"
#include "dsm/parallel.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>

namespace dsm {

/// Evidence for one checked hypothesis or bound. A failed report always
/// carries a witness pair from which the offending value can be recomputed.
struct ValidatorReport {
    bool passed = false;
    std::size_t samples_checked = 0;
    double worst_value = 0.0;
    std::optional<std::pair<HVector, HVector>> witness;
};

/// (F(u) - F(v), u - v)
double monotone_pairing(const OperatorSpec& op, const HVector& u, const HVector& v);

/// (u, F(u)) / |u|, for u != 0.
double coercivity_quotient(const OperatorSpec& op, const HVector& u);

/// Samples n_pairs pairs uniformly in the ball of the given radius and checks
/// monotone_pairing >= -tol on each. worst_value is the minimum pairing; on
/// failure the witness is the minimizing pair.
ValidatorReport check_monotone(const OperatorSpec& op, std::uint64_t seed, std::size_t n_pairs,
                               double radius, double tol, Exec exec = Exec::parallel);

/// Finite-radius proxy for coercivity. Probes the 2n signed coordinate axes
/// plus n_dirs seeded unit directions, the same set at every radius. Passes iff
/// the minimum quotient over directions is strictly increasing in r, positive
/// at the largest radius, and at least doubles from the smallest radius to the
/// largest. worst_value is the minimum quotient at the largest radius; on
/// failure the witness is (r_min d, r_max d) for the minimizing direction d.
ValidatorReport check_coercive(const OperatorSpec& op, std::span<const double> radii,
                               std::uint64_t directions_seed, std::size_t n_dirs,
                               Exec exec = Exec::parallel);

}  // namespace dsm
