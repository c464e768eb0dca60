#include "dsm/validators.hpp"

#include "dsm/errors.hpp"
#include "dsm/sampling.hpp"

#include <algorithm>
#include <limits>

namespace dsm {

double monotone_pairing(const OperatorSpec& op, const HVector& u, const HVector& v) {
    return inner(evaluate(op, u) - evaluate(op, v), u - v);
}

double coercivity_quotient(const OperatorSpec& op, const HVector& u) {
    const double r = norm(u);
    if (r == 0.0) throw InvalidInput("coercivity_quotient: u must be nonzero");
    return inner(u, evaluate(op, u)) / r;
}

ValidatorReport check_monotone(const OperatorSpec& op, std::uint64_t seed, std::size_t n_pairs,
                               double radius, double tol, Exec exec) {
    if (n_pairs < 1) throw InvalidInput("check_monotone: n_pairs must be >= 1");
    if (!(radius > 0.0)) throw InvalidInput("check_monotone: radius must be positive");

    Rng rng(seed);
    std::vector<std::pair<HVector, HVector>> pairs;
    pairs.reserve(n_pairs);
    for (std::size_t k = 0; k < n_pairs; ++k) {
        HVector u = uniform_in_ball(rng, op.dim, radius);
        HVector v = uniform_in_ball(rng, op.dim, radius);
        pairs.emplace_back(std::move(u), std::move(v));
    }

    const auto values = kernels::map_indexed(n_pairs, exec, [&](std::size_t k) {
        return monotone_pairing(op, pairs[k].first, pairs[k].second);
    });

    const auto worst = static_cast<std::size_t>(
        std::min_element(values.begin(), values.end()) - values.begin());
    ValidatorReport report;
    report.samples_checked = n_pairs;
    report.worst_value = values[worst];
    report.passed = values[worst] >= -tol;
    if (!report.passed) report.witness = pairs[worst];
    return report;
}

ValidatorReport check_coercive(const OperatorSpec& op, std::span<const double> radii,
                               std::uint64_t directions_seed, std::size_t n_dirs, Exec exec) {
    if (radii.size() < 2) throw InvalidInput("check_coercive: need at least two radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
            throw InvalidInput("check_coercive: radii must be positive and ascending");
        }
    }

    const std::size_t n = op.dim;
    std::vector<HVector> dirs;
    dirs.reserve(2 * n + n_dirs);
    for (std::size_t i = 0; i < n; ++i) {
        for (double sign : {1.0, -1.0}) {
            HVector d(n);
            d[i] = sign;
            dirs.push_back(std::move(d));
        }
    }
    Rng rng(directions_seed);
    for (std::size_t k = 0; k < n_dirs; ++k) dirs.push_back(unit_direction(rng, n));

    const std::size_t nd = dirs.size();
    const auto q = kernels::map_indexed(radii.size() * nd, exec, [&](std::size_t k) {
        const double r = radii[k / nd];
        return coercivity_quotient(op, r * dirs[k % nd]);
    });

    std::vector<double> min_q(radii.size(), std::numeric_limits<double>::infinity());
    std::size_t argmin_last = 0;
    for (std::size_t ri = 0; ri < radii.size(); ++ri) {
        for (std::size_t di = 0; di < nd; ++di) {
            const double value = q[ri * nd + di];
            if (value < min_q[ri]) {
                min_q[ri] = value;
                if (ri + 1 == radii.size()) argmin_last = di;
            }
        }
    }

    bool increasing = true;
    for (std::size_t ri = 1; ri < radii.size(); ++ri) increasing = increasing && min_q[ri] > min_q[ri - 1];
    const double first = min_q.front();
    const double last = min_q.back();
    const bool grows = last > 0.0 && last >= 2.0 * first;

    ValidatorReport report;
    report.samples_checked = q.size();
    report.worst_value = last;
    report.passed = increasing && grows;
    if (!report.passed) {
        report.witness = std::make_pair(radii.front() * dirs[argmin_last],
                                        radii.back() * dirs[argmin_last]);
    }
    return report;
}

}  // namespace dsm
