// Serial reference against the OpenMP path of each sampling kernel.
// Arg 0 selects the execution mode (0 serial, 1 parallel), arg 1 the dimension.

#include "dsm/continuation.hpp"
#include "dsm/linalg.hpp"
#include "dsm/operator.hpp"
#include "dsm/sampling.hpp"
#include "dsm/validators.hpp"

#include <benchmark/benchmark.h>

#include <array>

namespace {

using namespace dsm;

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void set_label(benchmark::State& st) { st.SetLabel(st.range(0) ? "parallel" : "serial"); }

void BM_CheckMonotone(benchmark::State& st) {
    const auto op = make_operator("skew_plus_cubic", static_cast<std::size_t>(st.range(1)));
    for (auto _ : st) benchmark::DoNotOptimize(check_monotone(op, 1, 1000, 10.0, 1e-10, mode(st)));
    set_label(st);
}

void BM_CheckCoercive(benchmark::State& st) {
    const auto op = make_operator("convex_gradient", static_cast<std::size_t>(st.range(1)));
    const std::array<double, 3> radii{1.0, 10.0, 100.0};
    for (auto _ : st) benchmark::DoNotOptimize(check_coercive(op, radii, 2, 64, mode(st)));
    set_label(st);
}

// No analytic Jacobian is used here, so every column costs two evaluations.
void BM_FdJacobian(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(1));
    const auto op = make_operator("skew_plus_cubic", n);
    const HVector u = seeded_points(3, 1, n, 5.0).front();
    for (auto _ : st) benchmark::DoNotOptimize(fd_jacobian(op, u, 1e-6, mode(st)));
    set_label(st);
}

void BM_InvNormProbes(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(1));
    const auto op = make_operator("skew_plus_cubic", n);
    const DenseMatrix jac = jacobian(op, seeded_points(4, 1, n, 5.0).front());
    for (auto _ : st) benchmark::DoNotOptimize(inv_norm_bound_check(jac, 0.01, 50, 5, mode(st)));
    set_label(st);
}

void BM_MintySweep(benchmark::State& st) {
    const auto n = static_cast<std::size_t>(st.range(1));
    const auto op = make_operator("convex_gradient", n);
    const HVector u = seeded_points(6, 1, n, 2.0).front();
    const HVector h = evaluate(op, u);
    for (auto _ : st) benchmark::DoNotOptimize(minty_diagnostic(op, u, h, {1e-1, 1e-2, 1e-3}, 100, 7, mode(st)));
    set_label(st);
}

void shapes(benchmark::internal::Benchmark* b) {
    for (int exec : {0, 1})
        for (int n : {5, 20, 80}) b->Args({exec, n});
}

BENCHMARK(BM_CheckMonotone)->Apply(shapes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_CheckCoercive)->Apply(shapes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_FdJacobian)->Apply(shapes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_InvNormProbes)->Apply(shapes)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MintySweep)->Apply(shapes)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
