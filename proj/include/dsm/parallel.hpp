#pragma once

#include <cstddef>
#include <exception>
#include <optional>
#include <vector>

namespace dsm {

/// Selects between the OpenMP kernel and its serial reference. Both write
/// results by index and reduce serially afterwards, so they agree bit for bit.
enum class Exec { serial, parallel };

namespace kernels {

/// out[i] = fn(i) for i in [0, n). An exception thrown by fn is rethrown on
/// the calling thread; with several failures the lowest index wins, matching
/// what the serial loop would report.
template <class Fn>
auto map_indexed(std::size_t n, Exec exec, Fn&& fn) {
    using T = decltype(fn(std::size_t{0}));
    std::vector<T> out;
    out.reserve(n);
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) out.push_back(fn(i));
        return out;
    }
    std::vector<std::optional<T>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            slots[k].emplace(fn(k));
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

}  // namespace kernels
}  // namespace dsm
