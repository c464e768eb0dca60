#include "dsm/operator.hpp"

#include "dsm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace dsm {

HVector evaluate(const OperatorSpec& op, const HVector& u) {
    require_dim(u, op.dim, "evaluate");
    HVector out = op.eval(u);
    if (out.dim() != op.dim) {
        throw InvalidInput("evaluate: operator '" + op.name + "' returned wrong dimension");
    }
    return out;
}

DenseMatrix fd_jacobian(const OperatorSpec& op, const HVector& u, double fd_step, Exec exec) {
    require_dim(u, op.dim, "fd_jacobian");
    if (!(fd_step > 0.0)) throw InvalidInput("fd_jacobian: fd_step must be positive");
    const std::size_t n = op.dim;
    auto columns = kernels::map_indexed(n, exec, [&](std::size_t j) {
        const double step = fd_step * (1.0 + std::abs(u[j]));
        HVector up = u;
        HVector dn = u;
        up[j] += step;
        dn[j] -= step;
        HVector fu = evaluate(op, up);
        HVector fd = evaluate(op, dn);
        if (!all_finite(fu) || !all_finite(fd)) {
            throw NumericalError("fd_jacobian: non-finite value of '" + op.name +
                                 "' near the evaluation point (column " + std::to_string(j) + ")");
        }
        // Divide by the realized spacing, not 2*step, to cancel representation error in u +/- step.
        const double spacing = up[j] - dn[j];
        fu -= fd;
        fu *= 1.0 / spacing;
        return fu;
    });
    DenseMatrix jac(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) jac(i, j) = columns[j][i];
    return jac;
}

DenseMatrix jacobian(const OperatorSpec& op, const HVector& u, double fd_step, Exec exec) {
    require_dim(u, op.dim, "jacobian");
    if (!(fd_step > 0.0)) throw InvalidInput("jacobian: fd_step must be positive");
    if (!op.has_jacobian()) return fd_jacobian(op, u, fd_step, exec);
    DenseMatrix jac = op.jac(u);
    if (jac.rows() != op.dim || jac.cols() != op.dim) {
        throw InvalidInput("jacobian: operator '" + op.name + "' returned wrong shape");
    }
    if (!jac.all_finite()) throw NumericalError("jacobian: non-finite entries for '" + op.name + "'");
    return jac;
}

OperatorSpec shift_target(const OperatorSpec& op, const HVector& y) {
    require_dim(y, op.dim, "shift_target");
    OperatorSpec shifted = op;
    shifted.eval = [f = op.eval, y](const HVector& u) { return f(u) - y; };
    return shifted;
}

namespace {

DenseMatrix tridiag_matrix(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 2.0;
        if (i + 1 < n) {
            m(i, i + 1) = -1.0;
            m(i + 1, i) = -1.0;
        }
    }
    return m;
}

// Fixed skew-symmetric coupling: +1.5 on the superdiagonal, -1.5 below.
DenseMatrix skew_matrix(std::size_t n) {
    DenseMatrix s(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        s(i, i + 1) = 1.5;
        s(i + 1, i) = -1.5;
    }
    return s;
}

OperatorSpec linear_operator(std::string name, DenseMatrix m, bool strict, bool coercive) {
    const std::size_t n = m.rows();
    OperatorSpec op;
    op.name = std::move(name);
    op.dim = n;
    op.eval = [m](const HVector& u) { return m * u; };
    op.jac = [m](const HVector&) { return m; };
    op.declared_monotone = true;
    op.declared_strictly_monotone = strict;
    op.declared_coercive = coercive;
    return op;
}

OperatorSpec scalar_operator(std::string name, double (*f)(double), double (*df)(double),
                             bool monotone, bool strict, bool coercive) {
    OperatorSpec op;
    op.name = std::move(name);
    op.dim = 1;
    op.eval = [f](const HVector& u) { return HVector{f(u[0])}; };
    op.jac = [df](const HVector& u) { return DenseMatrix(1, 1, {df(u[0])}); };
    op.declared_monotone = monotone;
    op.declared_strictly_monotone = strict;
    op.declared_coercive = coercive;
    return op;
}

OperatorSpec matrix_plus_cube(std::string name, DenseMatrix m, double linear_shift) {
    const std::size_t n = m.rows();
    for (std::size_t i = 0; i < n; ++i) m(i, i) += linear_shift;
    OperatorSpec op;
    op.name = std::move(name);
    op.dim = n;
    op.eval = [m](const HVector& u) {
        HVector out = m * u;
        for (std::size_t i = 0; i < u.dim(); ++i) out[i] += u[i] * u[i] * u[i];
        return out;
    };
    op.jac = [m](const HVector& u) {
        DenseMatrix jac = m;
        for (std::size_t i = 0; i < u.dim(); ++i) jac(i, i) += 3.0 * u[i] * u[i];
        return jac;
    };
    op.declared_monotone = true;
    op.declared_strictly_monotone = true;
    op.declared_coercive = true;
    return op;
}

const std::vector<GalleryInfo> kCatalog = {
    {"scalar_cubic", DimPolicy::scalar, "f(x) = x^3"},
    {"scalar_affine_sin", DimPolicy::scalar, "f(x) = 2x + sin x"},
    {"identity", DimPolicy::any, "F(u) = u"},
    {"spd_tridiag", DimPolicy::any, "F(u) = M u, M = tridiag(-1, 2, -1)"},
    {"convex_gradient", DimPolicy::any, "F(u)_i = u_i^3 + u_i"},
    {"skew_plus_cubic", DimPolicy::any, "F(u) = M u + S u + u^3, S skew"},
    {"rank_one_projector", DimPolicy::at_least_two, "F(u) = (e.u) e, e = e_1; monotone, not coercive"},
    {"scalar_negation", DimPolicy::scalar, "f(x) = -x; not monotone"},
};

const GalleryInfo& lookup(std::string_view name) {
    auto it = std::find_if(kCatalog.begin(), kCatalog.end(),
                           [&](const GalleryInfo& g) { return g.name == name; });
    if (it == kCatalog.end()) throw InvalidInput("unknown gallery operator '" + std::string(name) + "'");
    return *it;
}

}  // namespace

const std::vector<GalleryInfo>& gallery_catalog() { return kCatalog; }

std::string_view to_string(DimPolicy p) {
    switch (p) {
        case DimPolicy::scalar: return "scalar (dim=1)";
        case DimPolicy::any: return "any dim >= 1";
        case DimPolicy::at_least_two: return "dim >= 2";
    }
    return "?";
}

std::size_t resolve_dim(std::string_view name, std::size_t requested) {
    const auto& info = lookup(name);
    switch (info.dim_policy) {
        case DimPolicy::scalar: return 1;
        case DimPolicy::any:
            if (requested < 1) throw InvalidInput("dimension must be at least 1");
            return requested;
        case DimPolicy::at_least_two:
            if (requested < 2) {
                throw InvalidInput("operator '" + std::string(name) + "' needs dim >= 2");
            }
            return requested;
    }
    return requested;
}

OperatorSpec make_operator(std::string_view name, std::size_t dim) {
    const std::size_t n = resolve_dim(name, dim);
    if (name == "scalar_cubic") {
        return scalar_operator(
            "scalar_cubic", [](double x) { return x * x * x; }, [](double x) { return 3.0 * x * x; },
            true, true, true);
    }
    if (name == "scalar_affine_sin") {
        return scalar_operator(
            "scalar_affine_sin", [](double x) { return 2.0 * x + std::sin(x); },
            [](double x) { return 2.0 + std::cos(x); }, true, true, true);
    }
    if (name == "scalar_negation") {
        return scalar_operator(
            "scalar_negation", [](double x) { return -x; }, [](double) { return -1.0; }, false,
            false, false);
    }
    if (name == "identity") return linear_operator("identity", DenseMatrix::identity(n), true, true);
    if (name == "spd_tridiag") return linear_operator("spd_tridiag", tridiag_matrix(n), true, true);
    if (name == "convex_gradient") {
        return matrix_plus_cube("convex_gradient", DenseMatrix(n, n), 1.0);
    }
    if (name == "skew_plus_cubic") {
        DenseMatrix m = tridiag_matrix(n);
        const DenseMatrix s = skew_matrix(n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) += s(i, j);
        return matrix_plus_cube("skew_plus_cubic", std::move(m), 0.0);
    }
    if (name == "rank_one_projector") {
        DenseMatrix p(n, n);
        p(0, 0) = 1.0;
        return linear_operator("rank_one_projector", std::move(p), false, false);
    }
    throw InvalidInput("unknown gallery operator '" + std::string(name) + "'");
}

std::vector<OperatorSpec> make_gallery(std::size_t dim) {
    std::vector<OperatorSpec> out;
    out.reserve(kCatalog.size());
    for (const auto& info : kCatalog) {
        const std::size_t n = info.dim_policy == DimPolicy::at_least_two ? std::max<std::size_t>(dim, 2) : dim;
        out.push_back(make_operator(info.name, n));
    }
    return out;
}

}  // namespace dsm
