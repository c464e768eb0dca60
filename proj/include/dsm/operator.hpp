#pragma once

#include "dsm/hvector.hpp"
#include "dsm/parallel.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace dsm {

using EvalFn = std::function<HVector(const HVector&)>;
using JacobianFn = std::function<DenseMatrix(const HVector&)>;

/// A nonlinear map F: R^n -> R^n with an optional analytic Jacobian F'.
/// The declared_* flags are metadata; the validators test them empirically.
struct OperatorSpec {
    std::string name;
    std::size_t dim = 1;
    EvalFn eval;
    JacobianFn jac;  // empty when no analytic Jacobian is available
    bool declared_monotone = false;
    bool declared_strictly_monotone = false;
    bool declared_coercive = false;

    bool has_jacobian() const noexcept { return static_cast<bool>(jac); }
};

/// F(u). Throws InvalidInput on a dimension mismatch in either direction.
HVector evaluate(const OperatorSpec& op, const HVector& u);

/// Central-difference Jacobian, column j perturbed by fd_step * (1 + |u_j|).
/// Throws NumericalError if F is non-finite at any perturbed point.
DenseMatrix fd_jacobian(const OperatorSpec& op, const HVector& u, double fd_step,
                        Exec exec = Exec::parallel);

/// op.jac(u) when present, otherwise fd_jacobian.
DenseMatrix jacobian(const OperatorSpec& op, const HVector& u, double fd_step = 1e-6,
                     Exec exec = Exec::parallel);

/// G(u) = F(u) - y with the same Jacobian and flags. Reduces F(u) = y to G(u) = 0.
OperatorSpec shift_target(const OperatorSpec& op, const HVector& y);

enum class DimPolicy { scalar, any, at_least_two };

struct GalleryInfo {
    std::string_view name;
    DimPolicy dim_policy;
    std::string_view description;
};

/// Names and dimension policies of every gallery member, in listing order.
const std::vector<GalleryInfo>& gallery_catalog();

/// Dimension the named operator will actually be built with for a requested
/// dim: scalar members are forced to 1. Throws InvalidInput for unknown names
/// or for dims the operator cannot take.
std::size_t resolve_dim(std::string_view name, std::size_t requested);

/// Builds one gallery member by name at the resolved dimension.
OperatorSpec make_operator(std::string_view name, std::size_t dim);

/// Every gallery member; dimension-parameterized ones are built at `dim`
/// (rank_one_projector at max(dim, 2)).
std::vector<OperatorSpec> make_gallery(std::size_t dim = 3);

std::string_view to_string(DimPolicy p);

}  // namespace dsm
