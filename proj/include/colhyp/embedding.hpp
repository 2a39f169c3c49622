#pragma once

#include "colhyp/fields.hpp"
#include "colhyp/grid.hpp"
#include "colhyp/mollifier.hpp"
#include "colhyp/smooth_field.hpp"

namespace colhyp {

/// Interval of a sampled path on which its embedding at scale `eta` can be evaluated:
/// the grid range shrunk by the kernel support radius on both sides.
std::pair<double, double> safe_interval(const Grid1D& grid, const Mollifier& m, double eta);

/// x -> int chi(x-y) rho_eps(x-y) p(y) dy, trapezoid sum over the path nodes.
///
/// The path lives on the `axis` coordinate; the result does not depend on the other one.
/// Requires grid step <= eps/8 (ResolutionError). Evaluation outside safe_interval
/// throws DomainError. Derivatives convolve with derivatives of the kernel.
SmoothField embed_path(const SampledProcess& p, const Mollifier& m, double eps,
                       Axis axis = Axis::x);

/// Convolution of p with the k-th derivative of chi rho_eps: the embedding of p^(k).
SmoothField embed_derivative(const SampledProcess& p, const Mollifier& m, double eps, int order,
                             Axis axis = Axis::x);

/// embed_path with kernel scale eta(eps) while the provenance keeps the ladder value eps.
SmoothField scaled_embed(const SampledProcess& p, const Mollifier& m, double eps, ScaleMap map,
                         Axis axis = Axis::x, int order = 0);

/// Tabulate a one-variable field and its derivatives up to `orders` + 1 on `grid` and
/// return a piecewise cubic Hermite interpolant (derivatives up to `orders`).
///
/// Used to make repeated evaluation of embedded coefficients cheap inside solvers.
SmoothField tabulate_field(const SmoothField& f, const Grid1D& grid, Axis axis, int orders = 1);

/// C^2 cubic B-spline through the nodes of a path (a classical smooth version of it).
SmoothField spline_field(const SampledProcess& p, Axis axis = Axis::x);

}  // namespace colhyp
