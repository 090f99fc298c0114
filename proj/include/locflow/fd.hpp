#pragma once

#include "locflow/field.hpp"

namespace locflow {

// Single-axis derivative of order 1 or 2. Interior nodes use 4th-order
// central stencils; on frozen grids the boundary collar falls back to
// 2nd-order stencils (one-sided on the outermost layer).
ScalarField partial_derivative(const ScalarField& f, int axis, int order);
TensorField axis_derivative(const TensorField& t, int axis, int order);

// All-axes coordinate gradient; the derivative slot is prepended as a new
// covariant index. Trailing symmetric storage is preserved.
TensorField coordinate_gradient(const TensorField& t);
TensorField coordinate_gradient(const MetricField& g);
TensorField gradient(const ScalarField& f);

// Laplace-Beltrami operator in divergence form:
//   (1/sqrt g) d_i ( sqrt g g^{ij} d_j f ).
// On periodic grids the central stencils make discrete integration by parts
// against this operator exact to roundoff.
ScalarField laplace_beltrami(const ScalarField& f, const MetricField& g);

// Raw kernel shared by the wrappers: differentiates `ncomp` interleaved
// components along `axis`.
void apply_derivative(const ChartGrid& grid, const double* in, double* out, int ncomp,
                      int axis, int order);

} // namespace locflow
