#pragma once

#include <vector>

#include "locflow/field.hpp"

namespace locflow::ref {

// Straightforward serial implementations kept as the reference the parallel
// kernels are tested and benchmarked against. Dense storage (no packed
// symmetry), naive loops, compensated serial summation.

std::vector<double> partial_derivative(const ChartGrid& grid, const std::vector<double>& in,
                                       int ncomp, int axis, int order);

// Kahan-compensated serial integral of f dV_g.
double integrate(const ScalarField& f, const MetricField& g);

struct DenseCurvature {
  int dim = 0;
  std::vector<double> gamma;    // node-major dense dim^3, Gamma^i_{jk}
  std::vector<double> riemann;  // node-major dense dim^4, all-covariant
  std::vector<double> ricci;    // node-major dense dim^2
  std::vector<double> scalar;   // per node
};

// Dense serial curvature chain with its own Gaussian-elimination inverse.
DenseCurvature curvature(const MetricField& g);

// Dense serial |T|_g at one node, all-covariant rank-k input.
double tensor_norm_node(const std::vector<double>& dense, std::int64_t node, int rank,
                        const MetricField& g);

} // namespace locflow::ref
